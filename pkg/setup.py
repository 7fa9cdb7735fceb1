import os
import sys

import numpy as np
from setuptools import Extension, setup


def gather_extensions():
    """Cython kernels; skipped when Cython is unavailable or ARRAYDIR_NO_EXT is set."""
    if os.environ.get("ARRAYDIR_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    # Outer loops run under OpenMP; each output keeps a sequential inner sum,
    # so results do not depend on the thread count.
    omp = [] if sys.platform == "darwin" or os.environ.get("ARRAYDIR_NO_OPENMP") else ["-fopenmp"]
    extensions = [
        Extension(
            "arraydirectivity._kernels._ckernels",
            ["src/arraydirectivity/_kernels/_ckernels.pyx"],
            include_dirs=[np.get_include()],
            extra_compile_args=["-O3", *omp],
            extra_link_args=omp,
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )
    ]
    return cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=gather_extensions())
