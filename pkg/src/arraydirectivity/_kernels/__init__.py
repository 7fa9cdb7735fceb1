"""Hot numerical kernels with a compiled backend and a numpy fallback.

The compiled module is used when it was built and imports cleanly; setting
``ARRAYDIR_PURE_PYTHON=1`` forces the fallback.  ``BACKEND`` names the one
in use.  Both backends expose:

omni_d2
    second z-derivative of sin(r)/r in phase units (pair kernel)
omni_pair_sum
    weighted sum of ``omni_d2`` over flat pair arrays
omni_objective_population
    plane-constrained objective for a population of planar layouts
upa_objective_curve
    uniform-grid objective as a function of spacing
array_power
    squared magnitude of the array factor on a set of directions
"""

import os

from . import _pykernels as python

_NAMES = (
    "omni_d2",
    "omni_pair_sum",
    "omni_objective_population",
    "upa_objective_curve",
    "array_power",
)

compiled = None
if not os.environ.get("ARRAYDIR_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

_active = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

omni_d2 = _active.omni_d2
omni_pair_sum = _active.omni_pair_sum
omni_objective_population = _active.omni_objective_population
upa_objective_curve = _active.upa_objective_curve
array_power = _active.array_power

__all__ = list(_NAMES) + ["BACKEND", "compiled", "python"]
