"""JSON array description files and result records.

An array file looks like::

    {
      "schema_version": 1,
      "elements": [{"position": [0, 0, 0], "amplitude": 1.0, "phase": 0.0}],
      "pattern": {"u": 0, "v": 1},
      "k": 1.0,
      "direction": {"theta0": "45deg", "phi0": 0.7853981633974483}
    }

``frequency`` (Hz) may replace ``k``.  Angles are radians unless given as a
string with a ``deg`` suffix.  Unknown keys are rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .directivity import ElementPattern
from .geometry import ArrayLayout, DirectionSpec

SCHEMA_VERSION = 1
SPEED_OF_LIGHT = 2.998e8

_TOP_KEYS = {"schema_version", "elements", "pattern", "k", "frequency", "direction"}
_ELEMENT_KEYS = {"position", "amplitude", "phase"}


class SpecError(ValueError):
    """Malformed array description; the message names the offending field."""


@dataclass(frozen=True)
class ArraySpec:
    layout: ArrayLayout
    pattern: ElementPattern
    k: float
    direction: DirectionSpec | None = None


def parse_angle(value, field: str = "angle") -> float:
    """Radians from a number or a string such as ``"45deg"`` or ``"0.5"``."""
    if isinstance(value, bool):
        raise SpecError(f"{field}: expected a number or '<value>deg', got {value!r}")
    if isinstance(value, (int, float)):
        out = float(value)
    elif isinstance(value, str):
        text = value.strip().lower()
        try:
            if text.endswith("deg"):
                out = math.radians(float(text[:-3]))
            else:
                out = float(text.removesuffix("rad"))
        except ValueError:
            raise SpecError(f"{field}: cannot read angle {value!r}") from None
    else:
        raise SpecError(f"{field}: expected a number or '<value>deg', got {value!r}")
    if not math.isfinite(out):
        raise SpecError(f"{field}: angle must be finite")
    return out


def wave_number_from_frequency(frequency: float) -> float:
    return 2.0 * math.pi * frequency / SPEED_OF_LIGHT


def _number(value, field):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise SpecError(f"{field}: expected a finite number, got {value!r}")
    return float(value)


def _reject_unknown(obj, allowed, where):
    extra = sorted(set(obj) - allowed)
    if extra:
        raise SpecError(f"{where}: unknown field(s) {', '.join(extra)}")


def spec_from_dict(doc) -> ArraySpec:
    if not isinstance(doc, dict):
        raise SpecError("document: expected a JSON object")
    _reject_unknown(doc, _TOP_KEYS, "document")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SpecError(f"schema_version: expected {SCHEMA_VERSION}, got {doc.get('schema_version')!r}")

    elements = doc.get("elements")
    if not isinstance(elements, list) or not elements:
        raise SpecError("elements: expected a non-empty list")
    pos, amps, phases = [], [], []
    for i, el in enumerate(elements):
        where = f"elements[{i}]"
        if not isinstance(el, dict):
            raise SpecError(f"{where}: expected an object")
        _reject_unknown(el, _ELEMENT_KEYS, where)
        p = el.get("position")
        if not isinstance(p, list) or len(p) != 3:
            raise SpecError(f"{where}.position: expected a list of 3 numbers")
        pos.append([_number(v, f"{where}.position") for v in p])
        amps.append(_number(el.get("amplitude", 1.0), f"{where}.amplitude"))
        phases.append(_number(el.get("phase", 0.0), f"{where}.phase"))

    pattern_doc = doc.get("pattern", {"u": 0, "v": 1})
    if not isinstance(pattern_doc, dict):
        raise SpecError("pattern: expected an object with u and v")
    _reject_unknown(pattern_doc, {"u", "v"}, "pattern")
    try:
        pattern = ElementPattern(pattern_doc.get("u", 0), pattern_doc.get("v", 1))
    except (TypeError, ValueError) as exc:
        raise SpecError(f"pattern: {exc}") from None

    if "k" in doc and "frequency" in doc:
        raise SpecError("k/frequency: give only one of them")
    if "frequency" in doc:
        k = wave_number_from_frequency(_number(doc["frequency"], "frequency"))
    else:
        k = _number(doc.get("k", 1.0), "k")
    if not k > 0:
        raise SpecError("k: wave number must be positive")

    try:
        layout = ArrayLayout(np.array(pos), np.array(amps), np.array(phases))
    except ValueError as exc:
        raise SpecError(f"elements: {exc}") from None

    direction = None
    if "direction" in doc:
        ddoc = doc["direction"]
        if not isinstance(ddoc, dict):
            raise SpecError("direction: expected an object with theta0 and phi0")
        _reject_unknown(ddoc, {"theta0", "phi0"}, "direction")
        try:
            direction = DirectionSpec(parse_angle(ddoc.get("theta0"), "direction.theta0"),
                                      parse_angle(ddoc.get("phi0", 0.0), "direction.phi0"), k)
        except SpecError:
            raise
        except ValueError as exc:
            raise SpecError(f"direction: {exc}") from None
    return ArraySpec(layout, pattern, k, direction)


def parse_spec_text(text: str) -> ArraySpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return spec_from_dict(doc)


def load_spec(path) -> ArraySpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from None
    return parse_spec_text(text)


def spec_to_dict(layout: ArrayLayout, pattern: ElementPattern, k: float,
                 direction: DirectionSpec | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "elements": [
            {"position": [float(v) for v in p], "amplitude": float(a), "phase": float(ph)}
            for p, a, ph in zip(layout.positions, layout.amplitudes, layout.phases)
        ],
        "pattern": {"u": pattern.u, "v": pattern.v},
        "k": float(k),
    }
    if direction is not None:
        doc["direction"] = {"theta0": direction.theta0, "phi0": direction.phi0}
    return doc


def dump_spec(path, layout, pattern, k, direction=None):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec_to_dict(layout, pattern, k, direction), fh, indent=2)
        fh.write("\n")
