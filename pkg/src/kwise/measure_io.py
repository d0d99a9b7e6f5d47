"""JSON measure files.

Orbit measure::

    {"kind": "orbit", "n": 6, "weights": {"0": "1/12", "3": "5/6", "6": "1/12"}}

Atomic measure (``+`` for +1, ``-`` for -1)::

    {"kind": "atomic", "n": 2, "atoms": {"++": "1/2", "--": "1/2"}}

Rationals are strings in lowest terms exactly as ``str(Fraction)`` prints
them ("1/12", "1").  Zero orbit weights are omitted on output; weights are
listed by increasing index and atoms in string order, so re-serializing a
parsed file reproduces it byte for byte.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .core import AtomicMeasure, Measure, OrbitMeasure


class MeasureFormatError(ValueError):
    pass


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def parse_rational(s: Any, *, allow_negative: bool = False) -> Fraction:
    if not isinstance(s, str):
        raise MeasureFormatError(f"rationals must be strings like '1/2', got {s!r}")
    try:
        x = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise MeasureFormatError(f"not a rational: {s!r}") from exc
    if str(x) != s:
        raise MeasureFormatError(f"rational {s!r} is not in canonical lowest terms ({x})")
    if x < 0 and not allow_negative:
        raise MeasureFormatError(f"negative mass {s!r}")
    return x


def _vec_to_str(v) -> str:
    return "".join("+" if x == 1 else "-" for x in v)


def _str_to_vec(s: str) -> tuple[int, ...]:
    if not s or any(ch not in "+-" for ch in s):
        raise MeasureFormatError(f"atom key must be a string of '+'/'-', got {s!r}")
    return tuple(1 if ch == "+" else -1 for ch in s)


def to_document(m: Measure) -> dict:
    if isinstance(m, OrbitMeasure):
        weights = {str(w): format_rational(q) for w, q in enumerate(m.weights) if q}
        return {"kind": "orbit", "n": m.n, "weights": weights}
    atoms = {_vec_to_str(v): format_rational(x) for v, x in m.atoms.items()}
    return {"kind": "atomic", "n": m.n, "atoms": dict(sorted(atoms.items()))}


def dumps(m: Measure) -> str:
    return json.dumps(to_document(m), indent=2) + "\n"


def from_document(doc: Any) -> Measure:
    if not isinstance(doc, dict):
        raise MeasureFormatError("measure document must be a JSON object")
    kind = doc.get("kind")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MeasureFormatError(f"'n' must be a positive integer, got {n!r}")
    try:
        if kind == "orbit":
            raw = doc.get("weights")
            if not isinstance(raw, dict):
                raise MeasureFormatError("orbit measure needs a 'weights' object")
            q = [Fraction(0)] * (n + 1)
            for key, val in raw.items():
                if not key.isdigit() or str(int(key)) != key or int(key) > n:
                    raise MeasureFormatError(f"bad weight index {key!r} for n={n}")
                q[int(key)] = parse_rational(val)
            return OrbitMeasure(n, q)
        if kind == "atomic":
            raw = doc.get("atoms")
            if not isinstance(raw, dict):
                raise MeasureFormatError("atomic measure needs an 'atoms' object")
            atoms = {}
            for key, val in raw.items():
                v = _str_to_vec(key)
                if len(v) != n:
                    raise MeasureFormatError(f"atom {key!r} has length {len(v)}, expected {n}")
                atoms[v] = parse_rational(val)
            return AtomicMeasure(n, atoms)
    except MeasureFormatError:
        raise
    except ValueError as exc:
        raise MeasureFormatError(str(exc)) from exc
    raise MeasureFormatError(f"'kind' must be 'orbit' or 'atomic', got {kind!r}")


def loads(text: str) -> Measure:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeasureFormatError(f"invalid JSON: {exc}") from exc
    return from_document(doc)


def load(path) -> Measure:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dump(m: Measure, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(m))
