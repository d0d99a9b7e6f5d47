"""Exact measures on the sign cube {-1, 1}^N.

Two representations are used throughout:

* :class:`OrbitMeasure` -- an exchangeable measure given by the total mass on
  each Hamming-weight orbit (``weights[w]`` is the mass of all vectors with
  exactly ``w`` entries equal to +1).  Orbit operations are polynomial in N.
* :class:`AtomicMeasure` -- an arbitrary measure as a sparse map from sign
  vectors to masses.  Guarded to N <= 24.

Coordinate indices in the public API are 1-based, as in the usual notation
for ``eps_1 ... eps_N``.  All probabilities are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, prod
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence, Union

import mpmath

MAX_ATOMIC_N = 24
MAX_ORBIT_N = 10_000
APPROX_PREC = 96  # bits of working precision for non-integer p

SignVector = tuple[int, ...]
Coefficients = tuple[Fraction, ...]


class MeasureError(ValueError):
    """A measure violates its invariants (negative mass, total != 1, ...)."""


class GuardError(ValueError):
    """Requested size exceeds an enumeration guard."""


# ---------------------------------------------------------------------------
# sign vectors and coefficients


def sign_vector(entries: Iterable[int]) -> SignVector:
    v = tuple(int(x) for x in entries)
    if not v:
        raise ValueError("sign vector must be non-empty")
    if len(v) > MAX_ATOMIC_N:
        raise GuardError(f"sign vectors are limited to N <= {MAX_ATOMIC_N}")
    if any(x not in (-1, 1) for x in v):
        raise ValueError(f"sign vector entries must be -1 or +1, got {v}")
    return v


def hamming_weight(v: Sequence[int]) -> int:
    """Number of +1 entries."""
    return sum(1 for x in v if x == 1)


def sign_vectors(n: int) -> Iterator[SignVector]:
    """All of {-1, 1}^n in lexicographic order (all -1 first)."""
    _atomic_guard(n)
    return itertools.product((-1, 1), repeat=n)


def coefficients(values: Iterable, n: int | None = None) -> Coefficients:
    a = tuple(Fraction(x) for x in values)
    if n is not None and len(a) != n:
        raise ValueError(f"expected {n} coefficients, got {len(a)}")
    return a


def ones(n: int) -> Coefficients:
    return (Fraction(1),) * n


def _atomic_guard(n: int) -> None:
    if not 1 <= n <= MAX_ATOMIC_N:
        raise GuardError(f"atomic operations need 1 <= N <= {MAX_ATOMIC_N}, got {n}")


def _orbit_guard(n: int) -> None:
    if not 1 <= n <= MAX_ORBIT_N:
        raise GuardError(f"orbit operations need 1 <= N <= {MAX_ORBIT_N}, got {n}")


# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True)
class OrbitMeasure:
    n: int
    weights: tuple[Fraction, ...]

    def __init__(self, n: int, weights: Sequence):
        n = int(n)
        _orbit_guard(n)
        q = tuple(Fraction(x) for x in weights)
        if len(q) != n + 1:
            raise MeasureError(f"need {n + 1} orbit weights for N={n}, got {len(q)}")
        if any(x < 0 for x in q):
            raise MeasureError("orbit weights must be non-negative")
        if sum(q) != 1:
            raise MeasureError(f"orbit weights sum to {sum(q)}, not 1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "weights", q)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(w for w, x in enumerate(self.weights) if x)


@dataclass(frozen=True)
class AtomicMeasure:
    n: int
    atoms: Mapping[SignVector, Fraction]

    def __init__(self, n: int, atoms: Mapping):
        n = int(n)
        _atomic_guard(n)
        clean: dict[SignVector, Fraction] = {}
        for v, mass in atoms.items():
            v = sign_vector(v)
            if len(v) != n:
                raise MeasureError(f"atom {v} has length {len(v)}, expected {n}")
            mass = Fraction(mass)
            if mass <= 0:
                raise MeasureError(f"atom {v} has non-positive mass {mass}")
            if v in clean:
                raise MeasureError(f"duplicate atom {v}")
            clean[v] = mass
        if sum(clean.values()) != 1:
            raise MeasureError(f"atom masses sum to {sum(clean.values())}, not 1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "atoms", MappingProxyType(dict(sorted(clean.items()))))

    def __eq__(self, other):
        if not isinstance(other, AtomicMeasure):
            return NotImplemented
        return self.n == other.n and dict(self.atoms) == dict(other.atoms)

    def __hash__(self):
        return hash((self.n, frozenset(self.atoms.items())))


Measure = Union[OrbitMeasure, AtomicMeasure]


def orbit_to_atomic(m: OrbitMeasure) -> AtomicMeasure:
    """Spread each orbit's mass uniformly over its C(N, w) vectors."""
    n = m.n
    _atomic_guard(n)
    per_atom = [q / comb(n, w) for w, q in enumerate(m.weights)]
    atoms = {v: per_atom[hamming_weight(v)] for v in sign_vectors(n) if per_atom[hamming_weight(v)]}
    return AtomicMeasure(n, atoms)


def symmetrize(m: AtomicMeasure) -> OrbitMeasure:
    """Collapse an atomic measure to its orbit masses.

    Any statistic that depends only on the Hamming weight -- in particular
    ``|sum(eps)|`` -- has the same law before and after.
    """
    q = [Fraction(0)] * (m.n + 1)
    for v, mass in m.atoms.items():
        q[hamming_weight(v)] += mass
    return OrbitMeasure(m.n, q)


def mix(parts: Sequence[tuple[Fraction, OrbitMeasure]]) -> OrbitMeasure:
    """Convex combination of orbit measures on the same N."""
    n = parts[0][1].n
    if any(m.n != n for _, m in parts):
        raise MeasureError("cannot mix measures on different N")
    q = [Fraction(0)] * (n + 1)
    for t, m in parts:
        for w, x in enumerate(m.weights):
            q[w] += Fraction(t) * x
    return OrbitMeasure(n, q)


# ---------------------------------------------------------------------------
# correlations


@lru_cache(maxsize=65536)
def orbit_correlation(n: int, w: int, j: int) -> Fraction:
    """E[eps_1 ... eps_j] under the uniform measure on the weight-w orbit.

    Choose which ``i`` of the j fixed coordinates are +1; the remaining
    ``w - i`` plus-signs go among the other ``n - j`` coordinates.
    """
    if not 0 <= w <= n:
        raise ValueError(f"weight {w} outside 0..{n}")
    if not 0 <= j <= n:
        raise ValueError(f"order {j} outside 0..{n}")
    total = sum(
        (-1) ** (j - i) * comb(j, i) * comb(n - j, w - i)
        for i in range(max(0, w - (n - j)), min(j, w) + 1)
    )
    return Fraction(total, comb(n, w))


def _check_subset(n: int, subset: Iterable[int]) -> tuple[int, ...]:
    s = tuple(int(i) for i in subset)
    if len(set(s)) != len(s):
        raise ValueError(f"indices must be distinct, got {s}")
    if any(not 1 <= i <= n for i in s):
        raise ValueError(f"indices must lie in 1..{n}, got {s}")
    return s


def correlation(m: Measure, subset: Iterable[int]) -> Fraction:
    """Exact mixed moment E[prod_{i in subset} eps_i] (1-based indices)."""
    s = _check_subset(m.n, subset)
    if isinstance(m, OrbitMeasure):
        j = len(s)
        return sum(
            (q * orbit_correlation(m.n, w, j) for w, q in enumerate(m.weights) if q),
            Fraction(0),
        )
    idx = [i - 1 for i in s]
    total = Fraction(0)
    for v, mass in m.atoms.items():
        total += mass if prod(v[i] for i in idx) == 1 else -mass
    return total


@dataclass(frozen=True)
class IndependenceReport:
    ok: bool
    k: int
    witness: tuple[int, ...] | None = None
    witness_correlation: Fraction | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_kwise_independent(m: Measure, k: int) -> IndependenceReport:
    """Check that every mixed moment of 1..k distinct coordinates vanishes.

    For Rademacher coordinates this is equivalent to every k-fold
    projection being uniform on {-1, 1}^k.  Subsets are scanned by size,
    then lexicographically, and the first violation is the witness.
    """
    if not 1 <= k <= m.n:
        raise ValueError(f"k must lie in 1..{m.n}, got {k}")
    if isinstance(m, OrbitMeasure):
        for j in range(1, k + 1):
            c = correlation(m, range(1, j + 1))
            if c:
                return IndependenceReport(False, k, tuple(range(1, j + 1)), c)
        return IndependenceReport(True, k)
    for j in range(1, k + 1):
        for s in itertools.combinations(range(1, m.n + 1), j):
            c = correlation(m, s)
            if c:
                return IndependenceReport(False, k, s, c)
    return IndependenceReport(True, k)


def projections_uniform(m: Measure, k: int) -> bool:
    """Direct check that each k-coordinate projection puts 2^-k on every pattern.

    Kept as an independent route to :func:`is_kwise_independent`.
    """
    atomic = orbit_to_atomic(m) if isinstance(m, OrbitMeasure) else m
    target = Fraction(1, 2**k)
    for s in itertools.combinations(range(atomic.n), k):
        counts: dict[tuple[int, ...], Fraction] = {}
        for v, mass in atomic.atoms.items():
            key = tuple(v[i] for i in s)
            counts[key] = counts.get(key, Fraction(0)) + mass
        if len(counts) != 2**k or any(x != target for x in counts.values()):
            return False
    return True


# ---------------------------------------------------------------------------
# moments


def _is_integral(p) -> bool:
    if isinstance(p, int):
        return True
    if isinstance(p, Fraction):
        return p.denominator == 1
    if isinstance(p, float):
        return p.is_integer()
    return False


def _orbit_even_moment(m: OrbitMeasure, a: Coefficients, p: int) -> Fraction:
    """E[(sum a_i eps_i)^p] for even p without expanding atoms.

    Expanding the power, a monomial survives with weight rho_j, the
    exchangeable j-fold correlation, where j counts coordinates appearing
    an odd number of times.  Track that count with the exponential
    generating function prod_i (cosh(a_i z) + t sinh(a_i z)), truncated at
    degree p in z; then the moment is p! * sum_j rho_j [z^p t^j].
    """
    n = m.n
    fact = [1] * (p + 1)
    for i in range(1, p + 1):
        fact[i] = fact[i - 1] * i
    # poly[t][e] = coefficient of t^t z^e / 1 (ordinary coefficient)
    poly = [[Fraction(0)] * (p + 1) for _ in range(p + 1)]
    poly[0][0] = Fraction(1)
    deg_t = 0
    for ai in a:
        if ai == 0:
            continue
        powers = [Fraction(1)]
        for e in range(1, p + 1):
            powers.append(powers[-1] * ai)
        even = [powers[e] / fact[e] if e % 2 == 0 else 0 for e in range(p + 1)]
        odd = [powers[e] / fact[e] if e % 2 == 1 else 0 for e in range(p + 1)]
        new_deg = min(deg_t + 1, p)
        new = [[Fraction(0)] * (p + 1) for _ in range(new_deg + 1)]
        for t in range(deg_t + 1):
            row = poly[t]
            for e1 in range(p + 1):
                x = row[e1]
                if not x:
                    continue
                for e2 in range(p + 1 - e1):
                    if e2 % 2 == 0:
                        if even[e2]:
                            new[t][e1 + e2] += x * even[e2]
                    elif t + 1 <= p and odd[e2]:
                        new[t + 1][e1 + e2] += x * odd[e2]
        poly = new
        deg_t = new_deg
    total = Fraction(0)
    for j in range(min(deg_t, n) + 1):
        coeff = poly[j][p]
        if not coeff:
            continue
        rho = sum(
            (q * orbit_correlation(n, w, j) for w, q in enumerate(m.weights) if q),
            Fraction(0),
        )
        total += rho * coeff
    return total * fact[p]


def moment(m: Measure, a: Sequence, p, exact: bool | None = None):
    """E|sum_i a_i eps_i|^p.

    Integer ``p`` gives an exact :class:`Fraction`.  Non-integer ``p`` (or
    ``exact=False``) gives an :class:`mpmath.mpf` computed with
    ``APPROX_PREC`` bits of working precision.
    """
    a = coefficients(a, m.n)
    if not any(a):
        raise ValueError("coefficient vector a must not be zero")
    if p < 2:
        raise ValueError(f"moment order must be >= 2, got {p}")
    integral = _is_integral(p)
    if exact is None:
        exact = integral
    if exact and not integral:
        raise ValueError(f"exact moments need integer p, got {p}")
    if exact:
        return _exact_moment(m, a, int(p))
    return _approx_moment(m, a, p)


def _exact_moment(m: Measure, a: Coefficients, p: int) -> Fraction:
    n = m.n
    if isinstance(m, OrbitMeasure):
        if all(x == a[0] for x in a):
            scale = abs(a[0]) ** p
            return scale * sum(
                (q * abs(2 * w - n) ** p for w, q in enumerate(m.weights) if q), Fraction(0)
            )
        if p % 2 == 0:
            return _orbit_even_moment(m, a, p)
        m = orbit_to_atomic(m)
    total = Fraction(0)
    for v, mass in m.atoms.items():
        total += mass * abs(sum(ai * x for ai, x in zip(a, v))) ** p
    return total


def _approx_moment(m: Measure, a: Coefficients, p):
    n = m.n
    with mpmath.workprec(APPROX_PREC):
        pp = mpmath.mpf(p) if not isinstance(p, Fraction) else mpmath.mpf(p.numerator) / p.denominator
        if isinstance(m, OrbitMeasure) and all(x == a[0] for x in a):
            scale = mpmath.power(abs(_mpf(a[0])), pp)
            return scale * mpmath.fsum(
                _mpf(q) * mpmath.power(abs(2 * w - n), pp) for w, q in enumerate(m.weights) if q
            )
        atomic = orbit_to_atomic(m) if isinstance(m, OrbitMeasure) else m
        return mpmath.fsum(
            _mpf(mass) * mpmath.power(abs(_mpf(sum(ai * x for ai, x in zip(a, v)))), pp)
            for v, mass in atomic.atoms.items()
        )


def _mpf(x: Fraction):
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def l2_norm_squared(a: Sequence) -> Fraction:
    return sum((Fraction(x) ** 2 for x in a), Fraction(0))
