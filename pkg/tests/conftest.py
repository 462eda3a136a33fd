"""Shared generators and independent oracles for the test suite."""

import random

import pytest

from loopgr import QQ, LaurentSeries, LoopMatrix, PrimeField
from loopgr.series import poly_mul, poly_trim


# ---------------------------------------------------------------------------
# an exact-polynomial model of windowed series, used as the precision oracle:
# a value is (dict exponent -> coefficient, window end or None), computed with
# no truncation beyond the provable window rule


class PolyModel:
    def __init__(self, ring, terms, end=None):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if not ring.is_zero(c)}
        self.end = end

    def val_lower(self):
        if self.terms:
            return min(self.terms)
        return self.end  # None means exactly zero

    @staticmethod
    def _min_end(*ends):
        finite = [e for e in ends if e is not None]
        return min(finite) if finite else None

    def add(self, other):
        end = self._min_end(self.end, other.end)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = self.ring.add(out.get(e, self.ring.zero), c)
        if end is not None:
            out = {e: c for e, c in out.items() if e < end}
        return PolyModel(self.ring, out, end)

    def mul(self, other):
        if not self.terms and self.end is None:
            return PolyModel(self.ring, {}, None)
        if not other.terms and other.end is None:
            return PolyModel(self.ring, {}, None)
        va, vb = self.val_lower(), other.val_lower()
        end = self._min_end(
            None if self.end is None else self.end + vb,
            None if other.end is None else other.end + va,
        )
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                out[e] = self.ring.add(out.get(e, self.ring.zero), self.ring.mul(c1, c2))
        if end is not None:
            out = {e: c for e, c in out.items() if e < end}
        return PolyModel(self.ring, out, end)

    def matches(self, s: LaurentSeries) -> bool:
        """Window end equal and every coefficient inside it equal."""
        if s.known_end != self.end:
            return False
        for e, c in self.terms.items():
            if not self.ring.eq(s.coefficient(e), c):
                return False
        support = set(self.terms)
        for i, c in enumerate(s.coeffs):
            e = s.shift + i
            if not self.ring.is_zero(c) and e not in support:
                return False
        return True


def model_of(s: LaurentSeries) -> PolyModel:
    terms = {s.shift + i: c for i, c in enumerate(s.coeffs)}
    return PolyModel(s.ring, terms, s.known_end)


# ---------------------------------------------------------------------------
# random exact material


def rand_exact_series(ring, rng, lo=-2, hi=3, density=0.7, unit=False):
    """A random exact Laurent polynomial; with unit=True the lowest exponent
    carries a unit coefficient."""
    terms = []
    for e in range(lo, hi + 1):
        if rng.random() < density:
            terms.append((e, ring.random(rng)))
    if unit:
        terms = [(lo, ring.random_unit(rng))] + [t for t in terms if t[0] != lo]
    s = LaurentSeries.from_terms(ring, terms)
    if unit and not s.coeffs:
        return LaurentSeries.one(ring)
    return s


def rand_truncated_series(ring, rng, lo=-2, hi=3, window=8):
    s = rand_exact_series(ring, rng, lo, hi)
    return s.truncated(rng.randint(lo + 1, lo + window))


def rand_unit_series(ring, rng, lo=-2, hi=2):
    return rand_exact_series(ring, rng, lo, hi, unit=True)


# ---------------------------------------------------------------------------
# independent stratum oracle: valuations of gcds of k x k minors over k[[t]].
# Entries must be exact so minor valuations are exact.


def _minor_dets(rows, k):
    from itertools import combinations

    n = len(rows)
    ring = rows[0][0].ring
    for ri in combinations(range(n), k):
        for ci in combinations(range(n), k):
            yield _exact_det([[rows[i][j] for j in ci] for i in ri])


def _exact_det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = None
    for j in range(n):
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = rows[0][j].mul(_exact_det(minor))
        if j % 2 == 1:
            term = term.neg()
        acc = term if acc is None else acc.add(term)
    return acc


def minors_stratum_oracle(loop: LoopMatrix):
    """Dominant cocharacter via minimal valuations of k x k minors: the
    partial sums of the ascending divisor exponents."""
    for r in loop.rows:
        for e in r:
            assert e.is_exact, "minors oracle needs exact entries"
    n = loop.n
    deltas = []
    for k in range(1, n + 1):
        vals = [d.valuation for d in _minor_dets(loop.rows, k) if d.coeffs]
        assert vals, "singular matrix handed to the minors oracle"
        deltas.append(min(vals))
    asc = [deltas[0]] + [deltas[k] - deltas[k - 1] for k in range(1, n)]
    return tuple(reversed(asc))


# ---------------------------------------------------------------------------
# global re-trivializations: 2x2 rational-function matrices invertible away
# from the marked points (including at infinity)


def rf_matmul(a, b):
    return [
        [a[i][0].mul(b[0][j]).add(a[i][1].mul(b[1][j])) for j in range(2)]
        for i in range(2)
    ]


def rf_identity(ring):
    from loopgr import RationalFunction

    one = RationalFunction.constant(ring, 1)
    zero = RationalFunction.constant(ring, 0)
    return [[one, zero], [zero, one]]


def global_rational_loop(ring, points, rng):
    """A product of shears with poles only at the points and constant
    determinant-one diagonals; regular and invertible at infinity."""
    from loopgr import RationalFunction

    m = rf_identity(ring)
    for _ in range(rng.randint(1, 3)):
        kind = rng.randrange(3)
        if kind < 2 and points:
            r = rng.choice(points)
            f = RationalFunction.constant(ring, ring.random(rng))
            lin = RationalFunction.from_terms(ring, [(0, ring.neg(r)), (1, ring.one)])
            for _ in range(rng.randint(1, 2)):
                f = f.mul(lin.inverse())
            g = rf_identity(ring)
            g[0][1] = f
            if kind == 1:
                g = [[g[0][0], g[1][0]], [g[0][1], g[1][1]]]  # transpose: shear below
            m = rf_matmul(m, g)
        else:
            c = ring.random_unit(rng)
            g = rf_identity(ring)
            g[0][0] = RationalFunction.constant(ring, c)
            g[1][1] = RationalFunction.constant(ring, ring.inv(c))
            m = rf_matmul(m, g)
    return m


def expand_rational_loop(m, r, precision=24):
    return LoopMatrix([[f.expand_at(r, precision) for f in row] for row in m])


def retrivialize(datum, m, precision=24):
    from loopgr import ModificationDatum

    loops = tuple(
        expand_rational_loop(m, p.r, precision).mat_mul(lp)
        for p, lp in zip(datum.points, datum.loops)
    )
    return ModificationDatum(
        datum.ring, datum.n, datum.points, loops, datum.infinity_loop
    )


# ---------------------------------------------------------------------------


@pytest.fixture
def rng():
    return random.Random("loopgr-tests")


@pytest.fixture(params=["Q", "F7", "A3"])
def any_ring(request):
    from loopgr import ArtinianRing

    if request.param == "Q":
        return QQ
    if request.param == "F7":
        return PrimeField(7)
    return ArtinianRing(QQ, 3)


@pytest.fixture(params=["Q", "F7"])
def field_ring(request):
    if request.param == "Q":
        return QQ
    return PrimeField(7)
