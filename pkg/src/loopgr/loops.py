"""Matrix loop groups: invertible matrices over formal Laurent series.

A :class:`LoopMatrix` is an n x n matrix of Laurent series over a common
backend, assumed invertible over the Laurent field.  The pole bound of a loop
is the least N such that the loop and its inverse both have entries with
valuation >= -N; pole-free loops with invertible constant term form the
positive (jet) subgroup.
"""

from __future__ import annotations

import random

from .errors import (
    BackendMismatch,
    DomainError,
    InsufficientPrecision,
    SingularToPrecision,
)
from .rings import QQ, Ring
from .series import DEFAULT_PRECISION, LaurentSeries


def _scalar_det(ring: Ring, rows) -> object:
    """Determinant of a matrix of backend scalars by cofactor expansion
    (division free, so it works over the Artinian backend too)."""
    n = len(rows)
    if n == 0:
        return ring.one
    if n == 1:
        return rows[0][0]
    if n == 2:
        return ring.sub(
            ring.mul(rows[0][0], rows[1][1]), ring.mul(rows[0][1], rows[1][0])
        )
    acc = ring.zero
    sign = 1
    for j in range(n):
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = ring.mul(rows[0][j], _scalar_det(ring, minor))
        acc = ring.add(acc, term if sign > 0 else ring.neg(term))
        sign = -sign
    return acc


def _series_det(rows) -> LaurentSeries:
    """Determinant of a matrix of Laurent series by cofactor expansion."""
    n = len(rows)
    ring = rows[0][0].ring
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0].mul(rows[1][1]).sub(rows[0][1].mul(rows[1][0]))
    acc = LaurentSeries.zero(ring, None)
    for j in range(n):
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = rows[0][j].mul(_series_det(minor))
        acc = acc.add(term if j % 2 == 0 else term.neg())
    return acc


class LoopMatrix:
    """An element of GL(n) over Laurent series, optionally flagged SL.

    Values are immutable after construction; the inverse and the pole bound
    are cached write-once, so observable behavior is that of a pure value.
    """

    __slots__ = ("ring", "n", "rows", "group", "_det", "_inverse", "_pole_bound", "built_from")

    def __init__(self, rows, group: str = "GL"):
        rows = tuple(tuple(r) for r in rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise DomainError("a loop matrix must be square and non-empty")
        ring = rows[0][0].ring
        for r in rows:
            for e in r:
                if not isinstance(e, LaurentSeries):
                    raise DomainError("loop entries must be LaurentSeries")
                if e.ring != ring:
                    raise BackendMismatch("loop entries use mixed backends")
        if group not in ("GL", "SL"):
            raise DomainError(f"unknown group flag {group!r}")
        self.ring = ring
        self.n = len(rows)
        self.rows = rows
        self.group = group
        self._det = None
        self._inverse = {}
        self._pole_bound = None
        self.built_from = None
        if group == "SL":
            d = self.det()
            if not d.agrees_with(LaurentSeries.one(ring)):
                raise DomainError("SL flag set but determinant is not 1 to precision")

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, ring: Ring, n: int, group: str = "GL") -> "LoopMatrix":
        one = LaurentSeries.one(ring)
        zero = LaurentSeries.zero(ring, None)
        return cls(
            [[one if i == j else zero for j in range(n)] for i in range(n)], group
        )

    @classmethod
    def from_rows(cls, ring: Ring, rows, group: str = "GL") -> "LoopMatrix":
        """Coerce a nested list whose entries are LaurentSeries, scalars, or
        (exponent, coefficient) term lists."""

        def coerce(e):
            if isinstance(e, LaurentSeries):
                return e
            if isinstance(e, (list, tuple)):
                return LaurentSeries.from_terms(ring, e)
            return LaurentSeries.constant(ring, e)

        return cls([[coerce(e) for e in r] for r in rows], group)

    # -- linear algebra ----------------------------------------------------

    def entry(self, i: int, j: int) -> LaurentSeries:
        return self.rows[i][j]

    def det(self) -> LaurentSeries:
        if self._det is None:
            self._det = _series_det(self.rows)
        return self._det

    def mat_mul(self, other: "LoopMatrix") -> "LoopMatrix":
        if self.n != other.n:
            raise DomainError("size mismatch in loop product")
        self.ring.require_same(other.ring)
        n = self.n
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self.rows[i][0].mul(other.rows[0][j])
                for k in range(1, n):
                    acc = acc.add(self.rows[i][k].mul(other.rows[k][j]))
                row.append(acc)
            rows.append(row)
        group = "SL" if self.group == other.group == "SL" else "GL"
        return LoopMatrix(rows, group)

    def __matmul__(self, other: "LoopMatrix") -> "LoopMatrix":
        return self.mat_mul(other)

    def transpose(self) -> "LoopMatrix":
        return LoopMatrix(
            [[self.rows[j][i] for j in range(self.n)] for i in range(self.n)],
            self.group,
        )

    def inverse(self, precision: int | None = None) -> "LoopMatrix":
        key = precision if precision is not None else DEFAULT_PRECISION
        if key in self._inverse:
            return self._inverse[key]
        ring = self.ring
        d = self.det()
        if d.is_zero_to_precision:
            raise SingularToPrecision(
                "determinant vanishes on its whole known window"
            )
        if self.n <= 3:
            inv_det = d.invert(precision)
            rows = []
            for i in range(self.n):
                row = []
                for j in range(self.n):
                    minor = [
                        [self.rows[a][b] for b in range(self.n) if b != i]
                        for a in range(self.n)
                        if a != j
                    ]
                    cof = (
                        _series_det(minor)
                        if self.n > 1
                        else LaurentSeries.one(ring)
                    )
                    if (i + j) % 2 == 1:
                        cof = cof.neg()
                    row.append(cof.mul(inv_det))
                rows.append(row)
            result = LoopMatrix(rows, self.group)
        else:
            result = self._gauss_inverse(precision)
        self._inverse[key] = result
        return result

    def _gauss_inverse(self, precision: int | None) -> "LoopMatrix":
        # Gauss-Jordan over the Laurent field with valuation-minimizing pivots.
        n = self.n
        ring = self.ring
        m = [list(r) for r in self.rows]
        ident = LoopMatrix.identity(ring, n)
        aug = [list(r) for r in ident.rows]
        for s in range(n):
            piv = _min_valuation_pivot(m, s, rows_only=True)
            i0, _ = piv
            if i0 != s:
                m[s], m[i0] = m[i0], m[s]
                aug[s], aug[i0] = aug[i0], aug[s]
            inv_p = m[s][s].invert(precision)
            m[s] = [e.mul(inv_p) for e in m[s]]
            aug[s] = [e.mul(inv_p) for e in aug[s]]
            for i in range(n):
                if i == s or m[i][s].is_zero_to_precision:
                    continue
                q = m[i][s]
                m[i] = [a.sub(q.mul(b)) for a, b in zip(m[i], m[s])]
                aug[i] = [a.sub(q.mul(b)) for a, b in zip(aug[i], aug[s])]
        return LoopMatrix(aug, self.group)

    # -- loop-group structure ----------------------------------------------

    def _min_entry_valuation(self) -> int:
        vals = []
        for r in self.rows:
            for e in r:
                if e.coeffs:
                    vals.append(e.shift)
                elif e.known_end is not None and e.known_end < 0:
                    raise InsufficientPrecision(
                        "an entry is zero on a window that ends below t^0; "
                        "its pole cannot be bounded",
                        suggested_precision=2 * DEFAULT_PRECISION,
                    )
        return min(vals) if vals else 0

    def pole_bound(self, precision: int | None = None) -> int:
        """Least N with every entry of the loop and of its inverse of
        valuation >= -N."""
        if self._pole_bound is None:
            v_here = self._min_entry_valuation()
            v_inv = self.inverse(precision)._min_entry_valuation()
            self._pole_bound = max(0, -v_here, -v_inv)
        return self._pole_bound

    def is_positive(self) -> bool:
        """Membership in the positive loop group: pole-free entries and an
        invertible constant-term matrix."""
        consts = []
        for r in self.rows:
            row = []
            for e in r:
                if e.coeffs and e.shift < 0:
                    return False
                if not e.coeffs and e.known_end is not None and e.known_end < 1:
                    raise InsufficientPrecision(
                        "entry window too short to decide positivity",
                        suggested_precision=2 * DEFAULT_PRECISION,
                    )
                row.append(e.coefficient(0))
            consts.append(row)
        return self.ring.is_unit(_scalar_det(self.ring, consts))

    def constant_term(self):
        """The matrix of coefficients at t^0, as nested backend scalars."""
        return [[e.coefficient(0) for e in r] for r in self.rows]

    def map_entries(self, fn, ring: Ring) -> "LoopMatrix":
        return LoopMatrix(
            [[e.map_coefficients(fn, ring) for e in r] for r in self.rows],
            self.group,
        )

    def agrees_with(self, other: "LoopMatrix") -> bool:
        return self.n == other.n and all(
            a.agrees_with(b) for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __eq__(self, other):
        return (
            isinstance(other, LoopMatrix)
            and self.n == other.n
            and self.group == other.group
            and all(
                a == b
                for ra, rb in zip(self.rows, other.rows)
                for a, b in zip(ra, rb)
            )
        )

    def __hash__(self):
        return hash((self.group, self.rows))

    def __repr__(self):
        body = "; ".join("[" + ", ".join(map(repr, r)) + "]" for r in self.rows)
        return f"LoopMatrix({self.group}, [{body}])"


def _min_valuation_pivot(m, s, rows_only=False):
    """Position (i, j) of the minimal-valuation entry of m[s:][s:], ties to
    the smallest row then column.  Raises when truncation hides the answer."""
    n = len(m)
    best = None
    blocked_end = None
    cols = [s] if rows_only else range(s, n)
    for i in range(s, n):
        for j in cols:
            e = m[i][j]
            if e.coeffs:
                if best is None or e.shift < best[0]:
                    best = (e.shift, i, j)
            elif e.known_end is not None:
                blocked_end = (
                    e.known_end
                    if blocked_end is None
                    else min(blocked_end, e.known_end)
                )
    if best is None:
        raise SingularToPrecision(
            "no pivot: the remaining block vanishes on its known windows"
        )
    if blocked_end is not None and blocked_end <= best[0]:
        raise InsufficientPrecision(
            "an entry that is zero to its window could still beat the pivot",
            suggested_precision=2 * DEFAULT_PRECISION,
        )
    return best[1], best[2]


# ---------------------------------------------------------------------------
# module-level operation names


def mat_mul(a: LoopMatrix, b: LoopMatrix) -> LoopMatrix:
    return a.mat_mul(b)


def mat_inverse(a: LoopMatrix, precision: int | None = None) -> LoopMatrix:
    return a.inverse(precision)


def pole_bound(a: LoopMatrix, precision: int | None = None) -> int:
    return a.pole_bound(precision)


def is_positive(a: LoopMatrix) -> bool:
    return a.is_positive()


def transpose_inverse(a: LoopMatrix, precision: int | None = None) -> LoopMatrix:
    return a.inverse(precision).transpose()


def monomial_loop(ring: Ring, exponents, group: str = "GL") -> LoopMatrix:
    """The diagonal loop diag(t^e1, ..., t^en)."""
    exponents = [int(e) for e in exponents]
    n = len(exponents)
    zero = LaurentSeries.zero(ring, None)
    return LoopMatrix(
        [
            [LaurentSeries.t_power(ring, exponents[i]) if i == j else zero for j in range(n)]
            for i in range(n)
        ],
        group,
    )


def elementary_loop(ring: Ring, n: int, i: int, j: int, param: LaurentSeries) -> LoopMatrix:
    """The transvection I + param * e_ij (0-based positions, i != j)."""
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise DomainError("elementary position must be off-diagonal")
    rows = [list(r) for r in LoopMatrix.identity(ring, n).rows]
    rows[i][j] = param
    return LoopMatrix(rows, "SL" if n == 2 else "GL")


def _random_poly_series(ring, rng, max_degree) -> LaurentSeries:
    terms = [(e, ring.random(rng)) for e in range(max_degree + 1)]
    return LaurentSeries.from_terms(ring, terms)


def random_positive(n: int, seed: int, ring: Ring | None = None, degree: int = 2) -> LoopMatrix:
    """Deterministic random element of the positive loop group: an invertible
    constant matrix (unit triangular product) plus terms of valuation >= 1."""
    ring = ring or QQ
    # seed from a string: deterministic across processes, unlike tuple hashes
    rng = random.Random(f"positive:{n}:{seed}")
    lower = [[ring.one if i == j else (ring.random(rng) if i > j else ring.zero) for j in range(n)] for i in range(n)]
    upper = [[ring.random_unit(rng) if i == j else (ring.random(rng) if i < j else ring.zero) for j in range(n)] for i in range(n)]
    const = [
        [
            _scalar_dot(ring, lower[i], [upper[k][j] for k in range(n)])
            for j in range(n)
        ]
        for i in range(n)
    ]
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            tail = _random_poly_series(ring, rng, max(degree - 1, 0)).shifted(1)
            row.append(LaurentSeries.constant(ring, const[i][j]).add(tail))
        rows.append(row)
    return LoopMatrix(rows)


def _scalar_dot(ring, xs, ys):
    acc = ring.zero
    for x, y in zip(xs, ys):
        acc = ring.add(acc, ring.mul(x, y))
    return acc


def random_loop(n: int, pole: int, seed: int, ring: Ring | None = None) -> LoopMatrix:
    """Deterministic random loop built as positive * t^lam * positive with
    |lam_i| <= pole; the dominant sort of lam is recorded on ``built_from``."""
    ring = ring or QQ
    rng = random.Random(f"loop:{n}:{pole}:{seed}")
    lam = tuple(sorted((rng.randint(-pole, pole) for _ in range(n)), reverse=True))
    left = random_positive(n, rng.randrange(2**30), ring)
    right = random_positive(n, rng.randrange(2**30), ring)
    out = left.mat_mul(monomial_loop(ring, lam)).mat_mul(right)
    out.built_from = lam
    return out
