"""Cartan stratification of matrix loops over a field backend.

Every invertible matrix over k((t)) factors as u * t^lam * v with u, v in the
positive loop group and lam a dominant (non-increasing) integer tuple, the
elementary divisor exponents over the discrete valuation ring k[[t]].  The
tuple lam is a complete invariant of the double coset of the loop, the
stratum; its coarse class adds the transpose-inverse symmetry, and its
multiplicity pattern names the associated parabolic type.

The reduction pivots on an entry of minimal valuation, ties broken by the
smallest row then column index, and divides out unit parts exactly when the
entries permit; before reporting, the factorization is verified against the
input on the certified window.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, InsufficientPrecision
from .loops import LoopMatrix, _min_valuation_pivot, monomial_loop
from .series import DEFAULT_PRECISION, LaurentSeries


@dataclass(frozen=True)
class Cocharacter:
    """A dominant integer cotuple: the exponents of a diagonal monomial loop,
    listed in non-increasing order."""

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        if any(entries[i] < entries[i + 1] for i in range(len(entries) - 1)):
            raise DomainError(f"cocharacter entries must be non-increasing: {entries}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def dominant(cls, values) -> "Cocharacter":
        return cls(tuple(sorted((int(v) for v in values), reverse=True)))

    def dual(self) -> "Cocharacter":
        """Image under transpose-inverse: negate and re-sort."""
        return Cocharacter(tuple(-e for e in reversed(self.entries)))

    @property
    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def degree(self) -> int:
        return sum(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class CoarseStratum:
    """A stratum up to the transpose-inverse symmetry: the set {lam, dual},
    stored sorted lexicographically descending."""

    orbit: tuple[Cocharacter, ...]

    @classmethod
    def of(cls, lam: Cocharacter) -> "CoarseStratum":
        members = {lam, lam.dual()}
        return cls(tuple(sorted(members, key=lambda c: c.entries, reverse=True)))

    def __contains__(self, lam: Cocharacter) -> bool:
        return lam in self.orbit

    def representative(self) -> Cocharacter:
        """The lexicographically largest member."""
        return self.orbit[0]


@dataclass(frozen=True)
class ParabolicType:
    """The composition of n recording multiplicities of a cocharacter's
    distinct values, in order.  A single block means the cocharacter is
    constant, so it stabilizes no proper parabolic."""

    blocks: tuple[int, ...]

    @property
    def is_proper(self) -> bool:
        return len(self.blocks) > 1

    @property
    def rank(self) -> int:
        return sum(self.blocks)


@dataclass(frozen=True)
class CartanFactorization:
    """A certified factorization a = left * t^lam * right with positive
    left and right."""

    left: LoopMatrix
    cocharacter: Cocharacter
    right: LoopMatrix

    def monomial(self) -> LoopMatrix:
        return monomial_loop(self.left.ring, self.cocharacter.entries)

    def product(self) -> LoopMatrix:
        return self.left.mat_mul(self.monomial()).mat_mul(self.right)


def _reversal(ring, n: int) -> LoopMatrix:
    one = LaurentSeries.one(ring)
    zero = LaurentSeries.zero(ring, None)
    return LoopMatrix(
        [[one if j == n - 1 - i else zero for j in range(n)] for i in range(n)]
    )


def smith_normal_form(a: LoopMatrix, precision: int | None = None) -> CartanFactorization:
    """Diagonalize a loop over k[[t]] by unimodular row and column operations.

    Returns left, lam, right with a = left * t^lam * right, lam dominant.
    Raises InsufficientPrecision when a pivot cannot be certified or the
    reconstruction cannot be checked on a usable window; the error carries a
    suggested retry precision.
    """
    ring = a.ring
    if not ring.is_field:
        raise DomainError(
            "Cartan factorization needs a field backend; reduce Artinian data first"
        )
    n = a.n
    m = [list(r) for r in a.rows]
    # invariant: a = U m V throughout; row/col ops on m are mirrored on U, V
    u = [list(r) for r in LoopMatrix.identity(ring, n).rows]
    v = [list(r) for r in LoopMatrix.identity(ring, n).rows]
    divisors = []
    for s in range(n):
        i0, j0 = _min_valuation_pivot(m, s)
        if i0 != s:
            m[s], m[i0] = m[i0], m[s]
            for r in u:
                r[s], r[i0] = r[i0], r[s]
        if j0 != s:
            for r in m:
                r[s], r[j0] = r[j0], r[s]
            v[s], v[j0] = v[j0], v[s]
        pivot = m[s][s]
        val = pivot.shift
        # scale the pivot row by the inverse unit part; exact when monomial
        w_inv = pivot.shifted(-val).invert(precision)
        m[s] = [e.mul(w_inv) for e in m[s]]
        for r in u:
            r[s] = r[s].mul(pivot.shifted(-val))
        for i in range(s + 1, n):
            e = m[i][s]
            if e.is_zero_to_precision:
                continue
            q = e.shifted(-val)  # in k[[t]] because the pivot valuation is minimal
            m[i] = [x.sub(q.mul(y)) for x, y in zip(m[i], m[s])]
            for r in u:
                r[s] = r[s].add(q.mul(r[i]))
        for j in range(s + 1, n):
            e = m[s][j]
            if e.is_zero_to_precision:
                continue
            q = e.shifted(-val)
            for row in m:
                row[j] = row[j].sub(row[s].mul(q))
            v[s] = [x.add(q.mul(y)) for x, y in zip(v[s], v[j])]
        divisors.append(val)
    lam = Cocharacter(tuple(reversed(divisors)))
    rev = _reversal(ring, n)
    left = LoopMatrix(u).mat_mul(rev)
    right = rev.mat_mul(LoopMatrix(v))
    _certify(a, left, lam, right, precision)
    fact = CartanFactorization(left, lam, right)
    return fact


def _certify(a, left, lam, right, precision):
    suggested = 2 * (precision if precision is not None else DEFAULT_PRECISION)
    if not (left.is_positive() and right.is_positive()):
        raise InsufficientPrecision(
            "reduction produced non-positive transforms; refine the input windows",
            suggested_precision=suggested,
        )
    product = left.mat_mul(monomial_loop(a.ring, lam.entries)).mat_mul(right)
    for pr, ar in zip(product.rows, a.rows):
        for pe, ae in zip(pr, ar):
            res = pe.sub(ae)
            if not res.is_zero_to_precision:
                raise InsufficientPrecision(
                    "reconstruction residual does not vanish on the certified window",
                    suggested_precision=suggested,
                )
            if res.known_end is not None and res.known_end < 1:
                raise InsufficientPrecision(
                    "certified window too short to trust the reduction",
                    suggested_precision=suggested,
                )


def stratum(a: LoopMatrix, precision: int | None = None) -> Cocharacter:
    """The dominant cocharacter of the double coset containing the loop."""
    return smith_normal_form(a, precision).cocharacter


def coarse_stratum(a: LoopMatrix, precision: int | None = None) -> CoarseStratum:
    """The stratum up to transpose-inverse."""
    return CoarseStratum.of(stratum(a, precision))


def parabolic_type(lam: Cocharacter) -> ParabolicType:
    """Multiplicities of the distinct values of a dominant cocharacter."""
    blocks = []
    for e in lam.entries:
        if blocks and e == blocks[-1][0]:
            blocks[-1][1] += 1
        else:
            blocks.append([e, 1])
    return ParabolicType(tuple(b[1] for b in blocks))
