"""Euler-class calculus for weighted two-term complexes, the fixed-locus
pushforward engine, and an independent free-module oracle for total-space
pushforwards of bundles of subspace flags.

A two-term complex contributes e(E) = e(E0)/e(E1): the product of its
even factors over the product of its odd ones, each factor a linear form
plus weight times z.  The pushforward engine sums restriction classes
divided by normal Euler classes over fixed components and checks that the
sum clears every denominator; extracting the z^0 part then gives the
non-equivariant answer.

The oracle expresses a bi-symmetric class in the basis of Schur
polynomials of the first block, free over the fully symmetric
polynomials of the merged alphabet, and reads off the coefficient of the
top (full-box) basis element.  It shares no code with the shuffle sum,
which is the point: the two must agree.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement, product as iproduct

from .algebra import (
    HallVertexError,
    MPoly,
    NonPolynomialError,
    RatFn,
    Var,
    Z,
    ZeroWeightError,
    root,
)
from .quiver import WeightedComplex


class ReductionError(HallVertexError):
    """A class could not be written in the free-module basis."""


def euler_two_term(c: WeightedComplex) -> RatFn:
    """Exact rational Euler class prod_even (f + w z) / prod_odd (f + w z).

    Every weight must be nonzero; a vector bundle placed in degree one
    contributes 1/e of it.
    """
    num = MPoly.const(1)
    den = MPoly.const(1)
    for f, w in c.even:
        if w == 0:
            raise ZeroWeightError("even factor of weight zero")
        num = num * (f + MPoly.var(Z) * w)
    for f, w in c.odd:
        if w == 0:
            raise ZeroWeightError("odd factor of weight zero")
        den = den * (f + MPoly.var(Z) * w)
    return RatFn(num, den)


def whitney_check(c1: WeightedComplex, c2: WeightedComplex) -> bool:
    """Multiplicativity of the Euler class under concatenation, exactly."""
    return euler_two_term(c1.concat(c2)) == euler_two_term(c1) * euler_two_term(c2)


def _euler_factors_lax(c: WeightedComplex):
    """Factor lists for pushforward normals; weight zero is allowed as long
    as the factor itself is nonzero (torus weights may live in the roots)."""
    num, den = [], []
    for f, w in c.even:
        factor = f + MPoly.var(Z) * w
        if not factor:
            raise ZeroWeightError("identically zero normal factor")
        num.append(factor)
    for f, w in c.odd:
        factor = f + MPoly.var(Z) * w
        if not factor:
            raise ZeroWeightError("identically zero normal factor")
        den.append(factor)
    return num, den


def localized_pushforward(fixed_data, t0_extract: bool = False):
    """Fixed-locus pushforward: sum of class / e(normal) over components.

    ``fixed_data`` is a list of (restriction class: MPoly, normal:
    WeightedComplex, relabel: dict or None).  With ``t0_extract`` the sum
    must clear all denominators; the z^0 part of the resulting polynomial
    is returned (an error otherwise).  Without it the raw rational
    function is returned.
    """
    terms = []
    for cls, normal, relabel in fixed_data:
        if relabel:
            cls = cls.rename(relabel)
            normal = WeightedComplex(
                tuple((f.rename(relabel), w) for f, w in normal.even),
                tuple((f.rename(relabel), w) for f, w in normal.odd),
            )
        num_fs, den_fs = _euler_factors_lax(normal)
        num = cls
        for f in den_fs:
            num = num * f
        terms.append((num, num_fs))

    # common denominator: multiset union of all even factors
    all_factors: list = []
    for _, num_fs in terms:
        all_factors.extend(num_fs)
    total = MPoly.zero()
    for num, num_fs in terms:
        complement = list(all_factors)
        for f in num_fs:
            complement.remove(f)
        t = num
        for f in complement:
            t = t * f
        total = total + t

    if not t0_extract:
        den = MPoly.const(1)
        for f in all_factors:
            den = den * f
        return RatFn(total, den)

    for f in all_factors:
        if not total:
            break
        try:
            total = total.div_exact_linear(f)
        except (NonPolynomialError, ValueError) as exc:
            raise NonPolynomialError(
                "pushforward sum does not clear its denominators"
            ) from exc
    return total.subs({Z: 0})


# ---------------------------------------------------------------------------
# Free-module pushforward oracle
# ---------------------------------------------------------------------------


def _partitions_in_box(rows: int, cols: int):
    """All partitions with at most ``rows`` parts, each at most ``cols``."""
    out = []

    def rec(prefix, remaining_rows, max_part):
        out.append(tuple(prefix))
        if remaining_rows == 0:
            return
        for part in range(min(max_part, cols), 0, -1):
            rec(prefix + [part], remaining_rows - 1, part)

    rec([], rows, cols)
    return out


def _complete_homogeneous(k: int, xs) -> MPoly:
    if k < 0:
        return MPoly.zero()
    if k == 0:
        return MPoly.const(1)
    total = MPoly.zero()
    for combo in combinations_with_replacement(xs, k):
        term = MPoly.const(1)
        for v in combo:
            term = term * MPoly.var(v)
        total = total + term
    return total


def schur_poly(lam: tuple, xs) -> MPoly:
    """Schur polynomial via the determinant of complete homogeneous pieces."""
    n = len(lam)
    if n == 0:
        return MPoly.const(1)
    # det(h_{lam_i - i + j}) for 1 <= i, j <= n, Laplace expansion
    size = n

    def minor_det(rows, cols):
        if not rows:
            return MPoly.const(1)
        i = rows[0]
        total = MPoly.zero()
        for pos, j in enumerate(cols):
            h = _complete_homogeneous(lam[i] - (i + 1) + (j + 1), xs)
            if not h:
                continue
            sub = minor_det(rows[1:], cols[:pos] + cols[pos + 1 :])
            total = total + h * sub * ((-1) ** pos)
        return total

    return minor_det(tuple(range(size)), tuple(range(size)))


def _elementary_symmetric(k: int, xs) -> MPoly:
    if k == 0:
        return MPoly.const(1)
    total = MPoly.zero()
    from itertools import combinations

    for combo in combinations(xs, k):
        term = MPoly.const(1)
        for v in combo:
            term = term * MPoly.var(v)
        total = total + term
    return total


def _solve_linear(rows, rhs):
    """Exact Gaussian elimination; returns a solution or None."""
    m = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(rows, rhs)]
    nrows = len(m)
    ncols = len(m[0]) - 1 if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if m[i][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = m[i][ncols]
    return sol


def grassmann_pushforward_oracle(h: MPoly, n: int, m: int, node: str = "v") -> MPoly:
    """Pushforward along the forgetful map of the subspace-flag bundle.

    ``h`` is a bi-symmetric polynomial in x-roots (factor 1, n slots) and
    y-roots (factor 2, m slots).  Over the ring of symmetric polynomials
    of the merged (n+m)-root alphabet, such classes form a free module
    with basis the Schur polynomials of the x-block inside the n-by-m
    box; the pushforward is the coefficient of the full-box element.
    Returned in the merged factor-1 roots.  Degrees that cannot be
    reduced into the basis raise ReductionError (the module is free, so
    this signals an invalid input).
    """
    xs = [root(node, 1, i) for i in range(1, n + 1)]
    ys = [root(node, 2, j) for j in range(1, m + 1)]
    us = [root(node, 1, i) for i in range(1, n + m + 1)]

    result = MPoly.zero()
    for deg, part in h.homogeneous_parts().items():
        result = result + _oracle_homogeneous(part, deg, n, m, xs, ys, us)
    return result


def _oracle_homogeneous(h, deg, n, m, xs, ys, us):
    box = [lam for lam in _partitions_in_box(n, m) if sum(lam) <= deg]
    top = tuple([m] * n)

    # base-ring monomials: products of e_1..e_{n+m} of the merged alphabet,
    # expressed in (x, y) via e_k = sum e_i(x) e_j(y)
    ex = {k: _elementary_symmetric(k, xs) for k in range(n + 1)}
    ey = {k: _elementary_symmetric(k, ys) for k in range(m + 1)}
    e_merged_xy = {}
    for k in range(1, n + m + 1):
        total = MPoly.zero()
        for i in range(max(0, k - m), min(n, k) + 1):
            total = total + ex[i] * ey[k - i]
        e_merged_xy[k] = total

    def base_monomials(d):
        # exponent vectors over e_1..e_{n+m} of weighted degree d
        out = []

        def rec(k, remaining, expo):
            if k > n + m:
                if remaining == 0:
                    out.append(tuple(expo))
                return
            for p in range(remaining // k, -1, -1):
                rec(k + 1, remaining - p * k, expo + [p])

        rec(1, d, [])
        return out

    unknowns = []  # (lambda, exponent vector)
    columns = []  # MPoly in (x, y)
    for lam in box:
        s_lam = schur_poly(lam, xs)
        for expo in base_monomials(deg - sum(lam)):
            col = s_lam
            for k, p in enumerate(expo, start=1):
                for _ in range(p):
                    col = col * e_merged_xy[k]
            unknowns.append((lam, expo))
            columns.append(col)

    monomials = set(h.terms)
    for col in columns:
        monomials.update(col.terms)
    monomials = sorted(monomials)
    rows = []
    rhs = []
    for mono in monomials:
        rows.append([col.terms.get(mono, Fraction(0)) for col in columns])
        rhs.append(h.terms.get(mono, Fraction(0)))
    sol = _solve_linear(rows, rhs)
    if sol is None:
        raise ReductionError("class does not reduce in the free-module basis")

    result = MPoly.zero()
    e_merged_u = {k: _elementary_symmetric(k, us) for k in range(1, n + m + 1)}
    for (lam, expo), c in zip(unknowns, sol):
        if lam != top or c == 0:
            continue
        term = MPoly.const(c)
        for k, p in enumerate(expo, start=1):
            for _ in range(p):
                term = term * e_merged_u[k]
        result = result + term
    return result


def shuffle_pushforward(h: MPoly, n: int, m: int, node: str = "v") -> MPoly:
    """Localisation-formula pushforward of a bi-symmetric class.

    Sum over n-element position sets of the relabeled class divided by
    the product of (x - y) factors; the independent counterpart of the
    oracle above, with which it must agree.
    """
    from .quiver import Quiver
    from .coha import shuffle_merge

    Q = Quiver((node,), ((0,),))
    return shuffle_merge(h, Q, (n,), 1, (m,), 2, 1)
