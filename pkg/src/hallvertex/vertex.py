"""Vertex-coalgebra structures on the cohomology of quiver moduli: the
equivariant Euler-class expansion, the coproduct, the Yang-Baxter series,
signs and grading.

Conventions (one global choice, validated by the covacuum axiom, degree
bookkeeping, and the product-compatibility square; see also verify.py):

* The circle action on the first tensor factor substitutes x -> x - z
  into first-factor Chern roots.  ``holomorphic_y`` of u1+u2 at the split
  ((1),(1)) is therefore (x - z) + y.

* In the coproduct the Euler factors of the Hom complex are oriented
  first-minus-second, matching the shuffle kernel of coha.py, so every
  coproduct factor reads ((x - y) - z).  The opposite orientation would
  differ by (-1)^(rank of the Hom complex) per component pair and is NOT
  compatible with the first-minus-second kernel in the bialgebra square;
  that forces the choice made here.

* ``s_matrix`` keeps both of its Euler expansions at weight -1 on
  second-minus-first forms, so for one node and no arrows it is the
  expansion of (z - u)/(z + u) with u = y - x.  The braiding that
  actually intertwines the shuffle product is ``product_braiding``,
  which orients factors as the kernel does; on symmetric quivers it
  degenerates to the constant (-1)^(rank of Hom(second, first)).

Series windows are caller-chosen; every operation reports its
guaranteed-exact sub-window through the returned ZSeries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import (
    MPoly,
    OutOfWindowError,
    Z,
    ZeroWeightError,
    ZSeries,
    ZWSeries,
    _inv_linear_series,
    inv_linear_zw,
    root,
)
from .quiver import (
    CohClass,
    DimVector,
    Quiver,
    WeightedComplex,
    euler_form,
    theta_factors,
)


class WindowTooSmallError(OutOfWindowError):
    """The requested window cannot contain the leading power."""


@dataclass(frozen=True)
class BiClass:
    """Bi-invariant polynomials on pairs of components."""

    quiver: Quiver
    components: dict  # (DimVector, DimVector) -> MPoly, factors 1 and 2

    def __post_init__(self):
        for (g1, g2), poly in self.components.items():
            for factor, gamma in ((1, g1), (2, g2)):
                for k, q in enumerate(self.quiver.nodes):
                    for i in range(1, gamma[k]):
                        swap = {
                            root(q, factor, i): root(q, factor, i + 1),
                            root(q, factor, i + 1): root(q, factor, i),
                        }
                        if poly.rename(swap) != poly:
                            raise ValueError("component is not bi-invariant")

    def poly_at(self, g1: DimVector, g2: DimVector) -> MPoly:
        return self.components.get((tuple(g1), tuple(g2)), MPoly.zero())


@dataclass(frozen=True)
class Orientation:
    """Component-wise signs; the trivial orientation is the default."""

    eps: dict = field(default_factory=dict)
    delta: dict = field(default_factory=dict)

    def eps_at(self, g1: DimVector, g2: DimVector) -> int:
        return self.eps.get((g1, g2), 1)

    def delta_at(self, g1: DimVector, g2: DimVector) -> int:
        return self.delta.get((g1, g2), 1)


TRIVIAL_ORIENTATION = Orientation()


def psi_euler(c: WeightedComplex, window: tuple) -> ZSeries:
    """Equivariant Euler class of a weighted complex, expanded at z = infinity.

    prod_even (form + w*z) / prod_odd (form + w*z) on the given window;
    the leading power is the rank.  Any factor of weight zero is an error.
    """
    lo, hi = window
    for f, w in c.even + c.odd:
        if w == 0:
            raise ZeroWeightError("weighted complex has a factor of weight zero")
    even, odd, sign = _cancel_factors(c)
    depth = max(1, (hi - lo + 1) + (c.rank - lo))
    out = ZSeries.constant(sign)
    for f, w in even:
        out = out * ZSeries.from_poly(f + MPoly.var(Z) * w)
    for f, w in odd:
        out = out * _inv_linear_series(f, w, depth)
    if out.tail:
        return out.restrict(max(lo, out.lo), hi)
    return out.restrict(lo, hi)


def _cancel_factors(c: WeightedComplex):
    """Cancel matching even/odd factors exactly before expanding.

    (f + wz)/(f + wz) = 1 and (f + wz)/(-f - wz) = -1; cancelling these
    keeps ratios like the one-loop quiver's exactly constant instead of
    truncated.
    """
    odd = list(c.odd)
    even = []
    sign = 1
    for f, w in c.even:
        if (f, w) in odd:
            odd.remove((f, w))
            continue
        if (-f, -w) in odd:
            odd.remove((-f, -w))
            sign = -sign
            continue
        even.append((f, w))
    return even, odd, sign


def split_pullback(alpha: CohClass, split: tuple) -> BiClass:
    """Restrict a class to a product of two components.

    Per node, the first g slots become factor-1 variables and the
    remaining g' slots become factor-2 variables (slots renumbered from
    one).  Invariance of the input makes the result bi-invariant.
    """
    g1, g2 = split
    Q = alpha.quiver
    if tuple(a + b for a, b in zip(g1, g2)) != alpha.gamma:
        raise ValueError("split does not sum to the class's dimension vector")
    mapping = {}
    for k, q in enumerate(Q.nodes):
        for j in range(1, g2[k] + 1):
            mapping[root(q, 1, g1[k] + j)] = root(q, 2, j)
    poly = alpha.poly.rename(mapping)
    return BiClass(Q, {(tuple(g1), tuple(g2)): poly})


def _shift_factor_vars(
    poly: MPoly, Q: Quiver, gamma: DimVector, factor: int, delta: MPoly
) -> MPoly:
    subs = {}
    for k, q in enumerate(Q.nodes):
        for i in range(1, gamma[k] + 1):
            v = root(q, factor, i)
            subs[v] = MPoly.var(v) + delta
    return poly.subs(subs) if subs else poly


def coproduct_complex(
    Q: Quiver, g1: DimVector, g2: DimVector, factors: tuple = (1, 2)
) -> WeightedComplex:
    """Hom-complex factors oriented first-minus-second at weight -1.

    The Euler factors of the coproduct: per node ((x_i - y_j) - z) even,
    per arrow p->q ((x_i at p - y_j at q) - z) odd.
    """
    return theta_factors(Q, g1, g2, weight=-1, factors=factors).negated_forms()


def y_covertex(
    alpha: CohClass,
    split: tuple,
    window: tuple,
    orient: Orientation = TRIVIAL_ORIENTATION,
) -> ZSeries:
    """The vertex coproduct of a class, restricted to one split.

    Multiplies the split pullback (first-factor variables shifted by -z)
    by the Euler expansion of the Hom complex, oriented as in the shuffle
    kernel, and by the orientation sign.  For a homogeneous class of
    cohomological degree a the sign is eps * (-1)^(a * rk Hom(g', g'));
    quiver cohomology lives in even degrees, so with the trivial
    orientation the sign is always +1.
    """
    g1, g2 = split
    Q = alpha.quiver
    lo, hi = window
    rk = euler_form(Q, g1, g2)
    if hi < rk:
        raise WindowTooSmallError(f"window top {hi} cannot contain the leading power {rk}")
    series = psi_euler(coproduct_complex(Q, g1, g2), (lo - _shift_span(alpha), hi))
    poly = split_pullback(alpha, split).poly_at(g1, g2)
    shifted = _shift_factor_vars(poly, Q, g1, 1, -MPoly.var(Z))
    rk22 = euler_form(Q, g2, g2)
    eps = orient.eps_at(tuple(g1), tuple(g2))
    out = None
    for deg, part in shifted.homogeneous_parts().items():
        sign = eps * ((-1) ** (2 * deg * rk22))
        piece = series * ZSeries.from_poly(part) * sign
        out = piece if out is None else out + piece
    if out is None:
        out = ZSeries(lo, hi, {}, tail=False)
    return out.restrict(max(lo, out.lo) if out.tail else lo, hi)


def _shift_span(alpha: CohClass) -> int:
    """How many z-powers the shifted class part spans (its degree)."""
    return alpha.poly.degree()


def holomorphic_y(alpha: CohClass, split: tuple) -> ZSeries:
    """Coproduct with the Hom complex replaced by the empty complex.

    Pure translation: the split pullback with factor-1 variables shifted
    by -z; only non-negative powers of z appear.
    """
    g1, _ = split
    Q = alpha.quiver
    poly = split_pullback(alpha, split).poly_at(*split)
    shifted = _shift_factor_vars(poly, Q, g1, 1, -MPoly.var(Z))
    return ZSeries.from_poly(shifted)


def degree_of(alpha: CohClass) -> int:
    """Integer grading: cohomological degree plus the self-pairing rank."""
    if not alpha.poly.is_homogeneous():
        raise ValueError("class is not homogeneous")
    return alpha.cohomological_degree() + euler_form(alpha.quiver, alpha.gamma, alpha.gamma)


def _hom_pairs(Q: Quiver, ga: DimVector, gb: DimVector):
    """(node, i, j) node pairings and (p, q, i, j, mult) arrow pairings of
    the Hom complex from the a-side to the b-side."""
    nodes = [
        (q, i, j)
        for k, q in enumerate(Q.nodes)
        for i in range(1, ga[k] + 1)
        for j in range(1, gb[k] + 1)
    ]
    arrows = []
    for a, p in enumerate(Q.nodes):
        for b, q in enumerate(Q.nodes):
            mult = Q.arrows[a][b]
            if not mult:
                continue
            for i in range(1, ga[a] + 1):
                for j in range(1, gb[b] + 1):
                    arrows.append((p, q, i, j, mult))
    return nodes, arrows


def swapped_theta(
    Q: Quiver, g1: DimVector, g2: DimVector, weight: int, factors: tuple = (1, 2)
) -> WeightedComplex:
    """Hom complex from the second slot to the first, on the same pair.

    Forms are x_i - y_j per node (target roots in the first slot) and
    x_i at q - y_j at p per arrow p->q (source roots y at node p).
    """
    fa, fb = factors
    nodes, arrows = _hom_pairs(Q, g2, g1)  # source = second slot
    even = tuple(
        (MPoly.var(root(q, fa, i)) - MPoly.var(root(q, fb, j)), weight)
        for (q, j, i) in nodes
    )
    odd = []
    for (p, q, j, i, mult) in arrows:
        odd.extend([(MPoly.var(root(q, fa, i)) - MPoly.var(root(p, fb, j)), weight)] * mult)
    return WeightedComplex(even, tuple(odd))


def s_matrix(Q: Quiver, g1: DimVector, g2: DimVector, window: tuple) -> ZSeries:
    """Yang-Baxter series: Euler expansion of the Hom complex divided by
    the expansion of the swapped complex, both at weight -1.

    For one node and no arrows this is the expansion of (z-u)/(z+u) with
    u = y - x; whenever the two expansions coincide factor-by-factor
    (e.g. the one-loop quiver) the ratio is exactly 1, and it is exactly 1
    whenever either component is zero.
    """
    theta = theta_factors(Q, g1, g2, weight=-1)
    sigma = swapped_theta(Q, g1, g2, weight=-1)
    return psi_euler(theta.concat(sigma.shifted()), window)


def product_braiding(
    Q: Quiver, g1: DimVector, g2: DimVector, window: tuple, factors: tuple = (1, 2)
) -> ZSeries:
    """The braiding that intertwines the shuffle product.

    Numerator: Hom(first, second) factors oriented first-minus-second at
    weight -1, i.e. ((x - y) - z).  Denominator: Hom(second, first)
    factors oriented second-minus-first at weight +1, i.e. ((y - x) + z).
    On symmetric quivers the factor multisets match up to overall
    negation and the series is the constant (-1)^rk Hom(second, first).
    """
    fa, fb = factors
    num = theta_factors(Q, g1, g2, weight=-1, factors=factors).negated_forms()
    den = swapped_theta(Q, g1, g2, weight=1, factors=factors).negated_forms()
    return psi_euler(num.concat(den.shifted()), window)


# ---------------------------------------------------------------------------
# Yang-Baxter check (bivariate expansion)
# ---------------------------------------------------------------------------


def _factor_zw(f: MPoly, cz: int, cw: int) -> ZWSeries:
    """Exact bivariate series of f + cz*z + cw*w (f free of both)."""
    base = {(0, 0): f}
    if cz:
        base[(1, 0)] = MPoly.const(cz)
    if cw:
        base[(0, 1)] = MPoly.const(cw)
    zhi = max(k[0] for k in base)
    whi = max(k[1] for k in base)
    return ZWSeries((0, zhi), (0, whi), base, False, False)


def _s_matrix_zw(
    Q: Quiver, ga: DimVector, gb: DimVector, fa: int, fb: int, cz: int, cw: int, depth: int
) -> ZWSeries:
    """s_matrix with the expansion variable cz*z + cw*w."""
    theta = theta_factors(Q, ga, gb, weight=-1, factors=(fa, fb))
    sigma = swapped_theta(Q, ga, gb, weight=-1, factors=(fa, fb))
    out = ZWSeries.constant(1)
    for f, _ in theta.even:
        out = out * _factor_zw(f, -cz, -cw)
    for f, _ in sigma.odd:
        out = out * _factor_zw(f, -cz, -cw)
    for f, _ in theta.odd:
        out = out * inv_linear_zw(f, -cz, -cw, depth)
    for f, _ in sigma.even:
        out = out * inv_linear_zw(f, -cz, -cw, depth)
    return out


def ybe_check(Q: Quiver, g1: DimVector, g2: DimVector, g3: DimVector, depth: int = 3):
    """Yang-Baxter equation at truncation depth, as bivariate series.

    S12(z) S13(z+w) S23(w) versus S23(w) S13(z+w) S12(z), expanded in
    descending z then descending w, with z+w arguments expanded as power
    series in w/z.  Returns (ok, witness).
    """
    d = depth + 4
    s12 = _s_matrix_zw(Q, g1, g2, 1, 2, 1, 0, d)
    s13 = _s_matrix_zw(Q, g1, g3, 1, 3, 1, 1, d)
    s23 = _s_matrix_zw(Q, g2, g3, 2, 3, 0, 1, d)
    lhs = s12 * s13 * s23
    rhs = s23 * s13 * s12
    (zlo, zhi), (wlo, whi) = lhs.common_window(rhs)
    if zhi - zlo < depth - 1 or whi - wlo < depth - 1:
        return False, "window-insufficient"
    for a in range(zlo, zhi + 1):
        for b in range(wlo, whi + 1):
            la = lhs.coeffs.get((a, b), MPoly.zero())
            rb = rhs.coeffs.get((a, b), MPoly.zero())
            if la != rb:
                return False, f"difference at z^{a} w^{b}: {la - rb}"
    return True, None
