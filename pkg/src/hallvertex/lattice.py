"""Lattice (super) vertex algebras: Fock spaces over a rank-n Heisenberg
algebra graded by the lattice, exponential vertex operators, characters.

States are finite rational combinations of basis vectors indexed by a
lattice point and a monomial in creation modes b_{-k, direction}.  The
vertex operator attached to a lattice point acts by the normally ordered
exponential

    Y(e_g, z) (H |g'>)  =  eps(g, g') z^{<g, g'>}
                           E-(z) [E+(z) H] |g + g'>

where E-(z) = exp(sum_{k>=1} z^k g_{-k} / k) creates, E+(z) =
exp(-sum_{k>=1} z^{-k} g_k / k) annihilates through the monomial H by
commutators, <,> is the Gram pairing, and eps is a fixed bimultiplicative
two-cocycle determined by the ordered lattice basis:

    eps(e_i, e_j) = (-1)^{<e_i,e_j> + <e_i,e_i><e_j,e_j>}   for i > j,
                    1 otherwise.

The lowest z-power of Y(e_g, z) e_{g'} is the pairing <g, g'>.  Geometric
regrading convention: one cohomological degree step is half a conformal
weight step, so characters live in q with exponent 2*(conformal weight)
plus the lattice norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

from .algebra import HallVertexError, OutOfWindowError


class DivergentRangeError(HallVertexError):
    """A character sum over an unbounded-norm range was requested."""


@dataclass(frozen=True)
class LatticeSpec:
    rank: int
    gram: tuple  # symmetric integer matrix, tuple of tuples

    def __post_init__(self):
        if len(self.gram) != self.rank or any(len(r) != self.rank for r in self.gram):
            raise ValueError("gram matrix shape must match the rank")
        for i in range(self.rank):
            for j in range(self.rank):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("gram matrix must be symmetric")

    def pairing(self, g1, g2) -> int:
        return sum(
            g1[i] * self.gram[i][j] * g2[j]
            for i in range(self.rank)
            for j in range(self.rank)
        )

    def cocycle(self, g1, g2) -> int:
        """Bimultiplicative sign from the ordered basis."""
        total = 0
        for i in range(self.rank):
            for j in range(self.rank):
                if i > j:
                    gij = self.gram[i][j]
                    gii = self.gram[i][i]
                    gjj = self.gram[j][j]
                    total += g1[i] * g2[j] * (gij + gii * gjj)
        return -1 if total % 2 else 1

    def is_positive_definite(self) -> bool:
        # Sylvester's criterion with exact integer minors
        for k in range(1, self.rank + 1):
            sub = [row[:k] for row in self.gram[:k]]
            if _int_det(sub) <= 0:
                return False
        return True


def _int_det(mat) -> Fraction:
    m = [list(map(Fraction, row)) for row in mat]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        inv = Fraction(1) / m[c][c]
        for i in range(c + 1, n):
            factor = m[i][c] * inv
            if factor:
                m[i] = [a - factor * b for a, b in zip(m[i], m[c])]
    return det


# A basis vector is (lattice point, modes) with modes a sorted tuple of
# (k, direction) pairs, k >= 1 standing for the creation mode b_{-k,dir}.
class FockState:
    """Finite rational combination of Fock basis vectors."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[key] = c

    @classmethod
    def vacuum(cls, point) -> "FockState":
        return cls({(tuple(point), ()): Fraction(1)})

    @classmethod
    def basis(cls, point, modes) -> "FockState":
        return cls({(tuple(point), tuple(sorted(modes))): Fraction(1)})

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, Fraction(0)) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        st = FockState()
        st.terms = out
        return st

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "FockState":
        c = Fraction(c)
        st = FockState()
        if c:
            st.terms = {key: v * c for key, v in self.terms.items()}
        return st

    def __eq__(self, other):
        return self.terms == other.terms

    def __hash__(self):
        raise TypeError("FockState is unhashable")

    def conformal_weight(self) -> int:
        """Largest total mode weight appearing (0 for the zero state)."""
        return max((sum(k for k, _ in modes) for (_, modes) in self.terms), default=0)

    def __str__(self):
        if not self.terms:
            return "0"
        frags = []
        for (point, modes), c in sorted(self.terms.items()):
            mode_str = "".join(f"b(-{k},{d})" for k, d in modes)
            frags.append(f"{c}*{mode_str}|{list(point)}>")
        return " + ".join(frags)

    __repr__ = __str__


def heisenberg_apply(spec: LatticeSpec, mode: tuple, state: FockState) -> FockState:
    """Apply one Heisenberg mode.

    mode = (-k, d) with k >= 1 multiplies by the creation mode b_{-k,d};
    mode = (k, d) annihilates: it commutes through the monomial picking up
    k * gram(d, d') for each matching creation mode and kills the vacuum.
    """
    k, d = mode
    if k == 0:
        raise ValueError("mode index must be nonzero")
    out = FockState()
    if k < 0:
        kk = -k
        for (point, modes), c in state.terms.items():
            new_modes = tuple(sorted(modes + ((kk, d),)))
            out = out + FockState({(point, new_modes): c})
        return out
    for (point, modes), c in state.terms.items():
        for idx, (kk, dd) in enumerate(modes):
            if kk != k:
                continue
            pair = k * spec.gram[d][dd]
            if not pair:
                continue
            rest = modes[:idx] + modes[idx + 1 :]
            out = out + FockState({(point, rest): c * pair})
    return out


@dataclass(frozen=True)
class FieldExpansion:
    """Truncated expansion of a field applied to a state.

    coeffs maps z-powers to states; every coefficient's lattice points are
    shifted by the inserted lattice point.  Exact on [lo, hi].
    """

    lo: int
    hi: int
    coeffs: dict

    def coeff(self, m: int) -> FockState:
        if m < self.lo or m > self.hi:
            raise OutOfWindowError(f"power {m} outside window [{self.lo}, {self.hi}]")
        return self.coeffs.get(m, FockState())

    def nonzero_powers(self):
        return sorted(m for m, s in self.coeffs.items() if s)


def _annihilation_pass(spec: LatticeSpec, gamma, point, modes):
    """E+(z) applied to a creation monomial over the vacuum at ``point``.

    Returns {w-weight: FockState}: commuting exp(-sum z^-k gamma_k / k)
    through b_{-k,d} leaves (b_{-k,d} - <gamma, e_d> z^-k); expanding the
    product gives, per subset of contracted modes, the remaining monomial
    weighted by the product of -<gamma, e_d> over contractions, at
    z-weight minus the contracted mode sum.
    """
    out = {0: FockState({(point, ()): Fraction(1)})}
    for (k, d) in modes:
        pair = sum(gamma[i] * spec.gram[i][d] for i in range(spec.rank))
        nxt: dict = {}

        def add(weight, st):
            cur = nxt.get(weight)
            nxt[weight] = st if cur is None else cur + st

        for weight, st in out.items():
            # keep the mode
            kept = heisenberg_apply(spec, (-k, d), st)
            add(weight, kept)
            # contract it
            if pair:
                add(weight - k, st.scale(-pair))
        out = nxt
    return out


def lattice_vertex_op(
    spec: LatticeSpec, gamma, target: FockState, window: tuple
) -> FieldExpansion:
    """Vertex operator of a lattice point applied to a state.

    The lowest z-power on a basis vector at lattice point g' is the
    pairing <gamma, g'> minus the conformal weight of the contracted
    modes; the window must reach its own lowest power and the expansion
    is exact on the window.
    """
    lo, hi = window
    gamma = tuple(gamma)
    if len(gamma) != spec.rank:
        raise ValueError("lattice point has the wrong rank")
    coeffs: dict = {}

    def add(power, st):
        cur = coeffs.get(power)
        coeffs[power] = st if cur is None else cur + st

    min_power = None
    for (point, modes), c in target.terms.items():
        pairing = spec.pairing(gamma, point)
        sign = spec.cocycle(gamma, point)
        shifted = tuple(a + b for a, b in zip(gamma, point))
        annihilated = _annihilation_pass(spec, gamma, shifted, modes)
        base_lo = pairing + min(annihilated)
        min_power = base_lo if min_power is None else min(min_power, base_lo)
        for weight, st in annihilated.items():
            if not st:
                continue
            # multiply by E-(z) up to the window top
            budget = hi - (pairing + weight)
            for extra, created in _creation_expansion(spec, gamma, budget).items():
                power = pairing + weight + extra
                if power < lo or power > hi:
                    continue
                piece = FockState()
                for (pt, ms), cc in st.terms.items():
                    for (cm, cc2) in created:
                        piece = piece + FockState(
                            {(pt, tuple(sorted(ms + cm))): cc * cc2}
                        )
                add(power, piece.scale(c * sign))
    if target and min_power is not None and lo > min_power:
        raise OutOfWindowError(
            f"window [{lo}, {hi}] excludes the leading power {min_power}"
        )
    return FieldExpansion(lo, hi, {m: s for m, s in coeffs.items() if s})


def _creation_expansion(spec: LatticeSpec, gamma, budget: int):
    """exp(sum_{k>=1} z^k gamma_{-k} / k) truncated at total weight budget.

    Returns {weight: [(mode tuple, coefficient)]}.
    """
    out = {0: [((), Fraction(1))]}
    if budget <= 0:
        return out
    # single-mode pieces: z^k gamma_{-k} / k contributes modes (k, d) with
    # coefficient gamma_d / k
    singles = []
    for k in range(1, budget + 1):
        for d in range(spec.rank):
            if gamma[d]:
                singles.append((k, d, Fraction(gamma[d], k)))
    # multiply exponentials mode by mode: exp(c * b) = sum c^j b^j / j!
    for (k, d, c) in singles:
        nxt = {w: list(items) for w, items in out.items()}
        for w, items in out.items():
            power = 1
            fact = Fraction(1)
            cc = Fraction(1)
            while w + power * k <= budget:
                fact *= power
                cc *= c
                for (modes, coeff) in items:
                    nw = w + power * k
                    nxt.setdefault(nw, []).append(
                        (tuple(sorted(modes + ((k, d),) * power)), coeff * cc / fact)
                    )
                power += 1
        out = nxt
    return out


def character(spec: LatticeSpec, max_order: int, points=None):
    """Graded dimension: sum over lattice points of q^norm times the
    Heisenberg factor prod_{i>=1} (1 - q^{2i})^{-rank}, truncated.

    With no explicit point range the Gram form must be positive definite
    (otherwise the sum diverges) and points are enumerated by norm.
    """
    if max_order < 0:
        raise ValueError("max_order must be >= 0")
    if points is None:
        if spec.rank and not spec.is_positive_definite():
            raise DivergentRangeError(
                "norm is unbounded below on the full lattice; pass an explicit range"
            )
        points = _points_of_norm_at_most(spec, max_order)
    lattice_part = [0] * (max_order + 1)
    for pt in points:
        norm = spec.pairing(pt, pt)
        if norm < 0:
            raise DivergentRangeError(f"point {pt} has negative norm")
        if norm <= max_order:
            lattice_part[norm] += 1
    heis = [0] * (max_order + 1)
    heis[0] = 1
    for i in range(1, max_order // 2 + 1):
        step = 2 * i
        for _ in range(spec.rank):
            for dd in range(step, max_order + 1):
                heis[dd] += heis[dd - step]
    out = [0] * (max_order + 1)
    for a, ca in enumerate(lattice_part):
        if not ca:
            continue
        for b in range(0, max_order + 1 - a):
            out[a + b] += ca * heis[b]
    return tuple(out)


def _points_of_norm_at_most(spec: LatticeSpec, bound: int):
    if spec.rank == 0:
        return [()]
    # positive definite: |g_i| is bounded by bound + diagonal slack
    box = bound + 1
    pts = []
    for pt in iproduct(*[range(-box, box + 1) for _ in range(spec.rank)]):
        if spec.pairing(pt, pt) <= bound:
            pts.append(pt)
    return pts


def fock_dimension_by_degree(spec: LatticeSpec, max_order: int):
    """Direct count of Fock basis vectors by geometric degree.

    Degree of a basis vector = lattice norm plus twice the total mode
    weight; an independent cross-check of ``character``.
    """
    counts = [0] * (max_order + 1)
    for pt in _points_of_norm_at_most(spec, max_order):
        norm = spec.pairing(pt, pt)
        budget = (max_order - norm) // 2

        def count_monomials(max_weight):
            # partitions with parts weighted 1..max_weight, rank colours
            table = [0] * (max_weight + 1)
            table[0] = 1
            for k in range(1, max_weight + 1):
                for _ in range(spec.rank):
                    for dd in range(k, max_weight + 1):
                        table[dd] += table[dd - k]
            return table

        table = count_monomials(budget) if budget >= 0 else []
        for wgt, cnt in enumerate(table):
            deg = norm + 2 * wgt
            if deg <= max_order:
                counts[deg] += cnt
    return tuple(counts)


def weak_commutativity_check(
    spec: LatticeSpec, g1, g2, target: FockState, depth: int = 3
):
    """(z - w)^N-damped commutator of two lattice fields on a state.

    N = |<g1, g2>| + depth.  Both composites are expanded exactly on a
    window wide enough that the damped difference is fully visible there;
    the statistics sign is (-1)^(<g1,g1> <g2,g2>).  Returns (ok, witness).
    """
    from math import comb

    pairing = spec.pairing(tuple(g1), tuple(g2))
    N = abs(pairing) + depth
    sign = (-1) ** (spec.pairing(g1, g1) * spec.pairing(g2, g2))

    lo1, hi1 = _outer_window(spec, g1, g2, target, depth, N)

    def compose(first, second):
        # second applied first (inner, variable w), then first (z)
        out: dict = {}
        inner = lattice_vertex_op(spec, second, target, (lo1, hi1))
        for wpow, st in inner.coeffs.items():
            if not st:
                continue
            outer = lattice_vertex_op(spec, first, st, (lo1, hi1))
            for zpow, st2 in outer.coeffs.items():
                if not st2:
                    continue
                key = (zpow, wpow)
                cur = out.get(key)
                out[key] = st2 if cur is None else cur + st2
        return out

    f12 = compose(g1, g2)  # Y(g1, z) Y(g2, w)
    f21 = compose(g2, g1)  # Y(g2, z') Y(g1, w') with z' = w, w' = z
    # damped difference: sum_j C(N,j) (-1)^j z^(N-j) w^j (F12 - sign*F21^swap)
    diff: dict = {}
    for (a, b), st in f12.items():
        cur = diff.get((a, b))
        diff[(a, b)] = st if cur is None else cur + st
    for (a, b), st in f21.items():
        key = (b, a)
        cur = diff.get(key)
        st = st.scale(-sign)
        diff[key] = st if cur is None else cur + st
    # valid rectangle: both composites exact for powers in [lo1, hi1]^2;
    # after multiplying by (z-w)^N, coefficients at (A, B) draw on
    # (A-N..A, B-N..B), so restrict to A, B in [lo1 + N, hi1]
    bad = []
    for A in range(lo1 + N, hi1 + 1):
        for B in range(lo1 + N, hi1 + 1):
            acc = FockState()
            for j in range(N + 1):
                a = A - (N - j)
                b = B - j
                st = diff.get((a, b))
                if st:
                    acc = acc + st.scale(comb(N, j) * (-1) ** j)
            if acc:
                bad.append(((A, B), acc))
    if bad:
        (A, B), st = bad[0]
        return False, f"z^{A} w^{B}: {st}"
    if hi1 - (lo1 + N) < depth:
        return False, "window-insufficient"
    return True, None


def _outer_window(spec, g1, g2, target, depth, N):
    """A window wide enough for both orders of composition."""
    wt = target.conformal_weight()
    pairings = []
    for (point, _modes) in target.terms:
        pairings.append(spec.pairing(g2, point))
        pairings.append(spec.pairing(g1, point))
        shifted1 = tuple(a + b for a, b in zip(g2, point))
        shifted2 = tuple(a + b for a, b in zip(g1, point))
        pairings.append(spec.pairing(g1, shifted1))
        pairings.append(spec.pairing(g2, shifted2))
    base = min(pairings, default=0)
    lo = base - wt - N - depth - 2
    hi = max(pairings, default=0) + wt + N + depth + 2
    return lo, hi
