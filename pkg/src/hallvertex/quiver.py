"""Quivers, dimension vectors, cohomology classes of the moduli of
representations, and the two-term Hom complex as factored Euler data.

The component of the moduli space at dimension vector g is the quotient
of a vector space by the product of general linear groups, so its
cohomology is the ring of polynomials in per-node Chern roots invariant
under the product of symmetric groups permuting slots within each node.
A ``CohClass`` stores such an invariant polynomial; invariance is checked
on construction.

The Hom complex between components (g, g') has degree-zero part the
per-node Hom spaces and degree-one part one Hom space per arrow.  Its
factored shadow is a ``WeightedComplex``: two lists of (linear form,
integer weight) pairs, even and odd.  Linear factors are oriented as
(second-factor root - first-factor root); this orientation is fixed once
and the product kernel carries its own orientation, see coha.py.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from .algebra import MPoly, Var, root, HallVertexError

DimVector = tuple  # tuple[int, ...] aligned with node order


class InvarianceError(HallVertexError):
    """A polynomial that must be symmetric under slot permutations is not."""


@dataclass(frozen=True)
class Quiver:
    nodes: tuple
    arrows: tuple  # multiplicity matrix, arrows[i][j] = #arrows node_i -> node_j

    def __post_init__(self):
        n = len(self.nodes)
        if len(self.arrows) != n or any(len(row) != n for row in self.arrows):
            raise ValueError("arrow matrix shape must match the node count")
        if any(a < 0 for row in self.arrows for a in row):
            raise ValueError("arrow multiplicities must be non-negative")

    def index(self, node: str) -> int:
        return self.nodes.index(node)

    def arrow_mult(self, p: str, q: str) -> int:
        return self.arrows[self.index(p)][self.index(q)]

    def zero_dim(self) -> DimVector:
        return (0,) * len(self.nodes)

    def check_dim(self, gamma: DimVector):
        if len(gamma) != len(self.nodes) or any(g < 0 for g in gamma):
            raise ValueError(f"bad dimension vector {gamma} for nodes {self.nodes}")

    # -- serialisation ---------------------------------------------------

    @classmethod
    def from_json(cls, data) -> "Quiver":
        nodes = tuple(data["nodes"])
        n = len(nodes)
        mat = [[0] * n for _ in range(n)]
        for arr in data.get("arrows", []):
            i, j = nodes.index(arr["from"]), nodes.index(arr["to"])
            mat[i][j] += int(arr.get("mult", 1))
        return cls(nodes, tuple(tuple(r) for r in mat))

    @classmethod
    def load(cls, path: str) -> "Quiver":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        arrows = []
        for i, p in enumerate(self.nodes):
            for j, q in enumerate(self.nodes):
                if self.arrows[i][j]:
                    arrows.append({"from": p, "to": q, "mult": self.arrows[i][j]})
        return {"nodes": list(self.nodes), "arrows": arrows}


def a1_quiver() -> Quiver:
    return Quiver(("v",), ((0,),))


def jordan_quiver() -> Quiver:
    return Quiver(("v",), ((1,),))


def kronecker_quiver(mult: int = 2) -> Quiver:
    return Quiver(("p", "q"), ((0, mult), (0, 0)))


BUILTIN_QUIVERS = {
    "a1": a1_quiver,
    "jordan": jordan_quiver,
    "kronecker": kronecker_quiver,
}


def roots_of(Q: Quiver, gamma: DimVector, factor: int):
    """All Chern-root variables of the component, grouped per node."""
    return {
        q: [root(q, factor, i) for i in range(1, gamma[k] + 1)]
        for k, q in enumerate(Q.nodes)
    }


def euler_form(Q: Quiver, gamma: DimVector, gamma2: DimVector) -> int:
    """Rank of the Hom complex: node pairings minus arrow pairings."""
    Q.check_dim(gamma)
    Q.check_dim(gamma2)
    total = sum(gamma[k] * gamma2[k] for k in range(len(Q.nodes)))
    for i in range(len(Q.nodes)):
        for j in range(len(Q.nodes)):
            total -= Q.arrows[i][j] * gamma[i] * gamma2[j]
    return total


def arrow_form(Q: Quiver, gamma: DimVector, gamma2: DimVector) -> int:
    """Arrow-only pairing sum; the node contribution is left out."""
    total = 0
    for i in range(len(Q.nodes)):
        for j in range(len(Q.nodes)):
            total += Q.arrows[i][j] * gamma[i] * gamma2[j]
    return total


@dataclass(frozen=True)
class WeightedComplex:
    """Formal difference of lists of (linear form + weight*z) factors."""

    even: tuple  # tuple of (MPoly linear form, int weight)
    odd: tuple = ()

    @property
    def rank(self) -> int:
        return len(self.even) - len(self.odd)

    def concat(self, other: "WeightedComplex") -> "WeightedComplex":
        return WeightedComplex(self.even + other.even, self.odd + other.odd)

    def negated_forms(self) -> "WeightedComplex":
        return WeightedComplex(
            tuple((-f, w) for f, w in self.even),
            tuple((-f, w) for f, w in self.odd),
        )

    def with_weight(self, w: int) -> "WeightedComplex":
        return WeightedComplex(
            tuple((f, w) for f, _ in self.even),
            tuple((f, w) for f, _ in self.odd),
        )

    def shifted(self) -> "WeightedComplex":
        """Swap even and odd parts (inverts the Euler class)."""
        return WeightedComplex(self.odd, self.even)

    def factor_multiset(self):
        """Canonical multiset of (rendered form, weight, parity)."""
        out = {}
        for f, w in self.even:
            key = (str(f), w, 0)
            out[key] = out.get(key, 0) + 1
        for f, w in self.odd:
            key = (str(f), w, 1)
            out[key] = out.get(key, 0) + 1
        return out


def theta_factors(
    Q: Quiver,
    gamma: DimVector,
    gamma2: DimVector,
    weight: int,
    factors: tuple = (1, 2),
) -> WeightedComplex:
    """Factored Hom complex between components (gamma, gamma2).

    Even part: per node q, forms y_j - x_i for i <= gamma_q, j <= gamma2_q.
    Odd part: per arrow p -> q with multiplicity, forms y_j - x_i with x a
    node-p root of the first factor and y a node-q root of the second.
    The given equivariant weight is attached to every factor.
    """
    Q.check_dim(gamma)
    Q.check_dim(gamma2)
    fa, fb = factors
    even = []
    for k, q in enumerate(Q.nodes):
        for i in range(1, gamma[k] + 1):
            for j in range(1, gamma2[k] + 1):
                form = MPoly.var(root(q, fb, j)) - MPoly.var(root(q, fa, i))
                even.append((form, weight))
    odd = []
    for a, p in enumerate(Q.nodes):
        for b, q in enumerate(Q.nodes):
            mult = Q.arrows[a][b]
            if not mult:
                continue
            for i in range(1, gamma[a] + 1):
                for j in range(1, gamma2[b] + 1):
                    form = MPoly.var(root(q, fb, j)) - MPoly.var(root(p, fa, i))
                    odd.extend([(form, weight)] * mult)
    return WeightedComplex(tuple(even), tuple(odd))


@dataclass(frozen=True)
class CohClass:
    """An invariant polynomial in the Chern roots of one component."""

    quiver: Quiver
    gamma: DimVector
    poly: MPoly
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        self.quiver.check_dim(self.gamma)
        allowed = set()
        for k, q in enumerate(self.quiver.nodes):
            for i in range(1, self.gamma[k] + 1):
                allowed.add(root(q, 1, i))
        used = self.poly.variables()
        if not used <= allowed:
            raise ValueError(f"variables {used - allowed} not among the component's roots")
        if self.check and not self.is_invariant():
            raise InvarianceError("polynomial is not invariant under slot permutations")

    def is_invariant(self) -> bool:
        for k, q in enumerate(self.quiver.nodes):
            for i in range(1, self.gamma[k]):
                swap = {
                    root(q, 1, i): root(q, 1, i + 1),
                    root(q, 1, i + 1): root(q, 1, i),
                }
                if self.poly.rename(swap) != self.poly:
                    return False
        return True

    @classmethod
    def constant(cls, Q: Quiver, gamma: DimVector, c=1) -> "CohClass":
        return cls(Q, gamma, MPoly.const(c))

    def cohomological_degree(self) -> int:
        """Twice the polynomial degree; requires homogeneity."""
        if not self.poly.is_homogeneous():
            raise ValueError("class is not homogeneous")
        return 2 * self.poly.degree()

    def __str__(self) -> str:
        return f"{self.poly}@{list(self.gamma)}"


def invariant_monomial_count(gamma_q: int, degree: int) -> int:
    """Dimension of the degree-``degree`` invariants in gamma_q roots.

    Counts monomials in the elementary symmetric generators e_1..e_k of
    weighted degree equal to ``degree``; used to cross-check the Hilbert
    series by direct enumeration.
    """
    if gamma_q == 0:
        return 1 if degree == 0 else 0
    count = 0

    def rec(remaining: int, max_part: int):
        nonlocal count
        if remaining == 0:
            count += 1
            return
        for part in range(min(remaining, max_part), 0, -1):
            rec(remaining - part, part)

    rec(degree, gamma_q)
    return count


def hilbert_series(gamma: DimVector, max_deg: int):
    """Coefficients of prod_q prod_{k<=gamma_q} 1/(1 - q^{2k}) up to q^max_deg."""
    if max_deg < 0:
        raise ValueError("max_deg must be >= 0")
    coeffs = [0] * (max_deg + 1)
    coeffs[0] = 1
    for gq in gamma:
        for k in range(1, gq + 1):
            step = 2 * k
            # multiply by 1/(1 - q^step)
            for d in range(step, max_deg + 1):
                coeffs[d] += coeffs[d - step]
    return tuple(coeffs)
