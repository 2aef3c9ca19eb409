"""The shuffle product on the cohomology of quiver moduli.

Convention (fixed once, used verbatim throughout the package): the kernel
attached to a pair of dimension vectors (g, g') is

    K(x; y) = prod_{arrows p->q} prod_{i<=g_p, j<=g'_q} (x^(p)_i - y^(q)_j)
            / prod_{nodes q}    prod_{i<=g_q, j<=g'_q} (x^(q)_i - y^(q)_j)

with x the first (sub) factor and y the second (quotient) factor, i.e.
every linear factor is oriented first-minus-second.  The product of
f at g and g at g' is the sum over all per-node shuffles of the relabeled
f(x) g(y) K(x; y); the sum always clears its denominators and the
polynomial result is returned.  A failure to clear is an internal
consistency error and aborts loudly.

The sum is organised over a single common denominator per node (the full
Vandermonde product of the merged roots) so that no per-term reduction is
needed: each shuffle term is multiplied by the complementary within-block
factors, with the sign of the block split tracked explicitly, and the full
Vandermonde is divided out once at the end by repeated exact division.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from fractions import Fraction
from itertools import combinations, product as iproduct

from .algebra import MPoly, NonPolynomialError, Var, Z, root
from .quiver import CohClass, DimVector, Quiver, euler_form


def _node_shuffles(total: int, first: int):
    """All sorted position sets of size ``first`` inside 1..total."""
    return list(combinations(range(1, total + 1), first))


def shuffle_merge(
    poly: MPoly,
    Q: Quiver,
    gamma_a: DimVector,
    factor_a: int,
    gamma_b: DimVector,
    factor_b: int,
    out_factor: int,
) -> MPoly:
    """Sum over shuffles of poly * kernel, merging two variable groups.

    ``poly`` may involve variables of other factors or the equivariant
    variable; those ride along untouched.  Kernel orientation is
    first-minus-second with the a-group first.  Raises NonPolynomialError
    if the Vandermonde denominator does not clear (a kernel-convention
    bug, never expected on real inputs).

    The sum is organised over a single common denominator per node: each
    shuffle term is multiplied by the complementary within-block factors
    with the split sign tracked explicitly, and the full Vandermonde is
    divided out once at the end.  Internally everything runs on dense
    exponent tuples over the local variable universe.
    """
    n_nodes = len(Q.nodes)
    totals = tuple(gamma_a[k] + gamma_b[k] for k in range(n_nodes))

    # local variable universe: the polynomial's own variables plus every
    # merged slot; renames only ever land inside this set
    universe = set(poly.variables())
    for k, node in enumerate(Q.nodes):
        for pos in range(1, totals[k] + 1):
            universe.add(root(node, out_factor, pos))
        for i in range(1, gamma_a[k] + 1):
            universe.add(root(node, factor_a, i))
        for j in range(1, gamma_b[k] + 1):
            universe.add(root(node, factor_b, j))
    universe = sorted(universe)
    index = {v: i for i, v in enumerate(universe)}
    nvars = len(universe)

    def to_dense(p: MPoly) -> dict:
        out = {}
        for mono, c in p.terms.items():
            expo = [0] * nvars
            for v, e in mono:
                expo[index[v]] = e
            out[tuple(expo)] = c
        return out

    def dense_mul(a: dict, b: dict) -> dict:
        out: dict = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                key = tuple(x + y for x, y in zip(ka, kb))
                s = out.get(key)
                c = ca * cb
                out[key] = c if s is None else s + c
        return {k: c for k, c in out.items() if c}

    def dense_lin(ia: int, ib: int) -> dict:
        ka = [0] * nvars
        ka[ia] = 1
        kb = [0] * nvars
        kb[ib] = 1
        return {tuple(ka): Fraction(1), tuple(kb): Fraction(-1)}

    # arrow part of the kernel, in pre-merge variables
    kernel = {(0,) * nvars: Fraction(1)}
    for a, p in enumerate(Q.nodes):
        for b, q in enumerate(Q.nodes):
            mult = Q.arrows[a][b]
            if not mult:
                continue
            for i in range(1, gamma_a[a] + 1):
                for j in range(1, gamma_b[b] + 1):
                    lin = dense_lin(index[root(p, factor_a, i)], index[root(q, factor_b, j)])
                    for _ in range(mult):
                        kernel = dense_mul(kernel, lin)
    numerator = dense_mul(to_dense(poly), kernel)

    # The within-block Vandermonde complement of a split is exactly the
    # rename of the pre-merge Vandermonde of each block (splits keep block
    # order, so no extra sign); multiply it in once, before shuffling.
    for k, node in enumerate(Q.nodes):
        for factor, size in ((factor_a, gamma_a[k]), (factor_b, gamma_b[k])):
            for a, b in combinations(range(1, size + 1), 2):
                numerator = dense_mul(
                    numerator,
                    dense_lin(index[root(node, factor, a)], index[root(node, factor, b)]),
                )

    # per-node split data: an index permutation and the split sign
    per_node = []
    for k in range(n_nodes):
        node = Q.nodes[k]
        entries = []
        for S in _node_shuffles(totals[k], gamma_a[k]):
            Sbar = [p for p in range(1, totals[k] + 1) if p not in S]
            perm = {}
            for i, pos in enumerate(S, start=1):
                perm[index[root(node, factor_a, i)]] = index[root(node, out_factor, pos)]
            for j, pos in enumerate(Sbar, start=1):
                perm[index[root(node, factor_b, j)]] = index[root(node, out_factor, pos)]
            inv = sum(1 for s in S for t in Sbar if s > t)
            entries.append((perm, (-1) ** inv))
        per_node.append(entries)

    total: dict = {}
    for combo in iproduct(*per_node):
        perm: dict = {}
        sign = 1
        for pm, s in combo:
            perm.update(pm)
            sign *= s
        for key, c in numerator.items():
            new = list(key)
            for src, dst in perm.items():
                e = key[src]
                if e:
                    new[src] -= e
                    new[dst] += e
            nk = tuple(new)
            s2 = total.get(nk)
            c2 = c * sign
            total[nk] = c2 if s2 is None else s2 + c2
    total = {k: c for k, c in total.items() if c}

    # divide by the full Vandermonde per node
    for k, node in enumerate(Q.nodes):
        for a, b in combinations(range(1, totals[k] + 1), 2):
            if not total:
                break
            total = _dense_div_diff(
                total,
                index[root(node, out_factor, a)],
                index[root(node, out_factor, b)],
            )

    out = MPoly.zero()
    terms = {}
    for key, c in total.items():
        mono = tuple((universe[i], e) for i, e in enumerate(key) if e)
        terms[mono] = c
    return MPoly(terms, _trusted=True)


def _dense_div_diff(p: dict, ia: int, ib: int) -> dict:
    """Exact division of a dense polynomial by (x_ia - x_ib)."""
    groups: dict = {}
    for key, c in p.items():
        e = key[ia]
        rest = key[:ia] + (0,) + key[ia + 1 :]
        bucket = groups.setdefault(e, {})
        s = bucket.get(rest)
        bucket[rest] = c if s is None else s + c
    top = max(groups)
    quotient: dict = {}
    carry: dict = {}
    for e in range(top, 0, -1):
        cur = dict(groups.get(e, {}))
        for k, c in carry.items():
            s = cur.get(k)
            cur[k] = c if s is None else s + c
        cur = {k: c for k, c in cur.items() if c}
        for k, c in cur.items():
            quotient[k[:ia] + (e - 1,) + k[ia + 1 :]] = c
        carry = {}
        for k, c in cur.items():
            k2 = k[:ib] + (k[ib] + 1,) + k[ib + 1 :]
            s = carry.get(k2)
            carry[k2] = c if s is None else s + c
    remainder = dict(groups.get(0, {}))
    for k, c in carry.items():
        s = remainder.get(k)
        remainder[k] = c if s is None else s + c
    if any(c for c in remainder.values()):
        raise NonPolynomialError("shuffle sum does not clear its denominators")
    return quotient


def shuffle_product(f: CohClass, g: CohClass) -> CohClass:
    """Product of two classes; lands on the component at the dim-vector sum."""
    if f.quiver != g.quiver:
        raise ValueError("classes live over different quivers")
    Q = f.quiver
    gamma = tuple(a + b for a, b in zip(f.gamma, g.gamma))
    # move g's roots to factor 2
    g_renamed = g.poly.rename(
        {
            root(q, 1, i): root(q, 2, i)
            for k, q in enumerate(Q.nodes)
            for i in range(1, g.gamma[k] + 1)
        }
    )
    merged = shuffle_merge(f.poly * g_renamed, Q, f.gamma, 1, g.gamma, 2, 1)
    return CohClass(Q, gamma, merged)


def coha_unit(Q: Quiver) -> "GradedClass":
    """The class 1 on the zero component; a two-sided unit for the product."""
    return GradedClass(Q, {Q.zero_dim(): CohClass.constant(Q, Q.zero_dim(), 1)})


@dataclass(frozen=True)
class GradedClass:
    """A finite sum of classes on distinct components."""

    quiver: Quiver
    components: dict

    def __post_init__(self):
        for gamma, cls in self.components.items():
            if cls.gamma != gamma:
                raise ValueError("component key does not match its class")

    def __add__(self, other: "GradedClass") -> "GradedClass":
        out = dict(self.components)
        for gamma, cls in other.components.items():
            if gamma in out:
                out[gamma] = CohClass(self.quiver, gamma, out[gamma].poly + cls.poly)
            else:
                out[gamma] = cls
        return GradedClass(self.quiver, {g: c for g, c in out.items() if c.poly})

    def __mul__(self, other: "GradedClass") -> "GradedClass":
        out: dict = {}
        for f in self.components.values():
            for g in other.components.values():
                prod = shuffle_product(f, g)
                if prod.gamma in out:
                    out[prod.gamma] = CohClass(
                        self.quiver, prod.gamma, out[prod.gamma].poly + prod.poly
                    )
                else:
                    out[prod.gamma] = prod
        return GradedClass(self.quiver, {g: c for g, c in out.items() if c.poly})

    @classmethod
    def of(cls, c: CohClass) -> "GradedClass":
        return cls(c.quiver, {c.gamma: c})

    def __eq__(self, other) -> bool:
        a = {g: c.poly for g, c in self.components.items() if c.poly}
        b = {g: c.poly for g, c in other.components.items() if c.poly}
        return a == b


@dataclass(frozen=True)
class EquivariantProduct:
    """Result of the localised product: a class with coefficients in z.

    With the kernel left unshifted the sum clears denominators exactly as
    in the plain product, so the value is a polynomial in the merged roots
    and z (never a genuine rational function), and the z -> 0
    specialisation always exists.
    """

    quiver: Quiver
    gamma: DimVector
    poly: MPoly

    def at_z_zero(self) -> CohClass:
        return CohClass(self.quiver, self.gamma, self.poly.subs({Z: 0}))


def shuffle_product_equivariant(f: CohClass, g: CohClass, shift: int = 1) -> EquivariantProduct:
    """Localised variant: the designated factor's roots are shifted by z.

    shift=1 shifts f's variables, shift=2 shifts g's, before the shuffle
    sum is taken.  Specialising z -> 0 recovers shuffle_product.
    """
    if shift not in (1, 2):
        raise ValueError("shift selects tensor factor 1 or 2")
    if f.quiver != g.quiver:
        raise ValueError("classes live over different quivers")
    Q = f.quiver
    zpoly = MPoly.var(Z)
    if shift == 1:
        fp = f.poly.subs(
            {
                root(q, 1, i): MPoly.var(root(q, 1, i)) + zpoly
                for k, q in enumerate(Q.nodes)
                for i in range(1, f.gamma[k] + 1)
            }
        )
        gp = g.poly
    else:
        fp = f.poly
        gp = g.poly.subs(
            {
                root(q, 1, i): MPoly.var(root(q, 1, i)) + zpoly
                for k, q in enumerate(Q.nodes)
                for i in range(1, g.gamma[k] + 1)
            }
        )
    g_renamed = gp.rename(
        {
            root(q, 1, i): root(q, 2, i)
            for k, q in enumerate(Q.nodes)
            for i in range(1, g.gamma[k] + 1)
        }
    )
    gamma = tuple(a + b for a, b in zip(f.gamma, g.gamma))
    merged = shuffle_merge(fp * g_renamed, Q, f.gamma, 1, g.gamma, 2, 1)
    return EquivariantProduct(Q, gamma, merged)


def assoc_check(f: CohClass, g: CohClass, h: CohClass):
    """Exact associativity test; returns (ok, witness)."""
    left = shuffle_product(shuffle_product(f, g), h)
    right = shuffle_product(f, shuffle_product(g, h))
    if left.poly == right.poly:
        return True, None
    diff = left.poly - right.poly
    return False, f"difference on component {left.gamma}: {diff}"


def product_degree_drop(Q: Quiver, gamma: DimVector, gamma2: DimVector) -> int:
    """Polynomial-degree drop of the product, the rank of the Hom complex."""
    return euler_form(Q, gamma, gamma2)
