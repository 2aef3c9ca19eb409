"""Geometric model of the rank-one lattice vertex algebra: fields on the
homology of the moduli of perfect complexes, one component per integer
rank, each with cohomology a free polynomial ring on classes c_1, c_2, ...
of the tautological complex.

The field attached to a homology class on the rank-m component acts on
the rank-n component by

    Y(a, z) b  =  sum_{k >= 0} z^{m n - k}  (direct-sum pushforward)
                  (first-factor exponential shift) (c_k of the
                  cross-pairing complex capped against a (x) b)

computed dually: the matrix entry against a cohomology monomial M is the
(a, b)-coefficient of c_k(cross complex) * shift_z(dsum^* M).  All Chern
manipulations go through the Chern character with exact Newton
conversions, which keeps every formula valid at arbitrary (including
negative or zero) virtual rank.  The cross-pairing complex is
(dual of the tautological complex) boxtimes (tautological complex),
of rank m*n.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from math import factorial

from .algebra import MPoly, Var, Z, root


def cvar(factor: int, i: int) -> Var:
    """The i-th tautological class on one tensor factor."""
    return root("c", factor, i)


def _truncate_weighted(p: MPoly, bound: int) -> MPoly:
    """Drop monomials of weighted degree above bound (slot = weight)."""
    out = {}
    for mono, c in p.terms.items():
        wdeg = sum(v.slot * e for v, e in mono if v.kind == "root")
        if wdeg <= bound:
            out[mono] = c
    return MPoly(out, _trusted=True)


def chern_to_power_sums(cs: dict, bound: int) -> dict:
    """Newton's identities: {i: c_i} -> {k: p_k}, rank-independent."""
    ps = {}
    for k in range(1, bound + 1):
        acc = MPoly.const(0)
        ck = cs.get(k, MPoly.zero())
        acc = acc + ck * ((-1) ** (k - 1)) * k
        for i in range(1, k):
            ci = cs.get(i, MPoly.zero())
            acc = acc + ci * ps[k - i] * ((-1) ** (i - 1))
        ps[k] = acc
    return ps


def power_sums_to_chern(ps: dict, bound: int) -> dict:
    """Inverse Newton: {k: p_k} -> {i: c_i}."""
    cs = {}
    for i in range(1, bound + 1):
        acc = ps.get(i, MPoly.zero()) * ((-1) ** (i - 1))
        for j in range(1, i):
            acc = acc + cs[i - j] * ps.get(j, MPoly.zero()) * ((-1) ** (j - 1))
        cs[i] = acc * Fraction(1, i)
    return cs


def _tautological_chern(factor: int, bound: int) -> dict:
    return {i: MPoly.var(cvar(factor, i)) for i in range(1, bound + 1)}


def cross_complex_chern(m: int, n: int, bound: int) -> dict:
    """Chern classes of dual(rank m) boxtimes (rank n), degrees <= bound.

    Assembled through the Chern character: ch of the box tensor is the
    product of the factors' characters, with ch_0 the virtual ranks.
    """
    cm = _tautological_chern(1, bound)
    cn = _tautological_chern(2, bound)
    pm = chern_to_power_sums(cm, bound)
    pn = chern_to_power_sums(cn, bound)
    # ch_a pieces: ch_0 = rank, ch_a = p_a / a!
    ch_m = {0: MPoly.const(m)}
    ch_n = {0: MPoly.const(n)}
    for a in range(1, bound + 1):
        ch_m[a] = pm[a] * Fraction(1, factorial(a))
        ch_n[a] = pn[a] * Fraction(1, factorial(a))
    # dual: ch_a -> (-1)^a ch_a
    ch_theta = {}
    for k in range(0, bound + 1):
        acc = MPoly.zero()
        for a in range(0, k + 1):
            acc = acc + ch_m[a] * ch_n[k - a] * ((-1) ** a)
        ch_theta[k] = acc
    p_theta = {k: ch_theta[k] * factorial(k) for k in range(1, bound + 1)}
    cs = power_sums_to_chern(p_theta, bound)
    return {i: _truncate_weighted(c, bound) for i, c in cs.items()}


def shift_ring_map(factor: int, rank: int, bound: int) -> dict:
    """Generator images of the exponential shift on one factor.

    c_i goes to the i-th Chern class of the tautological complex
    tensored with a line of first Chern class z; computed through
    ch -> e^z ch -> c, valid at any virtual rank.
    """
    cs = _tautological_chern(factor, bound)
    ps = chern_to_power_sums(cs, bound)
    ch = {0: MPoly.const(rank)}
    for a in range(1, bound + 1):
        ch[a] = ps[a] * Fraction(1, factorial(a))
    zp = MPoly.var(Z)
    shifted = {}
    for k in range(0, bound + 1):
        acc = MPoly.zero()
        for a in range(0, k + 1):
            acc = acc + ch[k - a] * (zp ** a) * Fraction(1, factorial(a))
        shifted[k] = acc
    p_shift = {k: shifted[k] * factorial(k) for k in range(1, bound + 1)}
    return power_sums_to_chern(p_shift, bound)


def dsum_ring_map(bound: int) -> dict:
    """Generator images of the direct-sum pullback: c_i to the degree-i
    part of the product of total Chern classes of the two factors."""
    out = {}
    for i in range(1, bound + 1):
        acc = MPoly.zero()
        for a in range(0, i + 1):
            left = MPoly.var(cvar(1, a)) if a else MPoly.const(1)
            right = MPoly.var(cvar(2, i - a)) if i - a else MPoly.const(1)
            acc = acc + left * right
        out[i] = acc
    return out


def monomials_up_to(bound: int):
    """Exponent tuples (a_1, ..., a_bound) with sum i*a_i <= bound."""
    out = []

    def rec(i, remaining, expo):
        if i > bound:
            out.append(tuple(expo))
            return
        for p in range(remaining // i, -1, -1):
            rec(i + 1, remaining - p * i, expo + [p])

    rec(1, bound, [])
    return out


def monomial_poly(expo: tuple, factor: int) -> MPoly:
    p = MPoly.const(1)
    for i, a in enumerate(expo, start=1):
        for _ in range(a):
            p = p * MPoly.var(cvar(factor, i))
    return p


def _apply_ring_map(p: MPoly, images_by_factor: dict, bound: int) -> MPoly:
    """Substitute generator images (per factor) into p, truncating."""
    subs = {}
    for v in p.variables():
        if v.kind == "root" and v.node == "c" and v.factor in images_by_factor:
            subs[v] = images_by_factor[v.factor].get(v.slot, MPoly.zero())
    return _truncate_weighted(p.subs(subs), bound) if subs else p


def geometric_field_perf(m: int, alpha_expo: tuple, n: int, window: tuple, bound: int):
    """Matrix of the field of a dual monomial on the rank-m component,
    acting from the rank-n to the rank-(m+n) component.

    Returns {z-power: {(output exponents, input exponents): Fraction}}
    for cohomology degrees at most ``bound``; the leading z-power over
    all entries is m*n.
    """
    lo, hi = window
    theta = cross_complex_chern(m, n, bound)
    dsum = dsum_ring_map(bound)
    shift = shift_ring_map(1, m, bound)

    in_monos = [e for e in monomials_up_to(bound)]
    out_monos = [e for e in monomials_up_to(bound)]
    alpha_wdeg = sum(i * a for i, a in enumerate(alpha_expo, start=1))

    matrices: dict = {}
    for M in out_monos:
        # pull back along the direct sum, then shift the first factor
        pulled = _apply_ring_map(monomial_poly(M, 1), {1: dsum}, bound)
        # dsum images live on factors (1, 2); now shift factor 1
        shifted = _apply_ring_map(pulled, {1: shift}, bound)
        for k in range(0, bound + 1):
            zlead = m * n - k
            ck = theta.get(k, MPoly.const(1) if k == 0 else MPoly.zero())
            if k == 0:
                ck = MPoly.const(1)
            prod = _truncate_weighted(ck * shifted, 2 * bound)
            # coefficient of z^j combines with z^(mn - k)
            for mono, coeff in prod.terms.items():
                zdeg = 0
                a_part = [0] * bound
                b_part = [0] * bound
                ok = True
                for v, e in mono:
                    if v.kind == "z":
                        zdeg = e
                    elif v.factor == 1:
                        if v.slot <= bound:
                            a_part[v.slot - 1] = e
                        else:
                            ok = False
                    else:
                        if v.slot <= bound:
                            b_part[v.slot - 1] = e
                        else:
                            ok = False
                if not ok:
                    continue
                if tuple(a_part) != tuple(alpha_expo) + (0,) * (bound - len(alpha_expo)):
                    continue
                power = zlead + zdeg
                if power < lo or power > hi:
                    continue
                key = (M, tuple(b_part))
                mat = matrices.setdefault(power, {})
                mat[key] = mat.get(key, Fraction(0)) + coeff
    return {p: {k: c for k, c in mat.items() if c} for p, mat in matrices.items() if mat}
