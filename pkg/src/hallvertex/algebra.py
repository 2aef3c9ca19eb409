"""Exact arithmetic substrate: multivariate polynomials over Q, rational
functions, and truncated Laurent series in one distinguished variable.

Everything is exact.  Coefficients are ``fractions.Fraction`` (always in
lowest terms with positive denominator), polynomials are sparse maps from
monomials to coefficients, and Laurent series are expanded at z = infinity
(descending powers of z) on an explicit window of retained powers.
Truncation is tracked, never silent: a series knows which coefficients it
guarantees, and asking for a coefficient outside that window is an error
rather than zero.

Variables come in two kinds.  Chern-root variables carry a node label, a
tensor-factor index and a slot index; there is a single equivariant
variable ``Z``.  The monomial order used for canonical forms is graded
lexicographic with the equivariant variable sorted last; it has no
semantic role.

All values are immutable after construction and every operation is pure,
so values may be shared freely across threads.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Callable, Iterable, Mapping, NamedTuple, Union

Scalar = Union[int, Fraction]


class HallVertexError(Exception):
    """Base class for all errors raised by this package."""


class ZeroWeightError(HallVertexError):
    """A factor of equivariant weight zero reached a z-expansion."""


class OutOfWindowError(HallVertexError):
    """A series coefficient outside the guaranteed window was requested."""


class PoleAtZeroError(HallVertexError):
    """Specialisation z -> 0 hit a genuine pole."""


class NonPolynomialError(HallVertexError):
    """A sum that must clear its denominators did not."""


class Var(NamedTuple):
    """A variable identifier.

    kind is "root" for Chern roots (node, factor >= 1, slot >= 1 all
    meaningful) or "z" for the unique equivariant variable.  Tuple order
    gives the variable ordering; "root" < "z" puts z last.
    """

    kind: str
    node: str = ""
    factor: int = 0
    slot: int = 0


Z = Var("z")


def root(node: str, factor: int, slot: int) -> Var:
    return Var("root", node, factor, slot)


_FACTOR_LETTER = {1: "x", 2: "y", 3: "u", 4: "v"}


def var_name(v: Var) -> str:
    if v.kind == "z":
        return "z"
    letter = _FACTOR_LETTER.get(v.factor, f"w{v.factor}f")
    if v.node:
        return f"{letter}{v.slot}_{v.node}"
    return f"{letter}{v.slot}"


# A monomial is a tuple of (Var, exponent) pairs, sorted by Var, exponents > 0.
Mono = tuple


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va < vb:
            out.append(a[i])
            i += 1
        elif vb < va:
            out.append(b[j])
            j += 1
        else:
            out.append((va, ea + eb))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_deg(m: Mono) -> int:
    return sum(e for _, e in m)


def _mono_key(m: Mono):
    # graded lex: higher degree first, then lexicographic on the exponents
    return (_mono_deg(m), tuple((v, -e) for v, e in m))


class MPoly:
    """Sparse multivariate polynomial with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Mono, Fraction] | None = None, _trusted=False):
        if terms is None:
            self.terms = {}
        elif _trusted:
            self.terms = dict(terms)
        else:
            self.terms = {m: Fraction(c) for m, c in terms.items() if c != 0}

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> "MPoly":
        return cls()

    @classmethod
    def const(cls, c: Scalar) -> "MPoly":
        c = Fraction(c)
        return cls({(): c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, v: Var) -> "MPoly":
        return cls({((v, 1),): Fraction(1)}, _trusted=True)

    @classmethod
    def linear(cls, coeffs: Mapping[Var, Scalar], const: Scalar = 0) -> "MPoly":
        terms = {((v, 1),): Fraction(c) for v, c in coeffs.items() if c != 0}
        if const:
            terms[()] = Fraction(const)
        return cls(terms, _trusted=True)

    # -- ring operations -------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return MPoly(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly({m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "MPoly":
        return (-self) + other

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return MPoly.zero()
            return MPoly({m: c * v for m, v in self.terms.items()}, _trusted=True)
        if not isinstance(other, MPoly):
            return NotImplemented
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m)
                if s is None:
                    out[m] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s:
                        out[m] = s
                    else:
                        del out[m]
        return MPoly(out, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- structure -------------------------------------------------------

    def variables(self) -> set:
        out = set()
        for m in self.terms:
            for v, _ in m:
                out.add(v)
        return out

    def degree(self) -> int:
        """Total degree; 0 for the zero polynomial."""
        if not self.terms:
            return 0
        return max(_mono_deg(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {_mono_deg(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_parts(self) -> dict:
        parts: dict = {}
        for m, c in self.terms.items():
            parts.setdefault(_mono_deg(m), {})[m] = c
        return {d: MPoly(t, _trusted=True) for d, t in sorted(parts.items())}

    def coeff_of_var_power(self, v: Var, k: int) -> "MPoly":
        """Coefficient of v**k, as a polynomial in the remaining variables."""
        out = {}
        for m, c in self.terms.items():
            e = 0
            rest = []
            for vv, ee in m:
                if vv == v:
                    e = ee
                else:
                    rest.append((vv, ee))
            if e == k:
                out[tuple(rest)] = c
        return MPoly(out, _trusted=True)

    def by_var_power(self, v: Var) -> dict:
        """Split into {exponent of v: polynomial in the other variables}."""
        out: dict = {}
        for m, c in self.terms.items():
            e = 0
            rest = []
            for vv, ee in m:
                if vv == v:
                    e = ee
                else:
                    rest.append((vv, ee))
            out.setdefault(e, {})[tuple(rest)] = c
        return {e: MPoly(t, _trusted=True) for e, t in out.items()}

    def rename(self, mapping: Mapping[Var, Var]) -> "MPoly":
        """Relabel variables; mapping must be injective on the support."""
        out = {}
        for m, c in self.terms.items():
            nm = tuple(sorted(((mapping.get(v, v), e) for v, e in m)))
            if nm in out:
                raise ValueError("variable relabeling is not injective here")
            out[nm] = c
        return MPoly(out, _trusted=True)

    def subs(self, mapping: Mapping[Var, "MPoly | Scalar"]) -> "MPoly":
        """Substitute polynomials (or scalars) for variables."""
        images = {v: (p if isinstance(p, MPoly) else MPoly.const(p)) for v, p in mapping.items()}
        powers: dict = {v: {0: MPoly.const(1)} for v in images}
        total = MPoly.zero()
        for m, c in self.terms.items():
            acc = MPoly({(): Fraction(c)}, _trusted=True)
            plain = []
            for v, e in m:
                img = images.get(v)
                if img is None:
                    plain.append((v, e))
                else:
                    cache = powers[v]
                    if e not in cache:
                        p = max(cache)
                        cur = cache[p]
                        while p < e:
                            cur = cur * img
                            p += 1
                            cache[p] = cur
                    acc = acc * cache[e]
            if plain:
                mono = tuple(sorted(plain))
                acc = acc * MPoly({mono: Fraction(1)}, _trusted=True)
            total = total + acc
        return total

    def eval(self, point: Mapping[Var, Scalar]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t *= Fraction(point[v]) ** e
            total += t
        return total

    def leading(self) -> tuple:
        """(monomial, coefficient) that is graded-lex largest."""
        if not self.terms:
            return ((), Fraction(0))
        m = max(self.terms, key=_mono_key)
        return m, self.terms[m]

    # -- division --------------------------------------------------------

    def div_exact_linear(self, form: "MPoly") -> "MPoly":
        """Exact division by a linear form; raises NonPolynomialError.

        The divisor must be linear (total degree 1).  Standard synthetic
        division in the divisor's graded-lex leading variable with
        polynomial coefficients; the remainder must vanish.
        """
        if form.degree() != 1:
            raise ValueError("divisor must be a linear form")
        lead_m, lead_c = form.leading()
        v = lead_m[0][0]
        # form = lead_c*v + rest, so v = (form - rest)/lead_c; dividing by
        # form is synthetic division by (v - r) with r = -rest/lead_c,
        # then an overall division by lead_c.
        rest = form - MPoly({lead_m: lead_c}, _trusted=True)
        r = rest * Fraction(-1, 1) * (Fraction(1) / lead_c)
        parts = self.by_var_power(v)
        if not parts:
            return MPoly.zero()
        top = max(parts)
        quot: dict = {}
        carry = MPoly.zero()
        for e in range(top, 0, -1):
            coeff = parts.get(e, MPoly.zero()) + carry
            quot[e - 1] = coeff
            carry = coeff * r
        remainder = parts.get(0, MPoly.zero()) + carry
        if remainder:
            raise NonPolynomialError("linear factor does not divide exactly")
        out = MPoly.zero()
        vb = MPoly.var(v)
        inv = Fraction(1) / lead_c
        for e, coeff in quot.items():
            out = out + coeff * (vb ** e) * inv
        return out

    # -- rendering -------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(
            self.terms.items(), key=lambda kv: (-_mono_deg(kv[0]), kv[0])
        )
        pieces = []
        for m, c in items:
            body = "*".join(
                var_name(v) + (f"^{e}" if e > 1 else "") for v, e in sorted(m)
            )
            if not body:
                frag = str(c)
            elif c == 1:
                frag = body
            elif c == -1:
                frag = "-" + body
            else:
                frag = f"{c}*{body}"
            pieces.append(frag)
        out = pieces[0]
        for frag in pieces[1:]:
            if frag.startswith("-"):
                out += " - " + frag[1:]
            else:
                out += " + " + frag
        return out

    def __repr__(self) -> str:
        return f"MPoly({self})"


ONE = MPoly.const(1)


def symmetrize(p: MPoly, blocks: Iterable[Iterable[Var]]) -> MPoly:
    """Sum of p over the full product of symmetric groups of the blocks."""
    block_lists = [list(b) for b in blocks]
    total = MPoly.zero()
    perm_sets = [list(permutations(b)) for b in block_lists]

    def recurse(i: int, mapping: dict):
        nonlocal total
        if i == len(block_lists):
            total = total + p.rename(mapping)
            return
        for perm in perm_sets[i]:
            m2 = dict(mapping)
            m2.update(zip(block_lists[i], perm))
            recurse(i + 1, m2)

    recurse(0, {})
    return total


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


class RatFn:
    """Quotient of two polynomials; reduction is lazy.

    Sums of localisation terms cancel massively, so no gcd is attempted
    during arithmetic; equality is checked by cross-multiplication, and
    clearing of known linear denominators is done explicitly by callers.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly | None = None):
        if den is None:
            den = ONE
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @classmethod
    def of(cls, x) -> "RatFn":
        if isinstance(x, RatFn):
            return x
        if isinstance(x, MPoly):
            return cls(x)
        return cls(MPoly.const(x))

    def __add__(self, other) -> "RatFn":
        o = RatFn.of(other)
        if self.den == o.den:
            return RatFn(self.num + o.num, self.den)
        return RatFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFn":
        return RatFn(-self.num, self.den)

    def __sub__(self, other) -> "RatFn":
        return self + (-RatFn.of(other))

    def __rsub__(self, other) -> "RatFn":
        return RatFn.of(other) + (-self)

    def __mul__(self, other) -> "RatFn":
        o = RatFn.of(other)
        return RatFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFn":
        o = RatFn.of(other)
        if not o.num:
            raise ZeroDivisionError("division by zero rational function")
        return RatFn(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "RatFn":
        return RatFn.of(other) / self

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, MPoly)):
            other = RatFn.of(other)
        if not isinstance(other, RatFn):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RatFn is unhashable (lazy canonical form)")

    def subs(self, mapping) -> "RatFn":
        den = self.den.subs(mapping)
        if not den:
            raise ZeroDivisionError("substitution annihilates the denominator")
        return RatFn(self.num.subs(mapping), den)

    def at_z_zero(self) -> MPoly:
        """Specialise z -> 0; the result must be polynomial."""
        den0 = self.den.subs({Z: 0})
        if not den0:
            raise PoleAtZeroError("denominator vanishes at z = 0")
        num0 = self.num.subs({Z: 0})
        # den0 must divide num0 exactly; peel constant or linear content.
        if den0.degree() == 0:
            (_, c) = den0.leading()
            return num0 * (Fraction(1) / c)
        q = num0
        # Generic case: repeated exact division by den0's linear factors is
        # not available without a factorisation, so require den0 constant
        # after normalising by content shared with num0.  Callers in this
        # package only hit the constant case.
        raise PoleAtZeroError("nonconstant denominator at z = 0")

    def canonical(self) -> "RatFn":
        """Fix the sign so the den's graded-lex leading coefficient is positive."""
        _, c = self.den.leading()
        if c < 0:
            return RatFn(-self.num, -self.den)
        return self

    def __str__(self) -> str:
        s = self.canonical()
        if s.den == ONE:
            return str(s.num)
        return f"({s.num})/({s.den})"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Truncated Laurent series in z, expanded at infinity
# ---------------------------------------------------------------------------


class ZSeries:
    """Laurent series in the equivariant variable, truncated below.

    Coefficients are z-free MPoly values on the integer window
    [lo, hi]; powers above hi are exactly zero, powers below lo are
    unknown when ``tail`` is set and exactly zero otherwise.  Arithmetic
    tracks the guaranteed-exact window.
    """

    __slots__ = ("lo", "hi", "coeffs", "tail")

    def __init__(self, lo: int, hi: int, coeffs: Mapping[int, MPoly], tail: bool):
        if lo > hi:
            raise ValueError("empty window")
        self.lo = lo
        self.hi = hi
        self.coeffs = {m: p for m, p in coeffs.items() if lo <= m <= hi and p}
        self.tail = tail

    @property
    def window(self) -> tuple:
        return (self.lo, self.hi)

    @classmethod
    def from_poly(cls, p: MPoly) -> "ZSeries":
        """Exact series of a polynomial (in the remaining variables and z)."""
        parts = p.by_var_power(Z)
        if not parts:
            return cls(0, 0, {}, tail=False)
        lo, hi = min(parts), max(parts)
        return cls(lo, hi, parts, tail=False)

    @classmethod
    def constant(cls, p: MPoly | Scalar) -> "ZSeries":
        p = p if isinstance(p, MPoly) else MPoly.const(p)
        return cls(0, 0, {0: p}, tail=False)

    def coeff(self, m: int) -> MPoly:
        if m < self.lo or m > self.hi:
            raise OutOfWindowError(f"power {m} outside window [{self.lo}, {self.hi}]")
        return self.coeffs.get(m, MPoly.zero())

    def restrict(self, lo: int, hi: int) -> "ZSeries":
        if lo < self.lo and self.tail:
            raise OutOfWindowError("cannot widen a truncated window")
        tail = self.tail
        if lo > self.lo and not tail:
            # stays exact when nothing nonzero is dropped below
            tail = any(m < lo and p for m, p in self.coeffs.items())
        return ZSeries(lo, hi, {m: p for m, p in self.coeffs.items() if lo <= m <= hi}, tail)

    def __add__(self, other) -> "ZSeries":
        if isinstance(other, (int, Fraction, MPoly)):
            other = ZSeries.constant(other)
        hi = max(self.hi, other.hi)
        if self.tail and other.tail:
            lo = max(self.lo, other.lo)
        elif self.tail:
            lo = self.lo
        elif other.tail:
            lo = other.lo
        else:
            lo = min(self.lo, other.lo)
        out: dict = {}
        for m in range(lo, hi + 1):
            c = MPoly.zero()
            if self.lo <= m <= self.hi:
                c = c + self.coeffs.get(m, MPoly.zero())
            elif not self.tail and m < self.lo:
                pass
            if other.lo <= m <= other.hi:
                c = c + other.coeffs.get(m, MPoly.zero())
            if c:
                out[m] = c
        return ZSeries(lo, hi, out, self.tail or other.tail)

    def __neg__(self) -> "ZSeries":
        return ZSeries(self.lo, self.hi, {m: -p for m, p in self.coeffs.items()}, self.tail)

    def __sub__(self, other) -> "ZSeries":
        if isinstance(other, (int, Fraction, MPoly)):
            other = ZSeries.constant(other)
        return self + (-other)

    def __mul__(self, other) -> "ZSeries":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return ZSeries(self.lo, self.hi, {m: p * c for m, p in self.coeffs.items()}, self.tail)
        if isinstance(other, MPoly):
            if Z in other.variables():
                other = ZSeries.from_poly(other)
            else:
                return ZSeries(
                    self.lo, self.hi, {m: p * other for m, p in self.coeffs.items()}, self.tail
                )
        hi = self.hi + other.hi
        los = []
        if self.tail:
            los.append(self.lo + other.hi)
        if other.tail:
            los.append(other.lo + self.hi)
        if not los:
            lo = self.lo + other.lo
            tail = False
        else:
            lo = max(los)
            tail = True
        out: dict = {}
        for i, p in self.coeffs.items():
            for j, q in other.coeffs.items():
                m = i + j
                if lo <= m <= hi:
                    s = out.get(m)
                    pq = p * q
                    out[m] = pq if s is None else s + pq
        return ZSeries(lo, hi, out, tail)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        """Exact equality on the intersection of guaranteed windows."""
        if isinstance(other, (int, Fraction, MPoly)):
            other = ZSeries.constant(other)
        lo = max(self.lo, other.lo) if (self.tail or other.tail) else min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        for m in range(lo, hi + 1):
            a = self.coeffs.get(m, MPoly.zero()) if self.lo <= m <= self.hi else MPoly.zero()
            if m < self.lo and self.tail:
                continue
            b = other.coeffs.get(m, MPoly.zero()) if other.lo <= m <= other.hi else MPoly.zero()
            if m < other.lo and other.tail:
                continue
            if a != b:
                return False
        return True

    def __hash__(self):
        raise TypeError("ZSeries is unhashable")

    def nonzero_powers(self):
        return sorted(self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return f"0 (window [{self.lo},{self.hi}])"
        frags = []
        for m in sorted(self.coeffs, reverse=True):
            p = self.coeffs[m]
            if m == 0:
                frags.append(f"({p})")
            else:
                frags.append(f"({p})*z^{m}" if m != 1 else f"({p})*z")
        body = " + ".join(frags)
        return body + (f" + O(z^{self.lo - 1})" if self.tail else "")

    __repr__ = __str__


def coeff_at(s: ZSeries, m: int) -> MPoly:
    """Exact coefficient of z^m; out-of-window requests are errors."""
    return s.coeff(m)


def _inv_linear_series(form: MPoly, weight: int, depth: int) -> ZSeries:
    """Expansion of 1/(form + weight*z) at z = infinity, ``depth`` terms.

    Powers run from -1 down to -depth; the tail below is truncated.
    """
    if weight == 0:
        raise ZeroWeightError("factor of equivariant weight zero")
    w = Fraction(weight)
    coeffs: dict = {}
    # 1/(l + w z) = (w z)^'-1' * sum_k (-l/(w z))^k
    power = MPoly.const(1)
    for k in range(depth):
        coeffs[-k - 1] = power * (Fraction(-1) ** k / w ** (k + 1))
        power = power * form
    return ZSeries(-depth, -1, coeffs, tail=True)


def series_expand(f: RatFn, window: tuple) -> ZSeries:
    """Laurent expansion of a rational function at z = infinity.

    The denominator, viewed as a polynomial in z, must have a nonzero
    rational constant as its leading z-coefficient (true for products of
    factors ``linear form + w*z`` with w != 0).  A nonconstant leading
    coefficient signals a weight-zero factor and is an error.
    """
    lo, hi = window
    den_parts = f.den.by_var_power(Z)
    J = max(den_parts)
    lead = den_parts[J]
    if lead.degree() != 0:
        raise ZeroWeightError("denominator leading z-coefficient is not a scalar")
    (_, lead_c) = lead.leading()

    num_parts = f.num.by_var_power(Z)
    if not num_parts:
        return ZSeries(lo, hi, {}, tail=False)
    n_hi = max(num_parts)

    # 1/den = z^-J / lead * 1/(1 + u),  u = sum_{j<J} (d_j/lead) z^(j-J)
    need_lo = lo - n_hi
    depth = (hi - need_lo + 1) + J + 1
    inv_lead = Fraction(1) / lead_c
    u: dict = {}
    for j, p in den_parts.items():
        if j != J:
            u[j - J] = p * inv_lead
    # geometric series sum (-u)^k, truncated
    acc = {0: MPoly.const(1)}
    result = {0: MPoly.const(1)}
    min_exp = need_lo - (-J) - 1  # expansion exponents needed before the z^-J shift
    if u:
        k = 0
        while acc and k < depth:
            k += 1
            nxt: dict = {}
            for e, p in acc.items():
                for j, q in u.items():
                    m = e + j
                    if m < min_exp:
                        continue
                    s = nxt.get(m)
                    pq = p * (-q)
                    nxt[m] = pq if s is None else s + pq
            acc = {m: p for m, p in nxt.items() if p}
            for m, p in acc.items():
                s = result.get(m)
                result[m] = p if s is None else s + p
    inv_den = ZSeries(
        min_exp - J,
        -J,
        {m - J: p * inv_lead for m, p in result.items()},
        tail=bool(u),
    )
    num_series = ZSeries(min(num_parts), n_hi, num_parts, tail=False)
    return (num_series * inv_den).restrict(lo, hi)


def multiply_back_check(f: RatFn, s: ZSeries) -> bool:
    """Verify den*series == num on all powers >= s.lo + deg_z(den)."""
    den_s = ZSeries.from_poly(f.den)
    prod = den_s * s
    num_s = ZSeries.from_poly(f.num).restrict(prod.lo, max(prod.hi, 0))
    return prod == num_s


# ---------------------------------------------------------------------------
# Bivariate truncated series (z and a second expansion variable w)
# ---------------------------------------------------------------------------


class ZWSeries:
    """Truncated series in two expansion variables with MPoly coefficients.

    Used for Yang-Baxter checks: products of operators expanded in
    descending z, then descending w, with (z+w)-arguments expanded as
    power series in w/z.  Windows and tails are tracked per axis.
    """

    __slots__ = ("zlo", "zhi", "wlo", "whi", "coeffs", "ztail", "wtail")

    def __init__(self, zwin, wwin, coeffs, ztail, wtail):
        self.zlo, self.zhi = zwin
        self.wlo, self.whi = wwin
        self.coeffs = {
            k: p
            for k, p in coeffs.items()
            if self.zlo <= k[0] <= self.zhi and self.wlo <= k[1] <= self.whi and p
        }
        self.ztail = ztail
        self.wtail = wtail

    @classmethod
    def constant(cls, p: MPoly | Scalar) -> "ZWSeries":
        p = p if isinstance(p, MPoly) else MPoly.const(p)
        return cls((0, 0), (0, 0), {(0, 0): p}, False, False)

    @classmethod
    def from_zseries(cls, s: ZSeries) -> "ZWSeries":
        return cls((s.lo, s.hi), (0, 0), {(m, 0): p for m, p in s.coeffs.items()}, s.tail, False)

    @classmethod
    def from_wseries(cls, s: ZSeries) -> "ZWSeries":
        return cls((0, 0), (s.lo, s.hi), {(0, m): p for m, p in s.coeffs.items()}, False, s.tail)

    def __mul__(self, other) -> "ZWSeries":
        zhi = self.zhi + other.zhi
        whi = self.whi + other.whi
        zlos, wlos = [], []
        if self.ztail:
            zlos.append(self.zlo + other.zhi)
        if other.ztail:
            zlos.append(other.zlo + self.zhi)
        if self.wtail:
            wlos.append(self.wlo + other.whi)
        if other.wtail:
            wlos.append(other.wlo + self.whi)
        zlo = max(zlos) if zlos else self.zlo + other.zlo
        wlo = max(wlos) if wlos else self.wlo + other.wlo
        out: dict = {}
        for (a, b), p in self.coeffs.items():
            for (c, d), q in other.coeffs.items():
                k = (a + c, b + d)
                if zlo <= k[0] <= zhi and wlo <= k[1] <= whi:
                    s = out.get(k)
                    pq = p * q
                    out[k] = pq if s is None else s + pq
        return ZWSeries((zlo, zhi), (wlo, whi), out, bool(zlos), bool(wlos))

    def __eq__(self, other) -> bool:
        zlo = max(self.zlo, other.zlo)
        zhi = min(self.zhi, other.zhi)
        wlo = max(self.wlo, other.wlo)
        whi = min(self.whi, other.whi)
        for a in range(zlo, zhi + 1):
            for b in range(wlo, whi + 1):
                if self.coeffs.get((a, b), MPoly.zero()) != other.coeffs.get((a, b), MPoly.zero()):
                    return False
        return True

    def __hash__(self):
        raise TypeError("ZWSeries is unhashable")

    def common_window(self, other) -> tuple:
        return (
            (max(self.zlo, other.zlo), min(self.zhi, other.zhi)),
            (max(self.wlo, other.wlo), min(self.whi, other.whi)),
        )


def inv_linear_zw(form: MPoly, cz: int, cw: int, depth: int) -> ZWSeries:
    """1/(form + cz*z + cw*w) expanded in descending z when cz != 0.

    With cz != 0 the small quantity is (form + cw*w)/(cz*z); the result is
    exact in w on each z-level (powers of w run upward from 0).  With
    cz == 0 this is a plain descending-w expansion.
    """
    if cz == 0:
        if cw == 0:
            raise ZeroWeightError("factor with no expansion-variable content")
        return ZWSeries.from_wseries(_inv_linear_series(form, cw, depth))
    small = form + MPoly.const(0)  # form + cw*w handled coefficient-wise below
    c = Fraction(cz)
    coeffs: dict = {}
    # (form + cw w)^k expanded; w-power <= k.
    # term k contributes to z-power -k-1.
    powers = [MPoly.const(1)]  # (form)^j pieces built with binomial in w
    # expand (form + cw*w)^k = sum_j C(k,j) form^(k-j) (cw w)^j
    form_pows = [MPoly.const(1)]
    for _ in range(depth):
        form_pows.append(form_pows[-1] * form)
    from math import comb

    for k in range(depth):
        for j in range(k + 1):
            coeff = MPoly.const(comb(k, j)) * form_pows[k - j]
            coeff = coeff * (Fraction(-1) ** k / c ** (k + 1)) * (Fraction(cw) ** j)
            key = (-k - 1, j)
            s = coeffs.get(key)
            coeffs[key] = coeff if s is None else s + coeff
    return ZWSeries((-depth, -1), (0, depth - 1), coeffs, True, False)
