"""Truncated Laurent series in the completion of F_q(t) at a place.

The completion at a place v with residue field k is k((pi)) in equal
characteristic, so arithmetic is coefficient-wise on k-vectors once elements
of K are expanded along a multiplicative coefficient section.  ``PlaceData``
computes both directions of that identification:

* expansion: the variable t maps to the Hensel solution T of h(T) = pi with
  T congruent to tbar, and a rational function expands as a(T);
* evaluation: pi maps back to h(t) and a residue-field coefficient maps to
  its Teichmueller representative, the unique root of h in the completion
  fixed by x -> x^{|k|}.

Precision is absolute: a series knows its coefficients for pi^e, e < prec,
and nothing beyond.  Operations track precision; consumers that run out
raise ``PrecisionError`` and retry with a larger budget.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .finitefield import FFElem, FieldError, FiniteField, ExtField
from .poly import Poly, powmod
from .ratfunc import FunctionField, Place, RatFunc, ord_at


class PrecisionError(ArithmeticError):
    pass


def embed_elem(a: FFElem, k: FiniteField) -> FFElem:
    """Embed a down-tower element into k."""
    if a.field == k:
        return a
    if isinstance(k, ExtField):
        return k.embed(a)
    raise FieldError("element does not embed into the target field")


class LSeries:
    """Laurent series sum c_i pi^(i/ram) over a coefficient field k.

    ``shift`` indexes the first stored coefficient; exponents live on the
    1/ram grid (ram = 1 except for explicitly ramified data).  ``prec`` is
    the absolute precision on the same grid.
    """

    __slots__ = ("k", "shift", "coeffs", "prec", "ram")

    def __init__(self, k: FiniteField, shift: int, coeffs, prec: int, ram: int = 1):
        cs = [k.elem(c) for c in coeffs]
        cs = cs[: max(0, prec - shift)]
        while cs and not cs[0]:
            cs.pop(0)
            shift += 1
        while cs and not cs[-1]:
            cs.pop()
        if not cs:
            shift = prec
        self.k = k
        self.shift = shift
        self.coeffs = tuple(cs)
        self.prec = prec
        self.ram = ram

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(k: FiniteField, prec: int, ram: int = 1) -> "LSeries":
        return LSeries(k, prec, [], prec, ram)

    @staticmethod
    def const(k: FiniteField, c, prec: int, ram: int = 1) -> "LSeries":
        return LSeries(k, 0, [k.elem(c)], prec, ram)

    @staticmethod
    def pi_power(k: FiniteField, e: int, prec: int, ram: int = 1) -> "LSeries":
        return LSeries(k, e, [k.one], prec, ram)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        """Zero to the stated precision."""
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def ord(self) -> int:
        if not self.coeffs:
            raise PrecisionError(f"series is zero to precision {self.prec}")
        return self.shift

    def ord_frac(self) -> Fraction:
        return Fraction(self.ord, self.ram)

    def coeff(self, e: int) -> FFElem:
        if e >= self.prec:
            raise PrecisionError("coefficient beyond known precision")
        i = e - self.shift
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.k.zero

    def residue(self) -> FFElem:
        """Leading coefficient of a unit (ord 0) series."""
        if self.is_zero() or self.shift != 0:
            raise ValueError("residue of a non-unit series")
        return self.coeffs[0]

    def truncate(self, prec: int) -> "LSeries":
        if prec >= self.prec:
            if prec == self.prec:
                return self
            raise PrecisionError("cannot increase precision by truncation")
        return LSeries(self.k, self.shift, self.coeffs, prec, self.ram)

    def lift_prec(self, prec: int) -> "LSeries":
        """Reinterpret as a guess at higher precision (Newton padding)."""
        return LSeries(self.k, self.shift, self.coeffs, max(prec, self.prec), self.ram)

    def shifted(self, e: int) -> "LSeries":
        """Multiply by pi^(e/ram)."""
        return LSeries(self.k, self.shift + e, self.coeffs, self.prec + e, self.ram)

    def with_ram(self, ram: int) -> "LSeries":
        if ram % self.ram:
            raise ValueError("ramification grids are incompatible")
        f = ram // self.ram
        if f == 1:
            return self
        cs = []
        for c in self.coeffs:
            cs.append(c)
            cs.extend([self.k.zero] * (f - 1))
        if cs:
            del cs[-(f - 1):]
        return LSeries(self.k, self.shift * f, cs, self.prec * f, ram)

    def _align(self, other: "LSeries") -> tuple["LSeries", "LSeries"]:
        if self.k != other.k:
            raise FieldError("series over different residue fields")
        if self.ram == other.ram:
            return self, other
        r = math.lcm(self.ram, other.ram)
        return self.with_ram(r), other.with_ram(r)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LSeries):
            return other
        if isinstance(other, (int, FFElem)):
            return LSeries.const(self.k, self.k.elem(other), self.prec - min(0, self.shift), self.ram)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self._align(o)
        prec = min(a.prec, b.prec)
        lo = min(a.shift, b.shift, prec)
        out = [a.k.zero] * (prec - lo)
        for i, c in enumerate(a.coeffs):
            e = a.shift + i
            if e < prec:
                out[e - lo] = out[e - lo] + c
        for i, c in enumerate(b.coeffs):
            e = b.shift + i
            if e < prec:
                out[e - lo] = out[e - lo] + c
        return LSeries(a.k, lo, out, prec, a.ram)

    __radd__ = __add__

    def __neg__(self):
        return LSeries(self.k, self.shift, [-c for c in self.coeffs], self.prec, self.ram)

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self._align(o)
        sa = a.shift if a.coeffs else a.prec
        sb = b.shift if b.coeffs else b.prec
        prec = min(a.prec + sb, b.prec + sa)
        if a.is_zero() or b.is_zero():
            return LSeries.zero(a.k, prec, a.ram)
        lo = sa + sb
        n = prec - lo
        k = a.k
        if k.degree == 1:
            # prime-field fast path on raw integers with deferred reduction
            p = k.p
            av = [c.val for c in a.coeffs]
            bv = [c.val for c in b.coeffs]
            raw = [0] * n
            for i, c in enumerate(av):
                if c:
                    for j, d in enumerate(bv):
                        if d and i + j < n:
                            raw[i + j] += c * d
            out = [FFElem(k, x % p) for x in raw]
            return LSeries(k, lo, out, prec, a.ram)
        out = [k.zero] * n
        for i, c in enumerate(a.coeffs):
            if not c:
                continue
            for j, d in enumerate(b.coeffs):
                if i + j < n and d:
                    out[i + j] = out[i + j] + c * d
        return LSeries(k, lo, out, prec, a.ram)

    __rmul__ = __mul__

    def inverse(self) -> "LSeries":
        if self.is_zero():
            raise ZeroDivisionError("inverse of a series that is zero to precision")
        n = self.prec - self.shift
        u = self.coeffs
        k = self.k
        if k.degree == 1:
            p = k.p
            uv = [c.val for c in u]
            inv0 = pow(uv[0], -1, p)
            raw = [inv0]
            for m in range(1, n):
                acc = 0
                for i in range(1, min(m, len(uv) - 1) + 1):
                    acc += uv[i] * raw[m - i]
                raw.append((-inv0 * acc) % p)
            out = [FFElem(k, x) for x in raw]
            return LSeries(k, -self.shift, out, self.prec - 2 * self.shift, self.ram)
        inv0 = u[0].inverse()
        out = [inv0]
        for m in range(1, n):
            acc = self.k.zero
            for i in range(1, min(m, len(u) - 1) + 1):
                acc = acc + u[i] * out[m - i]
            out.append(-inv0 * acc)
        return LSeries(self.k, -self.shift, out, self.prec - 2 * self.shift, self.ram)

    def __truediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return LSeries.const(self.k, self.k.one, self.prec - self.shift, self.ram)
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def eq_to_prec(self, other) -> bool:
        return (self - other).is_zero()

    # -- roots ----------------------------------------------------------------

    def sqrt(self) -> "LSeries":
        """Hensel square root; requires even valuation and a square leading
        coefficient.  Root choice is the deterministic residue-field root."""
        if self.is_zero():
            raise PrecisionError("sqrt of a series that is zero to precision")
        if self.shift % 2:
            raise ValueError("sqrt of a series of odd valuation")
        unit = self.shifted(-self.shift)
        r0 = unit.k.sqrt(unit.residue())
        if r0 is None:
            raise ValueError("leading coefficient is not a square in the residue field")
        half = unit.k.elem(2).inverse()
        x = LSeries.const(unit.k, r0, 1)
        while x.prec < unit.prec:
            x = x.lift_prec(min(2 * x.prec, unit.prec))
            x = (x + unit.truncate(x.prec) / x) * half
        return x.shifted(self.shift // 2)

    def nth_root(self, n: int) -> "LSeries":
        """Hensel n-th root for n prime to the characteristic."""
        if n % self.k.p == 0:
            raise ValueError("n must be prime to the characteristic")
        if self.is_zero():
            raise PrecisionError("root of a series that is zero to precision")
        if self.shift % n:
            raise ValueError("valuation not divisible by n")
        unit = self.shifted(-self.shift)
        k = unit.k
        lead = unit.residue()
        e = k.order - 1
        g = math.gcd(n, e)
        if g == 1:
            c0 = lead ** pow(n, -1, e)
        else:
            if lead ** (e // g) != k.one:
                raise ValueError("leading coefficient has no n-th root in the residue field")
            c0 = next(c for c in k.elements() if c and c**n == lead)
        ninv = k.elem(n).inverse()
        x = LSeries.const(k, c0, 1)
        while x.prec < unit.prec:
            x = x.lift_prec(min(2 * x.prec, unit.prec))
            xn1 = x ** (n - 1)
            x = x - (xn1 * x - unit.truncate(x.prec)) * ninv / xn1
        return x.shifted(self.shift // n)

    def map_coeffs(self, fn, k2: FiniteField) -> "LSeries":
        return LSeries(k2, self.shift, [fn(c) for c in self.coeffs], self.prec, self.ram)

    def __repr__(self):
        if not self.coeffs:
            return f"O(pi^{Fraction(self.prec, self.ram)})"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"({c!r})*pi^{Fraction(self.shift + i, self.ram)}")
        parts.append(f"O(pi^{Fraction(self.prec, self.ram)})")
        return " + ".join(parts)


def series_horner(coeffs: list, x: LSeries) -> LSeries:
    """Evaluate a polynomial with coefficients in x's residue field at x.

    Coefficients may be field elements or LSeries; precision follows from
    the series arithmetic itself."""
    neg = max(0, -(x.shift if x.coeffs else 0))
    pad = x.prec + len(coeffs) * neg + 1
    acc = None
    for c in reversed(coeffs):
        cs = c if isinstance(c, LSeries) else LSeries.const(x.k, c, pad)
        acc = cs if acc is None else acc * x + cs
    return acc if acc is not None else LSeries.zero(x.k, x.prec)


class PSeries:
    """Power series over a finite field with an exact coefficient list
    (universal q-expansions reduced mod p)."""

    __slots__ = ("k", "coeffs")

    def __init__(self, k: FiniteField, coeffs):
        self.k = k
        self.coeffs = tuple(k.elem(c) for c in coeffs)

    def __len__(self):
        return len(self.coeffs)

    def derivative(self) -> "PSeries":
        return PSeries(self.k, [i * c for i, c in enumerate(self.coeffs)][1:])

    def eval_at(self, s: LSeries) -> LSeries:
        """Evaluate at a series of positive valuation."""
        if not self.coeffs:
            return LSeries.zero(s.k, s.prec + 1)
        if s.coeffs and s.ord <= 0:
            raise ValueError("series argument must have positive valuation")
        return series_horner([embed_elem(c, s.k) for c in self.coeffs], s)


class PlaceData:
    """Expansion/evaluation data for one place at a fixed precision budget."""

    __slots__ = ("place", "prec", "k", "K", "tvar", "teich")

    def __init__(self, place: Place, prec: int):
        self.place = place
        self.prec = prec
        self.K = place.K
        self.k = place.residue_field()
        self.tvar = None
        self.teich = None
        if place.is_infinite or place.degree == 1:
            return
        # t-image: Hensel solution of h(T) = pi near tbar
        k, h = self.k, place.poly
        hk = [k.embed(c) for c in h.coeffs]
        dk = [i * c for i, c in enumerate(hk)][1:]
        T = LSeries.const(k, k.gen, 1)
        pi = LSeries.pi_power(k, 1, prec + 1)
        while T.prec < prec:
            T = T.lift_prec(min(2 * T.prec, prec))
            T = T - (series_horner(hk, T) - pi.truncate(T.prec + 1)) / series_horner(dk, T)
        self.tvar = T
        # Teichmueller representative of tbar: iterate Frobenius x -> x^|k|
        hp = h ** prec
        x = Poly.x(h.ring)
        steps = 1
        while k.order**steps < prec * h.degree + 1:
            steps += 1
        for _ in range(steps):
            x = powmod(x, k.order, hp)
        self.teich = x

    # -- expansion ----------------------------------------------------------

    def _t_image(self, rel_prec: int, pole_pad: int) -> LSeries:
        v = self.place
        if v.is_infinite:
            return LSeries.pi_power(self.k, -1, rel_prec + pole_pad + 1)
        if v.degree == 1:
            return LSeries(self.k, 0, [-v.poly[0], self.k.one], rel_prec + pole_pad + 1)
        if rel_prec > self.tvar.prec:
            raise PrecisionError("place data built with a smaller budget")
        return self.tvar.truncate(rel_prec) if rel_prec < self.tvar.prec else self.tvar

    def expand(self, a: RatFunc, prec: int | None = None) -> LSeries:
        """The Laurent expansion of a at this place, to absolute precision."""
        prec = self.prec if prec is None else prec
        if a.is_zero():
            return LSeries.zero(self.k, prec)
        v = self.place
        n = ord_at(a, v)
        if v.is_infinite:
            a_unit = a * self.K.t**n
            pole_pad = 2 * max(a_unit.num.degree, a_unit.den.degree, 0)
        else:
            hK = RatFunc(self.K, v.poly, Poly.one(self.K.constfield))
            a_unit = a / hK**n
            pole_pad = 0
        T = self._t_image(max(1, prec - n), pole_pad)
        num = series_horner([self.k.embed(c) for c in a_unit.num.coeffs], T)
        den = series_horner([self.k.embed(c) for c in a_unit.den.coeffs], T)
        res = (num / den).shifted(n)
        if res.prec < prec:
            raise PrecisionError("expansion lost precision; enlarge the budget")
        return res.truncate(prec) if res.prec > prec else res

    # -- evaluation (series -> field element mod pi^prec) --------------------

    def lift_coeff(self, c: FFElem, powers_needed: int) -> Poly:
        """Multiplicative lift of a residue-field element to F[t]."""
        v = self.place
        if self.k == self.K.constfield:
            return Poly.constant(self.K.constfield, c)
        # c = sum val_j * tbar^j; the Teichmueller image of tbar respects h
        acc = Poly.zero(self.K.constfield)
        hp = v.poly**self.prec
        for j in reversed(range(len(c.val))):
            acc = (acc * self.teich + Poly.constant(self.K.constfield, c.val[j])) % hp
        return acc

    def evaluate(self, s: LSeries) -> RatFunc:
        """A representative in K of the truncated series: the result's
        expansion at this place agrees with s to s.prec."""
        if s.ram != 1:
            raise ValueError("cannot evaluate ramified series in K")
        K, v = self.K, self.place
        if v.is_infinite:
            pi = K.one / K.t
        else:
            pi = RatFunc(K, v.poly, Poly.one(K.constfield))
        out = K.zero
        for i, c in enumerate(s.coeffs):
            if not c:
                continue
            out = out + K.elem(self.lift_coeff(c, 0)) * pi ** (s.shift + i)
        return out


# ---------------------------------------------------------------------------
# spec-facing helpers


def laurent_expand(a: RatFunc, v: Place, prec: int) -> LSeries:
    """Expansion of a at v to absolute precision ``prec``."""
    if a.is_zero():
        raise ValueError("cannot expand the zero function")
    n = ord_at(a, v)
    if prec <= n:
        raise ValueError("precision must exceed ord_v(a)")
    return PlaceData(v, prec - min(n, 0) + 1).expand(a, prec)


def evaluate_series(s: LSeries, v: Place) -> RatFunc:
    return PlaceData(v, s.prec + 1).evaluate(s)


def hensel_root(coeffs: list[LSeries], x0: FFElem, prec: int) -> LSeries:
    """Lift a simple residue root x0 of the polynomial with the given series
    coefficients (all of nonnegative valuation) to the requested precision."""
    k = coeffs[0].k
    der = [i * c for i, c in enumerate(coeffs)][1:]
    x = LSeries.const(k, x0, 1)
    d0 = series_horner(der, x)
    if d0.is_zero() or d0.ord != 0:
        raise ValueError("residue root is not simple")
    while x.prec < prec:
        x = x.lift_prec(min(2 * x.prec, prec))
        val = series_horner([_clamp(c, x.prec) for c in coeffs], x)
        dval = series_horner([_clamp(c, x.prec) for c in der], x)
        x = x - val / dval
    return x


def _clamp(c: LSeries, prec: int) -> LSeries:
    return c.truncate(prec) if c.prec > prec else c


def rational_reconstruct(s: LSeries, v: Place, deg_bound: int) -> RatFunc | None:
    """Recognize a series at a finite place as a rational function with
    numerator/denominator degree <= deg_bound.  Returns None on failure;
    callers verify candidates independently."""
    if v.is_infinite:
        raise ValueError("reconstruction is implemented at finite places")
    K = v.K
    F = K.constfield
    shift = min(0, s.shift if s.coeffs else 0)
    data = PlaceData(v, s.prec - shift + 1)
    poly_mod = data.evaluate(s.shifted(-shift))
    if not poly_mod.is_polynomial():
        return None
    U = poly_mod.as_poly()
    n_pi = s.prec - shift
    modulus = v.poly**n_pi
    if U.degree >= modulus.degree:
        U = U % modulus
    r0, r1 = modulus, U
    t0, t1 = Poly.zero(F), Poly.one(F)
    while not r1.is_zero() and r1.degree > deg_bound:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, t0 - q * t1
    if r1.is_zero() or t1.is_zero() or t1.degree > deg_bound:
        return None
    hK = RatFunc(K, v.poly, Poly.one(F))
    return RatFunc(K, r1, t1) * hK**shift
