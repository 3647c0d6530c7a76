"""The rational function field K = F_q(t), its places and valuations.

Normalization: for a place v given by a monic irreducible polynomial h (or
the place at infinity), ``v(a) = deg(v) * ord_v(a)`` and ``log|a|_v = -v(a)``
as an exact rational.  With this convention the product formula
``sum_v v(a) = 0`` holds with integer terms, and every logarithmic quantity
downstream (heights, discrepancies) is an exact rational.

Constant-field extensions F_{q^m}(t) are separate ``FunctionField`` objects;
``constant_extend`` builds them together with the place-splitting data, and
extension places remember the degree of the base place below them so that
local quantities stay normalized with respect to the base field.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .finitefield import ExtField, FFElem, FieldError, FiniteField, PrimeField
from .poly import Poly, factor, find_irreducible, gcd, is_irreducible


class FunctionField:
    """F(t) for a finite constant field F; also serves as the coefficient
    ring object for polynomials with RatFunc coefficients."""

    __slots__ = ("constfield", "var", "zero", "one", "_t", "_hash")

    def __init__(self, constfield: FiniteField, var: str = "t"):
        self.constfield = constfield
        self.var = var
        self.zero = RatFunc(self, Poly.zero(constfield), Poly.one(constfield), _reduced=True)
        self.one = RatFunc(self, Poly.one(constfield), Poly.one(constfield), _reduced=True)
        self._t = RatFunc(self, Poly.x(constfield), Poly.one(constfield), _reduced=True)
        self._hash = hash(("FunctionField", constfield, var))

    @property
    def t(self) -> "RatFunc":
        return self._t

    def poly(self, x) -> Poly:
        """Coerce to a polynomial over the constant field."""
        if isinstance(x, Poly):
            if x.ring == self.constfield:
                return x
            raise FieldError("polynomial over a different constant field")
        if isinstance(x, str):
            num, den = _parse_ratfunc(self, x)
            if den.degree != 0:
                raise ValueError(f"not a polynomial: {x!r}")
            return num * Poly.constant(self.constfield, self.constfield.one / den[0])
        if isinstance(x, (int, FFElem)):
            return Poly.constant(self.constfield, self.constfield.elem(x))
        if isinstance(x, (list, tuple)):
            return Poly(self.constfield, x)
        raise FieldError(f"cannot coerce {x!r} to a polynomial")

    def elem(self, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            if x.K == self:
                return x
            raise FieldError("rational function over a different field")
        if isinstance(x, str):
            num, den = _parse_ratfunc(self, x)
            return RatFunc(self, num, den)
        if isinstance(x, Poly):
            return RatFunc(self, self.poly(x), Poly.one(self.constfield))
        if isinstance(x, (int, FFElem)):
            return RatFunc(self, self.poly(x), Poly.one(self.constfield), _reduced=True)
        raise FieldError(f"cannot coerce {x!r} to a rational function")

    def __call__(self, x):
        return self.elem(x)

    def __eq__(self, other):
        return (
            isinstance(other, FunctionField)
            and other.constfield == self.constfield
            and other.var == self.var
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{self.constfield!r}({self.var})"


class RatFunc:
    """num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("K", "num", "den")

    def __init__(self, K: FunctionField, num: Poly, den: Poly, _reduced=False):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            g = gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            if not den.is_monic():
                inv = K.constfield.one / den.leading()
                c = Poly.constant(K.constfield, inv)
                num, den = num * c, den * c
        self.K = K
        self.num = num
        self.den = den

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.K == self.K:
                return other
            raise FieldError("mixed function fields")
        if isinstance(other, (int, FFElem, Poly)):
            return self.K.elem(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.K, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.K, -self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.K, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.K, self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else o / self

    def __pow__(self, e: int):
        if e < 0:
            return (self.K.one / self) ** (-e)
        return RatFunc(self.K, self.num**e, self.den**e, _reduced=True)

    def __eq__(self, other):
        if isinstance(other, (int, FFElem, Poly)):
            other = self.K.elem(other)
        return (
            isinstance(other, RatFunc)
            and other.K == self.K
            and other.num == self.num
            and other.den == self.den
        )

    def __hash__(self):
        return hash((self.K, self.num, self.den))

    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError("not a polynomial")
        return self.num

    @property
    def deg(self) -> int:
        """deg num - deg den (so -ord at infinity); -inf is represented
        by raising on the zero function."""
        if self.is_zero():
            raise ValueError("degree of the zero function")
        return self.num.degree - self.den.degree

    def subst_inverse_var(self) -> "RatFunc":
        """The image under the automorphism t -> 1/t of K."""
        n, d = self.num, self.den
        if n.is_zero():
            return self
        m = max(n.degree, d.degree)
        F = self.K.constfield
        rn = Poly(F, [F.zero] * (m - n.degree) + list(reversed(n.coeffs)))
        rd = Poly(F, [F.zero] * (m - d.degree) + list(reversed(d.coeffs)))
        return RatFunc(self.K, rn, rd)

    def map_constants(self, fn, K2: FunctionField) -> "RatFunc":
        num = self.num.map_coeffs(fn, K2.constfield)
        den = self.den.map_coeffs(fn, K2.constfield)
        return RatFunc(K2, num, den)

    def __repr__(self):
        n = render_poly(self.num, self.K.var)
        if self.den.degree == 0:
            return n
        return f"({n})/({render_poly(self.den, self.K.var)})"


# ---------------------------------------------------------------------------
# places


class Place:
    """A place of F_{q^m}(t): a monic irreducible polynomial or infinity.

    ``degree`` is over the current constant field; ``scale_deg`` is the degree
    of the place of the base field F_q(t) lying below (used to normalize
    logs), and ``weight`` is the global weight [L_w:K_v]/[L:K].
    """

    __slots__ = ("K", "poly", "degree", "scale_deg", "weight", "_res", "_hash")

    def __init__(self, K: FunctionField, poly: Poly | None,
                 scale_deg: int | None = None, weight: Fraction = Fraction(1),
                 _trusted: bool = False):
        if poly is not None:
            poly = poly.monic()
            if not _trusted and not is_irreducible(poly):
                raise ValueError("place polynomial must be irreducible")
        self.K = K
        self.poly = poly
        self.degree = 1 if poly is None else poly.degree
        self.scale_deg = self.degree if scale_deg is None else scale_deg
        self.weight = Fraction(weight)
        self._res = None
        self._hash = hash((K, None if poly is None else poly.coeffs))

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    def residue_field(self) -> FiniteField:
        if self._res is None:
            if self.poly is None or self.degree == 1:
                self._res = self.K.constfield
            else:
                self._res = ExtField(self.K.constfield, self.poly.coeffs)
        return self._res

    def residue_size(self) -> int:
        return self.residue_field().order

    def __eq__(self, other):
        return (
            isinstance(other, Place)
            and other.K == self.K
            and other.poly == self.poly
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.poly is None:
            return "inf"
        return f"({render_poly(self.poly, self.K.var)})"


def place_from_string(K: FunctionField, s: str) -> Place:
    s = s.strip()
    if s in ("inf", "infty", "oo", "infinity"):
        return Place(K, None)
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    return Place(K, K.poly(s))


def finite_places_of(K: FunctionField, f: Poly) -> list[tuple[Place, int]]:
    """The finite places dividing f, with multiplicities."""
    return [(Place(K, g, _trusted=True), m) for g, m in factor(f)]


def ord_poly_at(f: Poly, v: Place) -> int:
    if f.is_zero():
        raise ValueError("ord of the zero polynomial")
    if v.is_infinite:
        return -f.degree
    n = 0
    while True:
        q, r = divmod(f, v.poly)
        if not r.is_zero():
            return n
        f = q
        n += 1


def ord_at(a: RatFunc, v: Place) -> int:
    """The normalized additive valuation ord_v(a) (an integer)."""
    if a.is_zero():
        raise ValueError("ord of zero (infinite valuation)")
    if v.is_infinite:
        return a.den.degree - a.num.degree
    return ord_poly_at(a.num, v) - ord_poly_at(a.den, v)


def log_abs(a: RatFunc, v: Place) -> Fraction:
    """log|a|_v = -deg(v) * ord_v(a), base-field normalized."""
    return Fraction(-v.scale_deg * ord_at(a, v))


def residue(a: RatFunc, v: Place) -> FFElem:
    """Image of a in the residue field at v; requires ord_v(a) >= 0."""
    k = v.residue_field()
    if v.is_infinite:
        d = a.num.degree - a.den.degree
        if d > 0:
            raise ValueError("pole at infinity")
        if d < 0:
            return k.zero
        return a.num.leading() / a.den.leading()
    h = v.poly
    den_r = a.den % h
    if den_r.is_zero():
        raise ValueError(f"negative ord at {v}")
    num_r = a.num % h
    if num_r.is_zero():
        return k.zero
    if v.degree == 1:
        root = -h[0]
        return num_r(root) / den_r(root)
    nk = k.elem(tuple(num_r[i] for i in range(v.degree)))
    dk = k.elem(tuple(den_r[i] for i in range(v.degree)))
    return nk / dk


def sum_of_valuations(a: RatFunc) -> int:
    """sum_v deg(v)*ord_v(a); zero by the product formula."""
    if a.is_zero():
        raise ValueError("zero has no valuation vector")
    total = -(a.num.degree - a.den.degree)  # infinity
    for h, m in factor(a.num):
        total += h.degree * m
    for h, m in factor(a.den):
        total -= h.degree * m
    return total


# ---------------------------------------------------------------------------
# field specification and constant-field extension


class FieldSpec:
    """Constant-field description: q = p^d with an explicit modulus for d > 1."""

    __slots__ = ("p", "d", "modulus", "field")

    def __init__(self, p: int, d: int = 1, modulus=None):
        if p < 5:
            raise FieldError("characteristic >= 5 required")
        base = PrimeField(p)
        self.p = p
        self.d = d
        if d == 1:
            self.field = base
            self.modulus = None
        else:
            mod = Poly(base, modulus) if modulus is not None else find_irreducible(base, d)
            if not is_irreducible(mod):
                raise FieldError("modulus is not irreducible")
            self.field = ExtField(base, mod.monic().coeffs)
            self.modulus = mod
        if self.field.order != p**d:
            raise FieldError("modulus degree does not match d")

    def function_field(self, var: str = "t") -> FunctionField:
        return FunctionField(self.field, var)


class ConstantExtension:
    """F_{q^m}(t) over F_q(t), with the place-splitting map."""

    __slots__ = ("K", "L", "m", "embed_const")

    def __init__(self, K: FunctionField, m: int):
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        self.K = K
        self.m = m
        if m == 1:
            self.L = K
            self.embed_const = lambda c: c
        else:
            F = K.constfield
            ext = ExtField(F, find_irreducible(F, m).coeffs)
            self.L = FunctionField(ext, K.var)
            self.embed_const = ext.embed

    def embed(self, a: RatFunc) -> RatFunc:
        if self.m == 1:
            return a
        return a.map_constants(self.embed_const, self.L)

    def embed_poly(self, f: Poly) -> Poly:
        if self.m == 1:
            return f
        return f.map_coeffs(self.embed_const, self.L.constfield)

    def places_above(self, v: Place) -> list[Place]:
        """Places of L over v, each with base-normalized scale and weight.

        The local degree formula holds by construction: the weights of the
        places above v sum to 1.
        """
        base_deg = v.scale_deg
        if v.is_infinite:
            return [Place(self.L, None, scale_deg=base_deg, weight=Fraction(1))]
        if self.m == 1:
            return [v]
        hext = self.embed_poly(v.poly)
        out = []
        for g, mult in factor(hext):
            if mult != 1:
                raise FieldError("constant extension must be unramified")
            w = Place(self.L, g, scale_deg=base_deg,
                      weight=Fraction(g.degree, v.poly.degree), _trusted=True)
            out.append(w)
        return out


# ---------------------------------------------------------------------------
# parsing and rendering


_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|\*\*|[()^*/+-])")


def _tokenize(s: str) -> list[str]:
    out, i = [], 0
    while i < len(s):
        m = _TOKEN.match(s, i)
        if not m:
            raise ValueError(f"cannot tokenize {s[i:]!r}")
        tok = m.group(1)
        out.append("^" if tok == "**" else tok)
        i = m.end()
    return out


def _parse_ratfunc(K: FunctionField, s: str) -> tuple[Poly, Poly]:
    """Recursive-descent parser for +,-,*,/,^ over integers and the variable."""
    toks = _tokenize(s)
    pos = 0
    F = K.constfield
    one = Poly.one(F)

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(tok=None):
        nonlocal pos
        cur = peek()
        if tok is not None and cur != tok:
            raise ValueError(f"expected {tok!r}, found {cur!r} in {s!r}")
        pos += 1
        return cur

    def atom():
        tok = peek()
        if tok == "(":
            take()
            n, d = expr()
            take(")")
            return n, d
        if tok is None:
            raise ValueError(f"unexpected end of input in {s!r}")
        if tok.isdigit():
            take()
            return Poly.constant(F, int(tok)), one
        if tok == K.var:
            take()
            return Poly.x(F), one
        raise ValueError(f"unknown symbol {tok!r} in {s!r}")

    def power():
        n, d = atom()
        if peek() == "^":
            take()
            neg = False
            if peek() == "-":
                take()
                neg = True
            e = take()
            if not e.isdigit():
                raise ValueError(f"integer exponent expected in {s!r}")
            e = int(e)
            n, d = n**e, d**e
            if neg:
                n, d = d, n
        return n, d

    def unary():
        if peek() == "-":
            take()
            n, d = unary()
            return -n, d
        if peek() == "+":
            take()
            return unary()
        return power()

    def term():
        n, d = unary()
        while peek() in ("*", "/"):
            op = take()
            n2, d2 = unary()
            if op == "*":
                n, d = n * n2, d * d2
            else:
                if n2.is_zero():
                    raise ZeroDivisionError(f"division by zero in {s!r}")
                n, d = n * d2, d * n2
        return n, d

    def expr():
        n, d = term()
        while peek() in ("+", "-"):
            op = take()
            n2, d2 = term()
            if op == "+":
                n, d = n * d2 + n2 * d, d * d2
            else:
                n, d = n * d2 - n2 * d, d * d2
        return n, d

    n, d = expr()
    if pos != len(toks):
        raise ValueError(f"trailing input {toks[pos:]!r} in {s!r}")
    return n, d


def render_poly(f: Poly, var: str) -> str:
    if f.is_zero():
        return "0"
    F = f.ring
    parts = []
    for i in range(f.degree, -1, -1):
        c = f[i]
        if not c:
            continue
        if i == 0:
            parts.append(F.render(c))
        else:
            xs = var if i == 1 else f"{var}^{i}"
            if c == F.one:
                parts.append(xs)
            else:
                parts.append(f"{F.render(c)}*{xs}")
    return "+".join(parts).replace("+-", "-")
