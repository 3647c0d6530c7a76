"""Dense univariate polynomials over an exact coefficient field.

``Poly`` is generic: the ``ring`` object only needs ``zero``, ``one`` and an
``elem`` coercion, and coefficients need the usual arithmetic dunders.  This
covers finite fields (places, residue work) as well as rational-function
coefficients (division polynomials).  Factorization routines at the bottom
are specific to finite-field coefficients.
"""
from __future__ import annotations

from .finitefield import FFElem, FieldError, FiniteField


class Poly:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        cs = [ring.elem(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.ring = ring
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(ring) -> "Poly":
        return Poly(ring, [])

    @staticmethod
    def one(ring) -> "Poly":
        return Poly(ring, [ring.one])

    @staticmethod
    def x(ring) -> "Poly":
        return Poly(ring, [ring.zero, ring.one])

    @staticmethod
    def constant(ring, c) -> "Poly":
        return Poly(ring, [ring.elem(c)])

    # -- basic queries -------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial having degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i <= self.degree else self.ring.zero

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.ring.one

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring == self.ring:
                return other
            raise FieldError("polynomials over different rings")
        try:
            return Poly.constant(self.ring, other)
        except (FieldError, TypeError):
            return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self.ring, [self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self.ring, [self[i] - o[i] for i in range(n)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.coeffs or not o.coeffs:
            return Poly.zero(self.ring)
        out = [self.ring.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        inv_lead = self.ring.one / o.leading()
        q = [self.ring.zero] * max(0, len(rem) - len(o.coeffs) + 1)
        while len(rem) >= len(o.coeffs):
            c = rem[-1] * inv_lead
            shift = len(rem) - len(o.coeffs)
            if c:
                q[shift] = c
                for i, b in enumerate(o.coeffs):
                    rem[shift + i] = rem[shift + i] - c * b
            rem.pop()
        return Poly(self.ring, q), Poly(self.ring, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.one(self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, Poly) else other
        return isinstance(o, Poly) and o.ring == self.ring and o.coeffs == self.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    # -- calculus and evaluation ----------------------------------------------

    def derivative(self) -> "Poly":
        return Poly(self.ring, [i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "Poly":
        if self.is_zero() or self.is_monic():
            return self
        inv = self.ring.one / self.leading()
        return Poly(self.ring, [c * inv for c in self.coeffs])

    def __call__(self, x):
        """Horner evaluation; works for any argument whose arithmetic is
        compatible with the coefficients (field element, series, ...)."""
        if not self.coeffs:
            return x * 0
        acc = x * 0 + self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def map_coeffs(self, fn, ring) -> "Poly":
        return Poly(ring, [fn(c) for c in self.coeffs])

    def shift_var(self, a) -> "Poly":
        """p(x + a), by Horner in the shifted variable."""
        res = Poly.zero(self.ring)
        xa = Poly(self.ring, [self.ring.elem(a), self.ring.one])
        for c in reversed(self.coeffs):
            res = res * xa + Poly.constant(self.ring, c)
        return res

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(f"{c!r}")
            elif i == 1:
                parts.append(f"{c!r}*x")
            else:
                parts.append(f"{c!r}*x^{i}")
        return " + ".join(parts)


def gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def ext_gcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """g, s, t with g = s*a + t*b and g monic (or zero)."""
    ring = a.ring
    r0, r1 = a, b
    s0, s1 = Poly.one(ring), Poly.zero(ring)
    t0, t1 = Poly.zero(ring), Poly.one(ring)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = ring.one / r0.leading()
    scale = Poly.constant(ring, inv)
    return r0.monic(), s0 * scale, t0 * scale


def powmod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly.one(base.ring)
    base = base % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


# -- finite-field specific routines ----------------------------------------


def is_irreducible(f: Poly) -> bool:
    """Rabin irreducibility test over a finite field."""
    F: FiniteField = f.ring
    n = f.degree
    if n <= 0:
        return False
    if n == 1:
        return True
    q = F.order
    x = Poly.x(F)
    if (powmod(x, q**n, f) - x) % f:
        return False
    for r in factor_set(n):
        if gcd(powmod(x, q ** (n // r), f) - x, f).degree > 0:
            return False
    return True


def factor_set(n: int) -> list[int]:
    from .finitefield import factor_int

    return sorted(factor_int(n))


def find_irreducible(F: FiniteField, degree: int) -> Poly:
    """First monic irreducible of the given degree in enumeration order."""
    if degree == 1:
        return Poly.x(F)
    for i in range(F.order**degree):
        coeffs = []
        k = i
        for _ in range(degree):
            coeffs.append(F.index_elem(k % F.order))
            k //= F.order
        f = Poly(F, coeffs + [F.one])
        if is_irreducible(f):
            return f
    raise FieldError("no irreducible polynomial found (impossible)")


def _pth_root_poly(f: Poly) -> Poly:
    """For f with zero derivative, i.e. f = g(x^p), return g with
    p-th-rooted coefficients (valid over a fixed finite field)."""
    F: FiniteField = f.ring
    p = F.p
    coeffs = []
    for i in range(0, f.degree + 1, p):
        coeffs.append(F.pth_root(f[i]))
    return Poly(F, coeffs)


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """[(g_i, m_i)] with f = lead * prod g_i^{m_i}, g_i monic squarefree,
    pairwise coprime.  Characteristic-p aware."""
    F: FiniteField = f.ring
    f = f.monic()
    out: list[tuple[Poly, int]] = []
    if f.degree <= 0:
        return out
    df = f.derivative()
    if df.is_zero():
        for g, m in squarefree_decomposition(_pth_root_poly(f)):
            out.append((g, m * F.p))
        return out
    c = gcd(f, df)
    w = f // c
    i = 1
    while w.degree > 0:
        y = gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z, i))
        w = y
        c = c // y
        i += 1
    if c.degree > 0:
        for g, m in squarefree_decomposition(_pth_root_poly(c)):
            out.append((g, m * F.p))
    return out


def _ddf(f: Poly) -> list[tuple[Poly, int]]:
    """Distinct-degree factorization of a monic squarefree polynomial:
    [(product of irreducibles of degree d, d)]."""
    F: FiniteField = f.ring
    q = F.order
    out = []
    x = Poly.x(F)
    h = x
    d = 0
    rest = f
    while rest.degree > 2 * (d + 1) - 1:
        d += 1
        h = powmod(h, q, rest)
        g = gcd(h - x, rest)
        if g.degree > 0:
            out.append((g, d))
            rest = rest // g
            h = h % rest
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def _edf(f: Poly, d: int, seed: int) -> list[Poly]:
    """Cantor-Zassenhaus equal-degree splitting (odd characteristic)."""
    F: FiniteField = f.ring
    if f.degree == d:
        return [f]
    q = F.order
    import random

    rng = random.Random(seed)
    while True:
        r = Poly(F, [F.index_elem(rng.randrange(q)) for _ in range(f.degree)])
        if r.degree < 1:
            continue
        g = gcd(r, f)
        if 0 < g.degree < f.degree:
            break
        g = gcd(powmod(r, (q**d - 1) // 2, f) - Poly.one(F), f)
        if 0 < g.degree < f.degree:
            break
    return _edf(g, d, seed + 1) + _edf(f // g, d, seed + 1)


def factor(f: Poly) -> list[tuple[Poly, int]]:
    """Full factorization over a finite field: [(monic irreducible, mult)],
    sorted deterministically.  The leading unit is dropped."""
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    out: list[tuple[Poly, int]] = []
    for g, m in squarefree_decomposition(f):
        for h, d in _ddf(g):
            # deterministic seeding keeps reports byte-stable across runs
            seed = 0
            for c in h.coeffs:
                seed = (seed * 1000003 + h.ring.elem_index(c) + 1) & 0x7FFFFFFF
            for irr in _edf(h, d, seed):
                out.append((irr.monic(), m))
    out.sort(key=lambda gm: (gm[0].degree, [gm[0].ring.elem_index(c) for c in gm[0].coeffs]))
    return out


def roots(f: Poly) -> list[FFElem]:
    """Roots in the coefficient field (without multiplicity), sorted."""
    F: FiniteField = f.ring
    x = Poly.x(F)
    g = gcd(powmod(x, F.order, f) - x, f)
    rs = [(-h[0]) for h, _ in factor(g) if h.degree == 1]
    rs.sort(key=F.elem_index)
    return rs
