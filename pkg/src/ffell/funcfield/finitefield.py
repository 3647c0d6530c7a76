"""Finite fields F_p and explicit extension towers.

A field is either ``PrimeField(p)`` or ``ExtField(base, modulus)`` where
``modulus`` is a monic irreducible polynomial over ``base`` given as a tuple
of base elements (low degree first, including the leading 1).  Residue fields
of places and constant-field extensions are literal towers built this way, so
an element always knows the exact chain of fields it lives in.

Elements are immutable and hashable; all arithmetic is exact.
"""
from __future__ import annotations

import itertools


class FieldError(ValueError):
    pass


def factor_int(n: int) -> dict[int, int]:
    """Factor a positive integer by trial division (desk scale)."""
    if n <= 0:
        raise ValueError("positive integer required")
    out: dict[int, int] = {}
    for p in itertools.chain([2, 3], itertools.count(5, 2)):
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class FFElem:
    """Element of a finite field; ``val`` is an int (prime field) or a
    fixed-length tuple of base-field elements (extension field)."""

    __slots__ = ("field", "val")

    def __init__(self, field, val):
        self.field = field
        self.val = val

    def _coerce(self, other):
        if isinstance(other, FFElem):
            if other.field is self.field or other.field == self.field:
                return other
            raise FieldError(f"mixed fields: {self.field} vs {other.field}")
        if isinstance(other, int):
            return self.field.elem(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self.field._add(self, o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self.field._add(self, self.field._neg(o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self.field._add(o, self.field._neg(self))

    def __mul__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self.field._mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self.field._mul(self, self.field._inv(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self.field._mul(o, self.field._inv(self))

    def __neg__(self):
        return self.field._neg(self)

    def __pow__(self, e: int):
        if e < 0:
            return self.field._inv(self) ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        return self.field._inv(self)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.elem(other)
        return (
            isinstance(other, FFElem)
            and self.val == other.val
            and (self.field is other.field or self.field == other.field)
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.field, self.val))

    def __bool__(self):
        v = self.val
        return bool(v) if v.__class__ is int else any(v)

    def __repr__(self):
        return self.field.render(self)


class FiniteField:
    """Shared behaviour of prime and extension fields."""

    # subclasses set: p, order, degree (absolute over F_p), zero, one

    def __call__(self, x):
        return self.elem(x)

    # -- enumeration ------------------------------------------------------

    def elements(self):
        """All field elements in a fixed deterministic order."""
        for i in range(self.order):
            yield self.index_elem(i)

    def frobenius(self, a: FFElem) -> FFElem:
        return a**self.p

    def pth_root(self, a: FFElem) -> FFElem:
        # x -> x^p is bijective, with inverse x -> x^(order/p)
        return a ** (self.order // self.p)

    # -- multiplicative structure -----------------------------------------

    def is_square(self, a: FFElem) -> bool:
        if not a:
            return True
        return a ** ((self.order - 1) // 2) == self.one

    def sqrt(self, a: FFElem) -> FFElem | None:
        """A square root of ``a``, or None if ``a`` is a non-residue.

        Tonelli-Shanks on the cyclic group of units; the returned root is
        deterministic (its candidate search follows element order).
        """
        if not a:
            return a
        if not self.is_square(a):
            return None
        q = self.order
        if q % 4 == 3:
            return a ** ((q + 1) // 4)
        m, e = q - 1, 0
        while m % 2 == 0:
            m //= 2
            e += 1
        nonres = None
        for c in self.elements():
            if c and not self.is_square(c):
                nonres = c
                break
        z = nonres**m
        x = a ** ((m + 1) // 2)
        b = a**m
        r = e
        while b != self.one:
            # order of b is 2^k with 0 < k < r
            k, t = 0, b
            while t != self.one:
                t = t * t
                k += 1
            g = z ** (1 << (r - k - 1))
            x = x * g
            z = g * g
            b = b * z
            r = k
        return x

    def mult_order(self, a: FFElem) -> int:
        if not a:
            raise FieldError("zero has no multiplicative order")
        n = self.order - 1
        for p, e in factor_int(n).items():
            for _ in range(e):
                if a ** (n // p) == self.one:
                    n //= p
                else:
                    break
        return n

    def primitive_nth_root(self, n: int) -> FFElem:
        """A root of unity of exact order ``n`` (requires n | order-1)."""
        if (self.order - 1) % n != 0:
            raise FieldError(f"no primitive {n}-th root of unity in field of order {self.order}")
        for c in self.elements():
            if not c:
                continue
            z = c ** ((self.order - 1) // n)
            if self.mult_order(z) == n:
                return z
        raise FieldError("unreachable: cyclic unit group")

    def nth_roots_of_unity(self, n: int) -> list[FFElem]:
        z = self.primitive_nth_root(n)
        return [z**k for k in range(n)]


class PrimeField(FiniteField):
    __slots__ = ("p", "order", "degree", "zero", "one", "_hash")

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.order = p
        self.degree = 1
        self.zero = FFElem(self, 0)
        self.one = FFElem(self, 1 % p)
        self._hash = hash(("PrimeField", p))

    def elem(self, x) -> FFElem:
        if isinstance(x, FFElem):
            if x.field == self:
                return x
            raise FieldError("cannot coerce element from another field")
        return FFElem(self, x % self.p)

    def embed(self, a: FFElem) -> FFElem:
        if a.field == self:
            return a
        raise FieldError("element does not belong to this field")

    def _add(self, a, b):
        return FFElem(self, (a.val + b.val) % self.p)

    def _neg(self, a):
        return FFElem(self, (-a.val) % self.p)

    def _mul(self, a, b):
        return FFElem(self, (a.val * b.val) % self.p)

    def _inv(self, a):
        if a.val == 0:
            raise ZeroDivisionError("inverse of zero")
        return FFElem(self, pow(a.val, -1, self.p))

    def elem_index(self, a: FFElem) -> int:
        return a.val

    def index_elem(self, i: int) -> FFElem:
        return FFElem(self, i % self.p)

    def render(self, a: FFElem) -> str:
        return str(a.val)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"GF({self.p})"


class ExtField(FiniteField):
    """``base[x] / (modulus)`` with modulus monic irreducible over base."""

    __slots__ = ("base", "modulus", "rel_degree", "p", "order", "degree",
                 "zero", "one", "gen", "_hash")

    def __init__(self, base: FiniteField, modulus: tuple[FFElem, ...]):
        if len(modulus) < 3 or modulus[-1] != base.one:
            raise FieldError("modulus must be monic of degree >= 2")
        self.base = base
        self.modulus = tuple(modulus)
        self.rel_degree = len(modulus) - 1
        self.p = base.p
        self.degree = base.degree * self.rel_degree
        self.order = self.p**self.degree
        zero_vec = (base.zero,) * self.rel_degree
        self.zero = FFElem(self, zero_vec)
        self.one = FFElem(self, (base.one,) + (base.zero,) * (self.rel_degree - 1))
        if self.rel_degree >= 2:
            self.gen = FFElem(self, (base.zero, base.one) + (base.zero,) * (self.rel_degree - 2))
        else:
            self.gen = self.one
        self._hash = hash(("ExtField", hash(base), tuple(m.val for m in modulus)))

    def elem(self, x) -> FFElem:
        if isinstance(x, FFElem):
            if x.field == self:
                return x
            if x.field == self.base:
                return self.embed(x)
            raise FieldError("cannot coerce element from an unrelated field")
        if isinstance(x, int):
            return self.embed(self.base.elem(x))
        if isinstance(x, (tuple, list)):
            vec = [self.base.elem(c) for c in x]
            if len(vec) > self.rel_degree:
                raise FieldError("coefficient vector too long")
            vec += [self.base.zero] * (self.rel_degree - len(vec))
            return FFElem(self, tuple(vec))
        raise FieldError(f"cannot coerce {x!r}")

    def embed(self, a: FFElem) -> FFElem:
        """Embed a base-field element along the tower."""
        if a.field == self:
            return a
        if a.field == self.base:
            return FFElem(self, (a,) + (self.base.zero,) * (self.rel_degree - 1))
        if isinstance(self.base, ExtField):
            return self.embed(self.base.embed(a))
        raise FieldError("element does not belong to this tower")

    def _add(self, a, b):
        return FFElem(self, tuple(x + y for x, y in zip(a.val, b.val)))

    def _neg(self, a):
        return FFElem(self, tuple(-x for x in a.val))

    def _mul(self, a, b):
        n = self.rel_degree
        prod = [self.base.zero] * (2 * n - 1)
        for i, x in enumerate(a.val):
            if not x:
                continue
            for j, y in enumerate(b.val):
                if y:
                    prod[i + j] = prod[i + j] + x * y
        # reduce modulo the (monic) modulus
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c:
                for j in range(len(self.modulus) - 1):
                    prod[k - n + j] = prod[k - n + j] - c * self.modulus[j]
        return FFElem(self, tuple(prod[:n]))

    def _inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid on coefficient lists over the base field
        f = list(self.modulus)
        g = list(a.val)
        s0, s1 = [], [self.base.one]
        while True:
            while g and not g[-1]:
                g.pop()
            if not g:
                raise ZeroDivisionError("inverse of zero")
            if len(g) == 1:
                c = g[0].inverse()
                vec = [c * x for x in s1]
                vec += [self.base.zero] * (self.rel_degree - len(vec))
                return FFElem(self, tuple(vec[: self.rel_degree]))
            q, r = _list_divmod(f, g, self.base)
            f, g = g, r
            s0, s1 = s1, _list_sub(s0, _list_mul(q, s1, self.base), self.base)

    def elem_index(self, a: FFElem) -> int:
        i = 0
        for c in reversed(a.val):
            i = i * self.base.order + self.base.elem_index(c)
        return i

    def index_elem(self, i: int) -> FFElem:
        vec = []
        for _ in range(self.rel_degree):
            vec.append(self.base.index_elem(i % self.base.order))
            i //= self.base.order
        return FFElem(self, tuple(vec))

    def render(self, a: FFElem) -> str:
        return "[" + ",".join(self.base.render(c) for c in a.val) + "]"

    def __eq__(self, other):
        return (
            isinstance(other, ExtField)
            and other.base == self.base
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"GF({self.p}^{self.degree})"


# -- list-based polynomial helpers used by ExtField inversion --------------

def _list_trim(f):
    while f and not f[-1]:
        f.pop()
    return f


def _list_sub(a, b, F):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else F.zero
        y = b[i] if i < len(b) else F.zero
        out.append(x - y)
    return _list_trim(out)


def _list_mul(a, b, F):
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return _list_trim(out)


def _list_divmod(a, b, F):
    b = _list_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv_lead = b[-1].inverse()
    q = [F.zero] * max(0, len(a) - len(b) + 1)
    while len(_list_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv_lead
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = a[shift + i] - c * y
        a.pop()
    return _list_trim(q), _list_trim(a)
