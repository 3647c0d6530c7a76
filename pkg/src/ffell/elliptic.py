"""Weierstrass curves over F_q(t): invariants, group law, reduction data.

Characteristic >= 5 throughout, so every model can be completed to the short
form Y^2 = X^3 + AX + B (A = -c4/48, B = -c6/864, same discriminant), and
minimalization at a place is a single scaling by a power of the uniformizer.
The place at infinity is handled through the field automorphism t -> 1/t,
which moves it to the finite place (t) of the substituted model.

Reduction types follow the dichotomy used over the completed algebraic
closure: good, multiplicative (split or not; split after an unramified
quadratic constant extension otherwise), and additive with potentially good
versus potentially multiplicative decided by the sign of ord_v(j).
"""
from __future__ import annotations

import itertools
import math
from enum import Enum
from fractions import Fraction

from .funcfield import (
    ConstantExtension,
    ExtField,
    FFElem,
    FieldError,
    FiniteField,
    FunctionField,
    Place,
    Poly,
    RatFunc,
    factor_int,
    factor_poly,
    finite_places_of,
    ord_at,
    residue,
)
from .funcfield.poly import gcd as poly_gcd


class SingularCurveError(ValueError):
    pass


class UnsupportedPlaceError(ValueError):
    """Raised where the v1 scope ends (additive potentially multiplicative)."""


# ---------------------------------------------------------------------------
# generic affine group law; points are None (identity) or coordinate pairs


def ec_negate(coeffs, P):
    if P is None:
        return None
    a1, a2, a3, a4, a6 = coeffs
    x, y = P
    return (x, -y - a1 * x - a3)


def ec_add(coeffs, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    a1, a2, a3, a4, a6 = coeffs
    x1, y1 = P
    x2, y2 = Q
    if not (x2 - x1):
        if not (y2 + y1 + a1 * x1 + a3):
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam * (x3 - x1) + y1) - a1 * x3 - a3
    return (x3, y3)


def ec_scalar(coeffs, n, P):
    if n < 0:
        return ec_scalar(coeffs, -n, ec_negate(coeffs, P))
    R = None
    base = P
    while n:
        if n & 1:
            R = ec_add(coeffs, R, base)
        n >>= 1
        if n:
            base = ec_add(coeffs, base, base)
    return R


# ---------------------------------------------------------------------------
# curves and points over a function field


class WeierstrassCurve:
    __slots__ = ("K", "a1", "a2", "a3", "a4", "a6",
                 "b2", "b4", "b6", "b8", "c4", "c6", "disc", "j",
                 "_red_cache", "_inf_model", "_base_changes", "_scrutiny", "_misc")

    def __init__(self, K: FunctionField, a1, a2, a3, a4, a6):
        if K.constfield.p < 5:
            raise FieldError("characteristic >= 5 required")
        self.K = K
        self.a1, self.a2, self.a3 = K(a1), K(a2), K(a3)
        self.a4, self.a6 = K(a4), K(a6)
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        self.b2 = a1 * a1 + 4 * a2
        self.b4 = 2 * a4 + a1 * a3
        self.b6 = a3 * a3 + 4 * a6
        self.b8 = (a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4
                   + a2 * a3 * a3 - a4 * a4)
        self.c4 = self.b2 * self.b2 - 24 * self.b4
        self.c6 = -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6
        self.disc = (-self.b2 * self.b2 * self.b8 - 8 * self.b4**3
                     - 27 * self.b6 * self.b6 + 9 * self.b2 * self.b4 * self.b6)
        if self.disc.is_zero():
            raise SingularCurveError("discriminant vanishes")
        self.j = self.c4**3 / self.disc
        self._red_cache = {}
        self._inf_model = None
        self._base_changes = {}
        self._scrutiny = None
        self._misc = {}

    @property
    def coeffs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    # -- points ---------------------------------------------------------------

    def zero(self) -> "Point":
        return Point(self, None, None)

    def point(self, x, y) -> "Point":
        x, y = self.K(x), self.K(y)
        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = x**3 + self.a2 * x * x + self.a4 * x + self.a6
        if lhs != rhs:
            raise ValueError("point is not on the curve")
        return Point(self, x, y)

    # -- derived models ---------------------------------------------------------

    def short_coeffs(self) -> tuple[RatFunc, RatFunc]:
        """(A, B) of the completed model Y^2 = X^3 + AX + B."""
        return (-self.c4 / 48, -self.c6 / 864)

    def to_short(self, P: "Point") -> tuple[RatFunc, RatFunc] | None:
        if P.is_zero():
            return None
        x, y = P.x, P.y
        return (x + self.b2 / 12, y + (self.a1 * x + self.a3) / 2)

    def infinity_model(self) -> tuple["WeierstrassCurve", Place]:
        """The curve under t -> 1/t, with the place (t) standing for infinity."""
        if self._inf_model is None:
            cur = WeierstrassCurve(
                self.K,
                *[a.subst_inverse_var() for a in self.coeffs],
            )
            self._inf_model = (cur, Place(self.K, Poly.x(self.K.constfield)))
        return self._inf_model

    def base_change(self, ext: ConstantExtension) -> "WeierstrassCurve":
        if ext.m == 1:
            return self
        key = ext.m
        if key not in self._base_changes:
            self._base_changes[key] = WeierstrassCurve(
                ext.L, *[ext.embed(a) for a in self.coeffs]
            )
        return self._base_changes[key]

    # -- reduction --------------------------------------------------------------

    def reduction(self, v: Place) -> "ReductionData":
        if v not in self._red_cache:
            if v.is_infinite:
                cur, v0 = self.infinity_model()
                data = classify_reduction(cur, v0)
                data = data.relabel(v)
            else:
                data = classify_reduction(self, v)
            self._red_cache[v] = data
        return self._red_cache[v]

    def scrutiny_places(self) -> list[Place]:
        """Finite places where the given model might not be good-minimal:
        divisors of the discriminant (either side) and of any coefficient
        denominator.  Everything else is good with the identity transform."""
        if self._scrutiny is None:
            f = self.disc.num * self.disc.den
            for a in self.coeffs:
                if a.den.degree > 0:
                    f = f * a.den
            self._scrutiny = [v for v, _ in finite_places_of(self.K, f)]
        return self._scrutiny

    def bad_places(self) -> list[Place]:
        out = [v for v in self.scrutiny_places()
               if self.reduction(v).kind is not ReductionKind.GOOD]
        vinf = Place(self.K, None)
        if self.reduction(vinf).kind is not ReductionKind.GOOD:
            out.append(vinf)
        return out

    def __eq__(self, other):
        return (isinstance(other, WeierstrassCurve) and other.K == self.K
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.K,) + self.coeffs)

    def __repr__(self):
        a1, a2, a3, a4, a6 = self.coeffs
        return (f"E: y^2 + ({a1})xy + ({a3})y = "
                f"x^3 + ({a2})x^2 + ({a4})x + ({a6})")


class Point:
    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: WeierstrassCurve, x, y):
        self.curve = curve
        self.x = x
        self.y = y

    def is_zero(self) -> bool:
        return self.x is None

    def coords(self):
        return None if self.is_zero() else (self.x, self.y)

    def __add__(self, other: "Point") -> "Point":
        if other.curve != self.curve:
            raise ValueError("points on different curves")
        R = ec_add(self.curve.coeffs, self.coords(), other.coords())
        return Point(self.curve, *(R if R else (None, None)))

    def __neg__(self) -> "Point":
        R = ec_negate(self.curve.coeffs, self.coords())
        return Point(self.curve, *(R if R else (None, None)))

    def __sub__(self, other: "Point") -> "Point":
        return self + (-other)

    def __rmul__(self, n: int) -> "Point":
        R = ec_scalar(self.curve.coeffs, n, self.coords())
        return Point(self.curve, *(R if R else (None, None)))

    def __mul__(self, n: int) -> "Point":
        return self.__rmul__(n)

    def __eq__(self, other):
        return (isinstance(other, Point) and other.curve == self.curve
                and other.x == self.x and other.y == self.y)

    def __hash__(self):
        return hash((self.x, self.y))

    def base_change(self, ext: ConstantExtension) -> "Point":
        cur = self.curve.base_change(ext)
        if self.is_zero():
            return cur.zero()
        return Point(cur, ext.embed(self.x), ext.embed(self.y))

    def __repr__(self):
        return "O" if self.is_zero() else f"({self.x}, {self.y})"


# ---------------------------------------------------------------------------
# reduction classification


class ReductionKind(Enum):
    GOOD = "good"
    SPLIT_MULT = "split multiplicative"
    NONSPLIT_MULT = "nonsplit multiplicative"
    ADD_POTGOOD = "additive, potentially good"
    ADD_POTMULT = "additive, potentially multiplicative"

    @property
    def is_mult(self):
        return self in (ReductionKind.SPLIT_MULT, ReductionKind.NONSPLIT_MULT)


class ReductionData:
    """Reduction of a curve at one finite place of its own function field
    (infinite places are classified on the t -> 1/t model and relabeled)."""

    __slots__ = ("curve", "place", "label", "kind", "N", "scale", "ord_j",
                 "Amin", "Bmin", "res_field", "Abar", "Bbar", "node_x")

    def __init__(self, curve, place, label, kind, N, scale, ord_j,
                 Amin, Bmin, res_field, Abar, Bbar, node_x):
        self.curve = curve          # the working (finite-place) model
        self.place = place          # finite working place
        self.label = label          # the place as the caller named it
        self.kind = kind
        self.N = N                  # ord_v of the minimal discriminant
        self.scale = scale          # minimalizing exponent k: (X,Y) -> (X/h^2k, Y/h^3k)
        self.ord_j = ord_j
        self.Amin = Amin
        self.Bmin = Bmin
        self.res_field = res_field
        self.Abar = Abar
        self.Bbar = Bbar
        self.node_x = node_x        # residue x of the node (multiplicative)

    def relabel(self, label: Place) -> "ReductionData":
        return ReductionData(self.curve, self.place, label, self.kind, self.N,
                             self.scale, self.ord_j, self.Amin, self.Bmin,
                             self.res_field, self.Abar, self.Bbar, self.node_x)

    @property
    def skeleton_length_ord(self) -> int:
        """ord-unit circumference of the skeleton: max(0, -ord_v(j))."""
        return self.N if self.kind.is_mult else 0

    def min_coords(self, P: Point):
        """Coordinates of P on the minimal short model at this place."""
        if P.is_zero():
            return None
        base = self.curve
        if P.curve != base:
            # caller passed a point on the original model of an infinite place
            if P.curve.infinity_model()[0] == base:
                P = Point(base, P.x.subst_inverse_var(), P.y.subst_inverse_var())
            else:
                raise ValueError("point is not on the working model")
        X, Y = base.to_short(P)
        h = RatFunc(base.K, self.place.poly, Poly.one(base.K.constfield))
        return (X / h ** (2 * self.scale), Y / h ** (3 * self.scale))

    def reduce_point(self, P: Point):
        """'identity', 'singular', or the residue point on the special fiber
        of the minimal short model."""
        if P.is_zero():
            return "identity"
        X, Y = self.min_coords(P)
        v = self.place
        if not X.is_zero() and ord_at(X, v) < 0:
            return "identity"
        xb = residue(X, v)
        yb = residue(Y, v)
        if self.kind is ReductionKind.GOOD:
            return (xb, yb)
        if not yb:
            sing = self.node_x if self.kind.is_mult else self.res_field.zero
            if xb == sing:
                return "singular"
        return (xb, yb)

    def kernel_z_ord(self, P: Point) -> int:
        """ord_v of the local parameter z = -X/Y for P in the kernel of
        reduction (P must reduce to the identity)."""
        X, Y = self.min_coords(P)
        return ord_at(X, self.place) - ord_at(Y, self.place)

    def residue_curve(self):
        if self.Abar is None:
            raise ValueError("no smooth residue curve at this place")
        k = self.res_field
        return (k.zero, k.zero, k.zero, self.Abar, self.Bbar)


def _ord_or_none(a: RatFunc, v: Place):
    return None if a.is_zero() else ord_at(a, v)


def classify_reduction(curve: WeierstrassCurve, v: Place) -> ReductionData:
    if v.is_infinite:
        raise ValueError("classify on the substituted model for infinite places")
    A, B = curve.short_coeffs()
    oc4 = _ord_or_none(curve.c4, v)
    oc6 = _ord_or_none(curve.c6, v)
    od = ord_at(curve.disc, v)
    ks = [od // 12]
    if oc4 is not None:
        ks.append(oc4 // 4)
    if oc6 is not None:
        ks.append(oc6 // 6)
    k = min(ks)
    N = od - 12 * k
    a_min = None if oc4 is None else oc4 - 4 * k
    ord_j = (3 * oc4 - od) if oc4 is not None else None  # +inf when c4 = 0
    h = RatFunc(curve.K, v.poly, Poly.one(curve.K.constfield))
    Amin = A / h ** (4 * k)
    Bmin = B / h ** (6 * k)
    res = v.residue_field()
    if N == 0:
        kind = ReductionKind.GOOD
        Abar = residue(Amin, v) if Amin else res.zero
        Bbar = residue(Bmin, v) if Bmin else res.zero
        node_x = None
    elif a_min == 0:
        Abar = residue(Amin, v)
        Bbar = residue(Bmin, v)
        # node at the double root x0 of x^3 + Abar x + Bbar; split iff 3*x0
        # is a square (the tangent cone is y^2 - 3*x0 (x - x0)^2)
        node_x = -3 * Bbar / (2 * Abar)
        kind = (ReductionKind.SPLIT_MULT
                if res.is_square(3 * node_x) else ReductionKind.NONSPLIT_MULT)
    else:
        if ord_j is None or ord_j >= 0:
            kind = ReductionKind.ADD_POTGOOD
        else:
            kind = ReductionKind.ADD_POTMULT
        Abar = Bbar = node_x = None
    return ReductionData(curve, v, v, kind, N, k,
                         ord_j if ord_j is not None else None,
                         Amin, Bmin, res, Abar, Bbar, node_x)


# ---------------------------------------------------------------------------
# residue-curve group computations (short model y^2 = x^3 + a x + b over k)


def residue_point_order(k: FiniteField, a: FFElem, b: FFElem, P) -> int:
    """Exact order of a point on y^2 = x^3 + ax + b over the finite field k."""
    coeffs = (k.zero, k.zero, k.zero, a, b)
    if P is None:
        return 1
    q = k.order
    s = math.isqrt(4 * q) + 1
    lo = q + 1 - s if q + 1 - s > 0 else 1
    m = _bsgs_annihilator(coeffs, P, lo, q + 1 + s)
    for p in sorted(factor_int(m)):
        while m % p == 0 and ec_scalar(coeffs, m // p, P) is None:
            m //= p
    return m


def _bsgs_annihilator(coeffs, P, lo, hi) -> int:
    """Some m in [lo, hi] with m*P = O (baby-step giant-step)."""
    width = hi - lo + 1
    s = math.isqrt(width) + 1
    baby = {}
    R = None  # b*P
    for b in range(s):
        baby.setdefault(_pt_key(R), b)
        R = ec_add(coeffs, R, P)
    # want lo*P + (a*s + b)*P = O  =>  -(lo + a*s)*P = b*P
    sP = ec_scalar(coeffs, s, P)
    T = ec_negate(coeffs, ec_scalar(coeffs, lo, P))
    a = 0
    while a * s < width + s:
        key = _pt_key(T)
        if key in baby:
            m = lo + a * s + baby[key]
            if m >= lo and ec_scalar(coeffs, m, P) is None:
                return m
        T = ec_add(coeffs, T, ec_negate(coeffs, sP))
        a += 1
    raise ArithmeticError("no annihilator in the Hasse window (bad input?)")


def _pt_key(P):
    return None if P is None else (P[0], P[1])


def residue_group_order(k: FiniteField, a: FFElem, b: FFElem) -> int:
    """|E(k)| for the short residue curve; exhaustive for small k, otherwise
    lcm-of-orders with the unique Hasse-window multiple."""
    q = k.order
    if q <= 5000:
        n = 1
        for x in k.elements():
            r = (x * x + a) * x + b
            if not r:
                n += 1
            elif k.is_square(r):
                n += 2
        return n
    s = math.isqrt(4 * q) + 1
    lo, hi = q + 1 - s, q + 1 + s
    lcm = 1
    coeffs = (k.zero, k.zero, k.zero, a, b)
    for x in k.elements():
        r = (x * x + a) * x + b
        if not k.is_square(r):
            continue
        y = k.sqrt(r)
        lcm = math.lcm(lcm, residue_point_order(k, a, b, (x, y)))
        mults = [m for m in range(((lo + lcm - 1) // lcm) * lcm, hi + 1, lcm)]
        if len(mults) == 1:
            return mults[0]
    raise ArithmeticError("group order not resolved (exponent too small)")


def is_ordinary(red: ReductionData) -> bool:
    """Ordinary vs supersingular good reduction, by the trace mod p."""
    if red.kind is not ReductionKind.GOOD:
        raise ValueError("ordinarity is about good places")
    k = red.res_field
    n = residue_group_order(k, red.Abar, red.Bbar)
    trace = k.order + 1 - n
    return trace % k.p != 0


# ---------------------------------------------------------------------------
# division polynomials (x-parts) over the curve's own field


def division_poly_x(curve: WeierstrassCurve, n: int) -> Poly:
    """The x-polynomial f_n with psi_n = f_n (n odd), psi_n = psi_2 * f_n
    (n even), over K; roots of f_n (together with the 2-torsion x's when n
    is even) carry the x-coordinates of E[n] \\ O."""
    if n < 1:
        raise ValueError("n >= 1")
    K = curve.K
    RK = _RatFuncRing(K)
    x = Poly.x(RK)
    b2, b4, b6, b8 = curve.b2, curve.b4, curve.b6, curve.b8
    B = Poly(RK, [b6, 2 * b4, b2, K(4)])           # psi_2^2
    f = {0: Poly.zero(RK), 1: Poly.one(RK), 2: Poly.one(RK)}
    f[-1] = -Poly.one(RK)
    f[3] = Poly(RK, [b8, 3 * b6, 3 * b4, b2, K(3)])
    f[4] = Poly(RK, [b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6,
                     5 * b4, b2, K(2)])

    def get(m: int) -> Poly:
        if m in f:
            return f[m]
        if m % 2:
            r = (m - 1) // 2
            if r % 2 == 0:
                val = B * B * get(r + 2) * get(r) ** 3 - get(r - 1) * get(r + 1) ** 3
            else:
                val = get(r + 2) * get(r) ** 3 - B * B * get(r - 1) * get(r + 1) ** 3
        else:
            r = m // 2
            val = get(r) * (get(r + 2) * get(r - 1) ** 2 - get(r - 2) * get(r + 1) ** 2)
        f[m] = val
        return val

    return get(n)


def two_torsion_x_poly(curve: WeierstrassCurve) -> Poly:
    """psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6 (vanishes at 2-torsion x's)."""
    RK = _RatFuncRing(curve.K)
    return Poly(RK, [curve.b6, 2 * curve.b4, curve.b2, curve.K(4)])


class _RatFuncRing:
    """Adapter making a FunctionField act as a Poly coefficient ring."""

    __slots__ = ("K", "zero", "one")

    def __init__(self, K: FunctionField):
        self.K = K
        self.zero = K.zero
        self.one = K.one

    def elem(self, c):
        return self.K(c)

    def __eq__(self, other):
        return isinstance(other, _RatFuncRing) and other.K == self.K

    def __hash__(self):
        return hash(("RatFuncRing", self.K))


def separable_x_parts(curve: WeierstrassCurve, n: int) -> list[tuple[Poly, int]]:
    """Separable polynomials over K whose roots (after taking p^e-th roots,
    e the attached level) are exactly the x-coordinates of the points of
    order dividing n (n > 1), other than O.

    Returns [(g, e)]: a root beta of g corresponds to x = beta^(1/p^e);
    for levels e > 0 the root extraction happens place-locally.
    """
    f = division_poly_x(curve, n)
    if n % 2 == 0:
        f = f * two_torsion_x_poly(curve)
    return _separable_parts(f, curve.K)


def _separable_parts(f: Poly, K: FunctionField, level: int = 0) -> list[tuple[Poly, int]]:
    p = K.constfield.p
    out = []
    work = f
    while True:
        d = work.derivative()
        if work.degree <= 0:
            break
        if d.is_zero():
            # work = g(x^p): descend one Frobenius level
            coeffs = [work[i] for i in range(0, work.degree + 1, p)]
            RK = work.ring
            out.extend(_separable_parts(Poly(RK, coeffs), K, level + 1))
            break
        g = poly_gcd(work, d)
        w = _poly_quo(work, g)
        if w.degree > 0:
            out.append((w, level))
        if g.degree == work.degree:
            break
        work = g
    # merge duplicates at the same level
    merged: dict[int, Poly] = {}
    for g, e in out:
        if e in merged:
            merged[e] = _merge_squarefree(merged[e], g)
        else:
            merged[e] = g
    return [(g, e) for e, g in sorted(merged.items())]


def _poly_quo(a: Poly, b: Poly) -> Poly:
    q, r = divmod(a, b)
    if not r.is_zero():
        raise ArithmeticError("expected exact division")
    return q


def _merge_squarefree(a: Poly, b: Poly) -> Poly:
    g = poly_gcd(a, b)
    return a * _poly_quo(b, g)


def _separable_parts_result_fix(parts):
    return [(g, e) for e, g in parts] if parts and isinstance(parts[0][0], int) else parts


# ---------------------------------------------------------------------------
# torsion testing


class NotTorsionUpTo:
    __slots__ = ("bound",)

    def __init__(self, bound: int):
        self.bound = bound

    def __repr__(self):
        return f"NotTorsionUpTo({self.bound})"

    def __eq__(self, other):
        return isinstance(other, NotTorsionUpTo) and other.bound == self.bound


def good_ordinary_place(curve: WeierstrassCurve, skip=()) -> ReductionData:
    """A small good ordinary place of the curve (deterministic scan)."""
    key = ("good_ordinary", tuple(skip))
    if key in curve._misc:
        return curve._misc[key]
    red = _good_ordinary_place(curve, skip)
    curve._misc[key] = red
    return red


def _good_ordinary_place(curve: WeierstrassCurve, skip=()) -> ReductionData:
    K = curve.K
    F = K.constfield
    for deg in (1, 2, 3):
        for i in range(F.order**deg):
            coeffs = []
            k = i
            for _ in range(deg):
                coeffs.append(F.index_elem(k % F.order))
                k //= F.order
            h = Poly(F, coeffs + [F.one])
            from .funcfield.poly import is_irreducible

            if not is_irreducible(h):
                continue
            v = Place(K, h, _trusted=True)
            if any(v == s for s in skip):
                continue
            red = curve.reduction(v)
            if red.kind is ReductionKind.GOOD and is_ordinary(red):
                return red
    raise ArithmeticError("no small good ordinary place found")


def is_torsion(P: Point, bound: int):
    """The exact order of P if it is <= bound, else NotTorsionUpTo(bound).

    Uses a good place: prime-to-p torsion injects into the residue group, so
    the order must be (reduction order) * p^e.
    """
    if P.is_zero():
        return 1
    curve = P.curve
    red = good_ordinary_place(curve)
    Pbar = red.reduce_point(P)
    if Pbar == "identity":
        n0 = 1
    else:
        n0 = residue_point_order(red.res_field, red.Abar, red.Bbar, Pbar)
    p = curve.K.constfield.p
    n = n0
    while n <= bound:
        if (n * P).is_zero():
            # strip the p-part down to the exact order
            while n % p == 0 and ((n // p) * P).is_zero():
                n //= p
            return n
        n *= p
    return NotTorsionUpTo(bound)
