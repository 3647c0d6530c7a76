"""Tate uniformization at a split multiplicative place.

At such a place the curve is isomorphic over the completion to the uniform
model y^2 + xy = x^3 + a4(q) x + a6(q), where q is the unique parameter with
|q| = |1/j| and a4, a6 are the classical integer q-series reduced mod p
(char >= 5 keeps them integral).  The chart built here fixes one isomorphism
once per (curve, place, precision budget): q comes from Newton inversion of
the 1/j series, the model match is a single square root, and from then on
every point has a well-defined multiplicative parameter u modulo q^Z.  The
value -log|u| is the retraction onto the skeleton circle, and the symbolic
torsion classes zeta * q^(b/n) give exact pairwise local heights on it.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .berkgraph import bernoulli_phi
from .elliptic import (
    Point,
    ReductionData,
    ReductionKind,
    WeierstrassCurve,
    ec_add,
    ec_negate,
)
from .funcfield import (
    ExtField,
    FFElem,
    FiniteField,
    LSeries,
    PSeries,
    Place,
    PlaceData,
    PrecisionError,
    PrimeField,
    embed_elem,
    find_irreducible,
)


# ---------------------------------------------------------------------------
# universal q-expansions mod p (integer coefficients reduced)

_SERIES_CACHE: dict = {}


def _divisor_power_sums(M: int, k: int) -> list[int]:
    """[sigma_k(1), ..., sigma_k(M)]."""
    out = [0] * (M + 1)
    for d in range(1, M + 1):
        dk = d**k
        for m in range(d, M + 1, d):
            out[m] += dk
    return out[1:]


def tate_series(p: int, M: int) -> dict:
    """Truncated q-expansions over F_p: s1, a4, a6, and w = 1/j."""
    key = (p, M)
    if key in _SERIES_CACHE:
        return _SERIES_CACHE[key]
    F = PrimeField(p)
    s1 = _divisor_power_sums(M, 1)
    s3 = _divisor_power_sums(M, 3)
    s5 = _divisor_power_sums(M, 5)
    a4 = [0] + [-5 * c for c in s3]
    a6 = [0] + [-(5 * s3[n] + 7 * s5[n]) // 12 for n in range(M)]
    assert all((5 * s3[n] + 7 * s5[n]) % 12 == 0 for n in range(M))
    # eta(q)^24-like product: prod (1 - q^n)^24 truncated to q^M
    prod = [1] + [0] * M
    for n in range(1, M + 1):
        for _ in range(24):
            # multiply by (1 - q^n)
            for i in range(M, n - 1, -1):
                prod[i] = (prod[i] - prod[i - n]) % p
    # c4(q) = 1 - 48 a4(q); w = 1/j = q * prod / c4^3
    c4 = [(1 if n == 0 else (-48 * a4[n]) % p) for n in range(M + 1)]
    c4cube = _ps_mul(_ps_mul(c4, c4, M, p), c4, M, p)
    inv = _ps_inv(c4cube, M, p)
    w = [0] + _ps_mul(prod, inv, M - 1, p)[: M]
    res = {
        "s1": PSeries(F, [0] + [c % p for c in s1]),
        "a4": PSeries(F, [c % p for c in a4]),
        "a6": PSeries(F, [c % p for c in a6]),
        "w": PSeries(F, [c % p for c in w]),
        "w_deriv": PSeries(F, [(n * w[n]) % p for n in range(len(w))][1:]),
    }
    _SERIES_CACHE[key] = res
    return res


def _ps_mul(a, b, M, p):
    out = [0] * (M + 1)
    for i, x in enumerate(a[: M + 1]):
        if x == 0:
            continue
        for j, y in enumerate(b[: M + 1 - i]):
            if y:
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _ps_inv(a, M, p):
    if a[0] % p == 0:
        raise ZeroDivisionError("series with vanishing constant term")
    inv0 = pow(a[0], -1, p)
    out = [inv0] + [0] * M
    for m in range(1, M + 1):
        acc = 0
        for i in range(1, min(m, len(a) - 1) + 1):
            acc = (acc + a[i] * out[m - i]) % p
        out[m] = (-inv0 * acc) % p
    return out


# ---------------------------------------------------------------------------
# symbolic torsion classes


class TorsionClass:
    """u = zeta * q^(b/n) modulo q^Z, with zeta a root of unity of order
    prime to p.  Purely symbolic: enough for retractions and pairwise local
    heights of torsion points."""

    __slots__ = ("place", "b_over_n", "zeta")

    def __init__(self, place: Place, b_over_n: Fraction, zeta: FFElem):
        b = Fraction(b_over_n)
        if not 0 <= b < 1:
            raise ValueError("b/n must lie in [0, 1)")
        if b.denominator % place.K.constfield.p == 0:
            raise ValueError("denominator must be prime to p")
        if not zeta:
            raise ValueError("zeta must be a unit")
        self.place = place
        self.b_over_n = b
        self.zeta = zeta

    def __eq__(self, other):
        return (isinstance(other, TorsionClass) and other.place == self.place
                and other.b_over_n == self.b_over_n and other.zeta == self.zeta)

    def __hash__(self):
        return hash((self.place, self.b_over_n, self.zeta))

    def order(self) -> int:
        import math

        return math.lcm(self.b_over_n.denominator, self.zeta.field.mult_order(self.zeta))

    def __repr__(self):
        return f"zeta[{self.zeta!r}]*q^({self.b_over_n})"


def torsion_classes(curve: WeierstrassCurve, n: int, v: Place) -> list[TorsionClass]:
    """All n^2 classes of E[n] at a multiplicative place (n prime to p)."""
    K = curve.K
    p = K.constfield.p
    if n % p == 0:
        raise ValueError("n must be prime to the characteristic")
    red = curve.reduction(v)
    if not red.kind.is_mult:
        raise ValueError("torsion classes live at multiplicative places")
    k = red.res_field
    s = 1
    while (k.order**s - 1) % n:
        s += 1
    kk = k if s == 1 else ExtField(k, find_irreducible(k, s).coeffs)
    roots = kk.nth_roots_of_unity(n)
    return [TorsionClass(v, Fraction(b, n), z)
            for b in range(n) for z in roots]


def lambda_between_torsion(curve: WeierstrassCurve, T1: TorsionClass,
                           T2: TorsionClass, v: Place) -> Fraction:
    """The local height of the difference of two distinct torsion classes.

    Case split on the difference class zeta * q^d: d != 0 gives the skeleton
    value (ell/2) Phi(d); d = 0 with zeta != 1 gives ell/12 since a
    nontrivial prime-to-p root of unity has |zeta - 1| = 1.
    """
    if T1.place != v or T2.place != v:
        raise ValueError("classes carry a different place")
    red = curve.reduction(v)
    if not red.kind.is_mult:
        raise ValueError("multiplicative place required")
    ell = Fraction(v.scale_deg * red.N)
    d = (T1.b_over_n - T2.b_over_n) % 1
    if d != 0:
        return ell / 2 * bernoulli_phi(d)
    z1, z2 = T1.zeta, T2.zeta
    if z1.field != z2.field:
        z1, z2 = _common_field(z1, z2)
    if z1 == z2:
        raise ValueError("identical torsion classes have infinite local height")
    return ell / 12


def _common_field(z1: FFElem, z2: FFElem):
    try:
        return embed_elem(z1, z2.field), z2
    except Exception:
        return z1, embed_elem(z2, z1.field)


# ---------------------------------------------------------------------------
# the chart


class TateChart:
    """Fixed isomorphism (to precision) between E over the completion at a
    split multiplicative place and the uniform Tate model."""

    __slots__ = ("curve", "place", "red", "prec", "k", "N", "data",
                 "qhat", "a4T", "a6T", "s1T", "u_scale", "coeffsT",
                 "_ubar_gen", "_u_cache")

    def __init__(self, curve: WeierstrassCurve, v: Place, prec: int):
        red = curve.reduction(v)
        if red.kind is not ReductionKind.SPLIT_MULT:
            raise ValueError(f"not a split multiplicative place: {red.kind}")
        self.curve = curve
        self.place = v
        self.red = red
        self.prec = prec
        self.N = red.N
        self.k = red.res_field
        k = self.k
        p = k.p
        wp = red.place
        self.data = PlaceData(wp, prec + 2 * self.N + 4)
        M = prec // self.N + 4
        ser = tate_series(p, M)
        # Newton inversion of w(q) = 1/j(q), starting from w itself
        j_w = self.data.expand(red.curve.j, prec + self.N + 2)
        w_v = j_w.inverse()
        q = w_v
        for _ in range(64):
            val = ser["w"].eval_at(q) - w_v.truncate(min(w_v.prec, q.prec + self.N))
            if val.is_zero():
                break
            q = q - val / ser["w_deriv"].eval_at(q)
        else:
            raise PrecisionError("q-parameter iteration did not stabilize")
        if q.ord != self.N:
            raise AssertionError("ord(q) must equal -ord(j)")
        self.qhat = q
        self.a4T = ser["a4"].eval_at(q)
        self.a6T = ser["a6"].eval_at(q)
        self.s1T = ser["s1"].eval_at(q)
        one = LSeries.const(k, k.one, q.prec)
        self.coeffsT = (one, 0 * one, 0 * one, self.a4T, self.a6T)
        # match the minimal short model against the short Tate model
        c48 = k.elem(48).inverse()
        c864 = k.elem(864).inverse()
        c12 = k.elem(12).inverse()
        AT = self.a4T - LSeries.const(k, c48, q.prec)
        BT = (LSeries.const(k, c864, q.prec)
              - self.a4T * LSeries.const(k, c12, q.prec) + self.a6T)
        Av = self.data.expand(red.Amin)
        Bv = self.data.expand(red.Bmin)
        u2 = (BT * Av) / (Bv * AT)
        check = u2 * u2 - AT / Av
        if not check.is_zero():
            raise AssertionError("model match failed: u^4 != AT/Amin")
        self.u_scale = u2.sqrt()
        self._ubar_gen = None
        self._u_cache = {}

    # -- model maps -----------------------------------------------------------

    def to_tate(self, P: Point) -> tuple[LSeries, LSeries]:
        if P.is_zero():
            raise ValueError("the identity has no affine Tate coordinates")
        Xc, Yc = self.red.min_coords(P)
        Xs = self.data.expand(Xc)
        Ys = self.data.expand(Yc)
        u = self.u_scale
        Xt_short = u * u * Xs
        Yt_short = u * u * u * Ys
        k = self.k
        c12 = LSeries.const(k, k.elem(12).inverse(), Xt_short.prec + 1)
        half = k.elem(2).inverse()
        xT = Xt_short - c12
        yT = Yt_short - xT * half
        resid = (yT * yT + xT * yT) - (xT**3 + self.a4T * xT + self.a6T)
        if not resid.is_zero():
            raise AssertionError("point does not satisfy the Tate equation")
        return xT, yT

    # -- the parametrization series -------------------------------------------

    def _mterms(self, u: LSeries):
        """Yields (q^m * u, q^m / u, q^m as series) while relevant."""
        prec = min(u.prec, self.qhat.prec)
        s = abs(u.ord) if u.coeffs else 0
        qm = None
        for m in itertools.count(1):
            if (m * self.N) - s >= prec + self.N:
                return
            qm = self.qhat if qm is None else qm * self.qhat
            yield qm * u, qm / u, qm

    def X_at(self, u: LSeries) -> LSeries:
        one = self.k.one
        acc = u / ((1 - u) ** 2)
        for v, w, _ in self._mterms(u):
            acc = acc + v / ((1 - v) ** 2) + w / ((1 - w) ** 2)
        return acc - 2 * self.s1T.truncate(min(self.s1T.prec, acc.prec))

    def Y_at(self, u: LSeries) -> LSeries:
        acc = (u * u) / ((1 - u) ** 3)
        for v, w, _ in self._mterms(u):
            acc = acc + (v * v) / ((1 - v) ** 3) - w / ((1 - w) ** 3)
        return acc + self.s1T.truncate(min(self.s1T.prec, acc.prec))

    def Xu_at(self, u: LSeries) -> LSeries:
        acc = (1 + u) / ((1 - u) ** 3)
        for v, w, qm in self._mterms(u):
            acc = acc + qm * (1 + v) / ((1 - v) ** 3) - (w / u) * (1 + w) / ((1 - w) ** 3)
        return acc

    def Yu_at(self, u: LSeries) -> LSeries:
        acc = u * (2 + u) / ((1 - u) ** 4)
        for v, w, qm in self._mterms(u):
            acc = acc + qm * v * (2 + v) / ((1 - v) ** 4) + (w / u) * (1 + 2 * w) / ((1 - w) ** 4)
        return acc

    def phi_point(self, u: LSeries) -> tuple[LSeries, LSeries]:
        """Affine coordinates of the point with parameter u (u not in q^Z)."""
        return self.X_at(u), self.Y_at(u)

    # -- inverting the parametrization ----------------------------------------

    def _newton(self, F, dF, start: LSeries, goal: int) -> LSeries:
        u = start.lift_prec(goal)
        for _ in range(64):
            val = F(u)
            if val.is_zero():
                return u
            u = u - val / dF(u)
        raise PrecisionError("Newton iteration for u did not stabilize")

    def u_from_point(self, P: Point) -> LSeries:
        """The parameter u with phi(u) = P, normalized to 0 <= ord(u) < N.

        The residue of the point pins the reduction of u, a Newton iteration
        lifts it, and the result is verified against both coordinate series.
        """
        key = (P.x, P.y)
        if key in self._u_cache:
            return self._u_cache[key]
        xT, yT = self.to_tate(P)
        goal = min(xT.prec, yT.prec, self.qhat.prec)
        k = self.k
        if xT.coeffs and xT.ord < 0:
            # kernel of reduction: invert z = -x/y near u = 1
            z = -(xT / yT)
            u0 = (1 - z).inverse()
            u = self._newton(lambda s: self.X_at(s) + z * self.Y_at(s),
                             lambda s: self.Xu_at(s) + z * self.Yu_at(s),
                             u0, goal)
        else:
            xbar = xT.coeff(0)
            ybar = yT.coeff(0)
            if not xbar and not ybar:
                u = self._u_singular(xT, yT, goal)
            else:
                ubar = ybar / (xbar + ybar)
                if ubar == -k.one:
                    u = self._newton(lambda s: self.Y_at(s) - yT.truncate(min(yT.prec, s.prec + 1)),
                                     self.Yu_at, LSeries.const(k, ubar, 1), goal)
                else:
                    u = self._newton(lambda s: self.X_at(s) - xT.truncate(min(xT.prec, s.prec + 1)),
                                     self.Xu_at, LSeries.const(k, ubar, 1), goal)
        u = self.normalize(u)
        self._verify(u, xT, yT)
        self._u_cache[key] = u
        return u

    def _u_singular(self, xT, yT, goal) -> LSeries:
        """Singular reduction: translate by phi(pi^c * g) into the smooth
        locus, solve there, and undo the translation."""
        k = self.k
        a = xT.ord if xT.coeffs else self.N // 2
        cands = []
        for c in (a, self.N - a):
            if 0 < c < self.N and c not in cands:
                cands.append(c)
        for c in range(1, self.N):
            if c not in cands:
                cands.append(c)
        units = [k.one]
        gen = self._unit_gen()
        if gen is not None:
            units += [gen, gen * gen]
        last_err = None
        for c in cands:
            for g in units:
                u1 = LSeries(k, c, [g], goal + c)
                try:
                    x1, y1 = self.phi_point(u1)
                    Q = ec_add(self.coeffsT, (xT, yT), ec_negate(self.coeffsT, (x1, y1)))
                except (ZeroDivisionError, PrecisionError) as e:
                    last_err = e
                    continue
                if Q is None:
                    return u1
                xQ, yQ = Q
                try:
                    if xQ.coeffs and xQ.ord < 0:
                        z = -(xQ / yQ)
                        uq = self._newton(
                            lambda s: self.X_at(s) + z * self.Y_at(s),
                            lambda s: self.Xu_at(s) + z * self.Yu_at(s),
                            (1 - z).inverse(), goal)
                    else:
                        xbar, ybar = xQ.coeff(0), yQ.coeff(0)
                        if not xbar and not ybar:
                            continue  # still singular: wrong component guess
                        ubar = ybar / (xbar + ybar)
                        if ubar == -k.one:
                            uq = self._newton(
                                lambda s: self.Y_at(s) - yQ.truncate(min(yQ.prec, s.prec + 1)),
                                self.Yu_at, LSeries.const(k, ubar, 1), goal)
                        else:
                            uq = self._newton(
                                lambda s: self.X_at(s) - xQ.truncate(min(xQ.prec, s.prec + 1)),
                                self.Xu_at, LSeries.const(k, ubar, 1), goal)
                    u = self.normalize(uq * u1)
                    self._verify(u, xT, yT)
                    return u
                except (PrecisionError, AssertionError, ValueError, ZeroDivisionError) as e:
                    last_err = e
                    continue
        raise PrecisionError(f"could not invert the parametrization: {last_err}")

    def _unit_gen(self):
        for c in self.k.elements():
            if c and c != self.k.one and self.k.mult_order(c) == self.k.order - 1:
                return c
        return None

    def normalize(self, u: LSeries) -> LSeries:
        s = u.ord
        shift = s // self.N
        if shift:
            u = u * self.qhat ** (-shift)
        return u

    def _verify(self, u: LSeries, xT: LSeries, yT: LSeries):
        dx = self.X_at(u) - xT.truncate(min(xT.prec, u.prec))
        dy = self.Y_at(u) - yT.truncate(min(yT.prec, u.prec))
        if not dx.is_zero() or not dy.is_zero():
            raise PrecisionError("parameter fails coordinate verification")
        if min(dx.prec, dy.prec) < self.N + 2:
            raise PrecisionError("parameter verified to insufficient precision")

    # -- retraction -------------------------------------------------------------

    def r_parameter(self, P: Point) -> int:
        """Component index s = ord(u(P)) in [0, N)."""
        if P.is_zero():
            return 0
        u = self.u_from_point(P)
        return u.ord

    def r_sigma(self, P: Point) -> Fraction:
        """Retraction -log|u(P)| as a point of [0, ell), base-normalized."""
        return Fraction(self.place.scale_deg * self.r_parameter(P))

    @property
    def ell(self) -> Fraction:
        return Fraction(self.place.scale_deg * self.N)

    def j_roundtrip_defect_ord(self) -> int:
        """Precision to which j(qhat) reproduces j (for round-trip checks)."""
        p = self.k.p
        M = self.prec // self.N + 4
        ser = tate_series(p, M)
        w_back = ser["w"].eval_at(self.qhat)
        j_v = self.data.expand(self.red.curve.j, w_back.prec - 2 * self.N)
        diff = w_back.inverse() - j_v
        if diff.is_zero():
            return diff.prec
        return diff.ord


def tate_chart(curve: WeierstrassCurve, v: Place, prec: int | None = None) -> TateChart:
    red = curve.reduction(v)
    budget = prec if prec is not None else 4 * red.N + 8
    key = ("tate", v, budget)
    if key not in curve._misc:
        curve._misc[key] = TateChart(curve, v, budget)
    return curve._misc[key]


def with_precision_retry(curve: WeierstrassCurve, v: Place, fn, prec: int | None = None):
    """Run fn(chart) with the default budget, doubling on precision loss."""
    red = curve.reduction(v)
    budget = prec if prec is not None else 4 * red.N + 8
    last = None
    for _ in range(4):
        try:
            return fn(tate_chart(curve, v, budget))
        except PrecisionError as e:
            last = e
            budget *= 2
    raise PrecisionError(f"budget exhausted at {budget//2}: {last}")


def q_from_j(curve: WeierstrassCurve, v: Place, prec: int | None = None) -> LSeries:
    """The Tate parameter q as a series at v (split multiplicative)."""
    return tate_chart(curve, v, prec).qhat


def u_from_point(P: Point, v: Place, prec: int | None = None) -> LSeries:
    return with_precision_retry(P.curve, v, lambda ch: ch.u_from_point(P), prec)


def r_sigma(P: Point, v: Place, prec: int | None = None) -> Fraction:
    """Retraction of P onto the skeleton circle R/(ell)Z at v."""
    return with_precision_retry(P.curve, v, lambda ch: ch.r_sigma(P), prec)