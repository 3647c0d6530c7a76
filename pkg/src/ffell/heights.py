"""Local height functions d, i, j, lambda and the global heights h, hhat.

Every value is an exact Fraction in the base-normalized log scale
log|a|_v = -deg(v) ord_v(a).  The local lambda at a place is computed from
the reduction data alone (minimal model, kernel valuations, component
index); the skeleton part only ever needs the second Bernoulli polynomial,
which is insensitive to the orientation of the skeleton circle, so no
series inversion is required on this path.  The decomposition
lambda(P-Q) = i(P,Q) + j(P,Q) then holds as an exact identity between two
genuinely different computation routes, which the test suite exploits.

The global canonical height is the sum of local terms; at good places away
from the discriminant support it reduces to pole-degree counting of the
x-coordinate, so no large polynomial factorizations are needed.
"""
from __future__ import annotations

from fractions import Fraction

from .berkgraph import bernoulli_phi
from .elliptic import (
    Point,
    ReductionData,
    ReductionKind,
    UnsupportedPlaceError,
    WeierstrassCurve,
)
from .funcfield import (
    ConstantExtension,
    LSeries,
    Place,
    PlaceData,
    RatFunc,
    hensel_root,
    ord_at,
)

INFINITE = Fraction(10**30)  # marker for -log 0 (coincident points)


def _ord_or_big(a: RatFunc, v: Place) -> Fraction:
    # ord_v(a), with the zero function counting as infinitely divisible
    if a.is_zero():
        return INFINITE
    return Fraction(ord_at(a, v))


def weil_height(a: RatFunc) -> Fraction:
    """Absolute Weil height of an element of F_{q^m}(t): the sum over all
    places of the pole degrees, which is max(deg num, deg den)."""
    if a.is_zero():
        return Fraction(0)
    return Fraction(max(a.num.degree, a.den.degree))


def h_j(curve: WeierstrassCurve) -> Fraction:
    if "h_j" not in curve._misc:
        curve._misc["h_j"] = weil_height(curve.j)
    return curve._misc["h_j"]


def skeleton_length(curve: WeierstrassCurve, v: Place) -> Fraction:
    """ell_v = log^+ |j|_v (positive exactly at multiplicative places)."""
    red = curve.reduction(v)
    return Fraction(v.scale_deg * red.skeleton_length_ord)


# ---------------------------------------------------------------------------
# split-multiplicative local data, chart-free


def _node_center(red: ReductionData):
    """A series c* with ord(X' - c*) = min(c, N-c) for singular points of
    component c, correct modulo pi^N: half the negated Hensel lift of the
    simple root of the residue cubic (the three roots sum to zero, and the
    two near-node roots straddle the node center symmetrically to order N)."""
    key = ("node_center", red.place)
    cache = red.curve._misc
    if key not in cache:
        prec = red.N + 2
        data = PlaceData(red.place, prec + 2)
        k = data.k
        coeffs = [data.expand(red.Bmin, prec), data.expand(red.Amin, prec),
                  LSeries.zero(k, prec), LSeries.const(k, k.one, prec)]
        # simple root of x^3 + Abar x + Bbar away from the double root
        e0 = -2 * red.node_x
        e = hensel_root(coeffs, e0, prec)
        half = k.elem(2).inverse()
        cache[key] = (data, -(e * half))
    return cache[key]


def _component_ord(red: ReductionData, D: Point) -> int:
    """min(c, N - c) for the component index c of a point with singular
    reduction: the valuation of the uniformized x-coordinate, with the rule
    that anything beyond N/2 means c = N/2 (cancellation happens only
    there)."""
    X, _ = red.min_coords(D)
    data, center = _node_center(red)
    xs = data.expand(X, red.N + 2)
    diff = xs - center
    a = red.N + 2 if diff.is_zero() else diff.ord
    if 2 * a > red.N:
        if red.N % 2:
            raise AssertionError("impossible x-valuation on the singular locus")
        return red.N // 2
    return a


def _resolve_split(P: Point, Q: Point | None, v: Place):
    """Return (red, P', Q', place') over a constant extension where the
    reduction at the place above v is split (identity extension if already
    split or not multiplicative)."""
    curve = P.curve
    red = curve.reduction(v)
    if red.kind is ReductionKind.ADD_POTMULT:
        raise UnsupportedPlaceError(
            "additive potentially multiplicative places need a ramified "
            "uniformization and are out of scope")
    if red.kind is not ReductionKind.NONSPLIT_MULT:
        return red, P, Q, v
    ext = ConstantExtension(curve.K, 2)
    w = ext.places_above(v)[0]
    P2 = P.base_change(ext)
    Q2 = Q.base_change(ext) if Q is not None else None
    red2 = P2.curve.reduction(w)
    if red2.kind is not ReductionKind.SPLIT_MULT:
        raise AssertionError("quadratic constant extension must split the node")
    return red2, P2, Q2, w


# ---------------------------------------------------------------------------
# the pairwise functions


def neg_log_d(P: Point, Q: Point, v: Place) -> Fraction:
    """-log d_v(P, Q) >= 0; INFINITE marker when P = Q.

    At additive potentially good places the metric is the one of the good
    model over the completed algebraic closure (x rescaled by the sixth
    root of the minimal discriminant), which makes the value the fractional
    quantity (1/2) max(0, N/6 - ord x) in ord units.
    """
    if P == Q:
        return INFINITE
    red, P, Q, v = _resolve_split(P, Q, v)
    D = P - Q
    if red.kind is ReductionKind.ADD_POTGOOD:
        X, _ = red.min_coords(D)
        return Fraction(v.scale_deg, 2) * max(
            Fraction(0), Fraction(red.N, 6) - _ord_or_big(X, red.place))
    if red.reduce_point(D) == "identity":
        return Fraction(v.scale_deg * red.kernel_z_ord(D))
    return Fraction(0)


def i_v(P: Point, Q: Point, v: Place) -> Fraction:
    """i(P,Q) = -log d_v(P,Q): positive iff the points share reduction and
    retraction."""
    return neg_log_d(P, Q, v)


def j_v(P: Point, Q: Point, v: Place) -> Fraction:
    """The skeleton pairing: zero at good places; on a skeleton circle of
    circumference ell it is (ell/2) Phi((r(P) - r(Q))/ell), computed from
    the component index of P - Q."""
    red, P, Q, v = _resolve_split(P, Q, v)
    if not red.kind.is_mult:
        if red.kind is ReductionKind.GOOD or red.kind is ReductionKind.ADD_POTGOOD:
            return Fraction(0)
        raise UnsupportedPlaceError("unsupported reduction type")
    ell = Fraction(v.scale_deg * red.N)
    if P == Q:
        return ell / 12
    D = P - Q
    if D.is_zero() or red.reduce_point(D) != "singular":
        # same component: r(P) = r(Q)
        return ell / 12
    c = _component_ord(red, D)
    return ell / 2 * bernoulli_phi(Fraction(c, red.N))


def lambda_v(P: Point, v: Place) -> Fraction:
    """The Neron local height of P != O at v, normalized so that the sum
    over all places is the canonical height."""
    if P.is_zero():
        raise ValueError("lambda is not defined at the identity")
    red, P, _, v = _resolve_split(P, None, v)
    s = v.scale_deg
    if red.kind is ReductionKind.GOOD:
        X, _ = red.min_coords(P)
        return Fraction(s, 2) * max(Fraction(0), -_ord_or_big(X, red.place))
    if red.kind is ReductionKind.SPLIT_MULT:
        N = red.N
        ell = Fraction(s * N)
        r = red.reduce_point(P)
        if r == "identity":
            return Fraction(s * red.kernel_z_ord(P)) + ell / 12
        if r == "singular":
            c = _component_ord(red, P)
            return ell / 2 * bernoulli_phi(Fraction(c, N))
        return ell / 12
    if red.kind is ReductionKind.ADD_POTGOOD:
        # over the completed algebraic closure the curve acquires good
        # reduction after rescaling x by |disc_min|^(1/6)
        X, _ = red.min_coords(P)
        return Fraction(s, 2) * max(Fraction(0),
                                    Fraction(red.N, 6) - _ord_or_big(X, red.place))
    raise UnsupportedPlaceError("unsupported reduction type")


def lambda_pair(P: Point, Q: Point, v: Place) -> Fraction:
    """lambda_v(P - Q); INFINITE marker when P = Q."""
    if P == Q:
        return INFINITE
    return lambda_v(P - Q, v)


# ---------------------------------------------------------------------------
# global heights


def _x_pole_term(P: Point, v: Place) -> Fraction:
    """(deg v) * max(0, -ord_v(x(P))), the naive good-place lambda doubled."""
    if P.is_zero():
        raise ValueError("identity")
    x = P.x
    if x.is_zero():
        return Fraction(0)
    return Fraction(v.scale_deg * max(0, -ord_at(x, v)))


def canonical_height(P: Point) -> Fraction:
    """hhat(P) = sum_v lambda_v(P) over all places, assembled as
    (1/2) h(x(P)) plus the finitely many local corrections at the
    discriminant support and infinity."""
    if P.is_zero():
        return Fraction(0)
    curve = P.curve
    key = ("hhat", P.x, P.y)
    if key in curve._misc:
        return curve._misc[key]
    total = weil_height(P.x) / 2 if not P.x.is_zero() else Fraction(0)
    places = list(curve.scrutiny_places()) + [Place(curve.K, None)]
    for v in places:
        total += lambda_v(P, v) - _x_pole_term(P, v) / 2
    curve._misc[key] = total
    return total


def canonical_height_of_difference_sum(points: list[Point]) -> Fraction:
    """(1/N^2) * sum over ordered pairs of hhat(P_m - P_n)."""
    n = len(points)
    total = Fraction(0)
    for a in points:
        for b in points:
            if a != b:
                total += canonical_height(a - b)
    return total / (n * n)


def is_torsion_point(P: Point, bound: int = 30):
    """Order if <= bound; definitive NotTorsion when hhat(P) > 0."""
    from .elliptic import NotTorsionUpTo, is_torsion

    res = is_torsion(P, bound)
    if isinstance(res, NotTorsionUpTo) and canonical_height(P) > 0:
        return None  # definitively nontorsion
    return res


def lambda_support_places(curve: WeierstrassCurve, points: list[Point]) -> list[Place]:
    """Places where some lambda_v(P) can be nonzero for P in the list:
    the scrutiny places, infinity, and the x-coordinate poles."""
    from ffell.funcfield import finite_places_of

    f = None
    for P in points:
        if P.is_zero():
            continue
        d = P.x.den
        f = d if f is None else f * d
    out = list(curve.scrutiny_places())
    seen = set(out)
    if f is not None and f.degree > 0:
        for v, _ in finite_places_of(curve.K, f):
            if v not in seen:
                out.append(v)
                seen.add(v)
    out.append(Place(curve.K, None))
    return out
