"""Finite metrized subgraphs of the analytic curve, and exact integration.

A graph here is a skeleton circle of rational circumference ell >= 0 (a
point when ell = 0) together with finitely many trees hanging off it, one
per connected component of the complement that carries marked points.  Trees
are canonical: branches toward two anchors share an initial segment whose
length is the ultrametric gluing value min(i(a,b), depth_a, depth_b).

Functions on a graph are piecewise polynomials of degree <= 2 with rational
breakpoints and coefficients, so every integral, inner product and L^2 norm
below is an exact rational.  Test functions are continuous; step functions
(jump discontinuities, degree <= 1) cover the comparison functions used by
the equidistribution bounds.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable


INF = Fraction(10**18)  # sentinel for "effectively infinite" pair closeness


def bernoulli_psi(x) -> Fraction:
    """First periodic Bernoulli polynomial x - [x] - 1/2."""
    x = Fraction(x)
    return x - Fraction(x.numerator // x.denominator) - Fraction(1, 2)


def bernoulli_phi(x) -> Fraction:
    """Second periodic Bernoulli polynomial (x-[x])^2 - (x-[x]) + 1/6."""
    x = Fraction(x)
    f = x - Fraction(x.numerator // x.denominator)
    return f * f - f + Fraction(1, 6)


# ---------------------------------------------------------------------------
# piecewise polynomials on an interval [0, L] or a circle of length L


class PiecewisePoly:
    """Pieces (x_i, coeffs) valid on [x_i, x_{i+1}); coeffs ascending, exact.

    On a circle the final piece wraps to x_0 + L.  Evaluation at a breakpoint
    uses the piece starting there (right-continuous); integrals ignore the
    convention.
    """

    __slots__ = ("L", "circle", "pieces")

    def __init__(self, L, pieces, circle: bool):
        self.L = Fraction(L)
        self.circle = circle
        cleaned = []
        for x, cs in pieces:
            x = Fraction(x)
            cs = tuple(Fraction(c) for c in cs)
            while cs and cs[-1] == 0:
                cs = cs[:-1]
            cleaned.append((x, cs))
        cleaned.sort(key=lambda t: t[0])
        if not cleaned or cleaned[0][0] != 0:
            raise ValueError("pieces must start at 0")
        self.pieces = tuple(cleaned)

    @staticmethod
    def constant(L, c, circle=False) -> "PiecewisePoly":
        return PiecewisePoly(L, [(0, (Fraction(c),))], circle)

    def _locate(self, x: Fraction) -> int:
        lo, hi = 0, len(self.pieces)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.pieces[mid][0] <= x:
                lo = mid
            else:
                hi = mid
        return lo

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        if self.circle:
            x = x % self.L if self.L else Fraction(0)
        if not 0 <= x <= self.L:
            raise ValueError("evaluation outside the domain")
        if x == self.L and not self.circle:
            idx = len(self.pieces) - 1
        else:
            idx = self._locate(x)
        acc = Fraction(0)
        for c in reversed(self.pieces[idx][1]):
            acc = acc * x + c
        return acc

    def _breaks(self):
        return [p[0] for p in self.pieces] + [self.L]

    def degree(self) -> int:
        return max((len(cs) - 1 for _, cs in self.pieces if cs), default=-1)

    def _binary(self, other, fn) -> "PiecewisePoly":
        if isinstance(other, (int, Fraction)):
            other = PiecewisePoly.constant(self.L, other, self.circle)
        if other.L != self.L or other.circle != self.circle:
            raise ValueError("domain mismatch")
        xs = sorted({x for x, _ in self.pieces} | {x for x, _ in other.pieces})
        out = []
        for x in xs:
            a = self.pieces[self._locate(x)][1]
            b = other.pieces[other._locate(x)][1]
            out.append((x, fn(a, b)))
        return PiecewisePoly(self.L, out, self.circle)

    def __add__(self, other):
        return self._binary(other, _poly_add)

    __radd__ = __add__

    def __neg__(self):
        return PiecewisePoly(self.L, [(x, tuple(-c for c in cs)) for x, cs in self.pieces], self.circle)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PiecewisePoly.constant(self.L, other, self.circle)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return PiecewisePoly(
                self.L, [(x, tuple(c * a for a in cs)) for x, cs in self.pieces], self.circle
            )
        return self._binary(other, _poly_mul)

    __rmul__ = __mul__

    def derivative(self) -> "PiecewisePoly":
        """Piecewise derivative (defined off breakpoints)."""
        return PiecewisePoly(
            self.L,
            [(x, tuple((i + 1) * c for i, c in enumerate(cs[1:]))) for x, cs in self.pieces],
            self.circle,
        )

    def integral(self) -> Fraction:
        total = Fraction(0)
        breaks = self._breaks()
        for (x, cs), hi in zip(self.pieces, breaks[1:]):
            total += _poly_definite_integral(cs, x, hi)
        return total

    def is_continuous(self) -> bool:
        breaks = self._breaks()
        for i, (x, cs) in enumerate(self.pieces):
            if i == 0:
                continue
            prev = self.pieces[i - 1][1]
            if _poly_eval(prev, x) != _poly_eval(cs, x):
                return False
        if self.circle and self.pieces:
            if _poly_eval(self.pieces[-1][1], self.L) != _poly_eval(self.pieces[0][1], Fraction(0)):
                return False
        return True


def _poly_eval(cs, x):
    acc = Fraction(0)
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _poly_add(a, b):
    n = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else Fraction(0)) + (b[i] if i < len(b) else Fraction(0))
        for i in range(n)
    )


def _poly_mul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def _poly_definite_integral(cs, lo, hi):
    total = Fraction(0)
    for i, c in enumerate(cs):
        total += c * (hi ** (i + 1) - lo ** (i + 1)) / (i + 1)
    return total


# ---------------------------------------------------------------------------
# metrized graphs


class Segment:
    """One edge of a component tree: starts at ``depth0`` (distance from the
    skeleton along the branch), ends at ``depth0 + length``."""

    __slots__ = ("component", "eid", "depth0", "length", "parent", "anchors")

    def __init__(self, component, eid, depth0, length, parent, anchors):
        self.component = component
        self.eid = eid
        self.depth0 = Fraction(depth0)
        self.length = Fraction(length)
        self.parent = parent          # parent Segment or None (attached to skeleton)
        self.anchors = tuple(anchors)  # anchor keys whose branch passes through

    def __repr__(self):
        return f"Segment({self.component}:{self.eid}, [{self.depth0},{self.depth0 + self.length}])"


class MetrizedGraph:
    """Skeleton circle of circumference ``ell`` (possibly 0) plus component
    trees; every anchor is a (key, attach position, depth) triple glued by an
    ultrametric closeness oracle."""

    __slots__ = ("ell", "components", "segments", "anchor_branch")

    def __init__(self, ell, components, segments, anchor_branch):
        self.ell = Fraction(ell)
        self.components = components      # component key -> attach position (Fraction)
        self.segments = segments          # list[Segment]
        self.anchor_branch = anchor_branch  # anchor key -> (leaf segment, depth)

    @property
    def total_length(self) -> Fraction:
        return self.ell + sum(s.length for s in self.segments)

    @property
    def max_depth(self) -> Fraction:
        """Greatest distance of a graph point from the skeleton."""
        return max((s.depth0 + s.length for s in self.segments), default=Fraction(0))

    def component_segments(self, comp) -> list[Segment]:
        return [s for s in self.segments if s.component == comp]

    def branch_path(self, anchor_key) -> list[Segment]:
        """Segments from the skeleton out to the anchor's leaf."""
        seg, _ = self.anchor_branch[anchor_key]
        path = []
        while seg is not None:
            path.append(seg)
            seg = seg.parent
        return list(reversed(path))


def span_tree(ell, anchors, closeness) -> MetrizedGraph:
    """Build the canonical graph from anchors.

    ``anchors``: list of (key, component, attach_position, depth); depth must
    be a positive rational (points of the curve itself are at infinite
    distance, so a graph containing them would have infinite length).
    ``closeness(a, b)``: the shared-path closeness of two anchor keys in the
    same component (the i-value of the underlying points); must satisfy the
    ultrametric three-point condition.
    """
    components: dict = {}
    by_comp: dict = {}
    for key, comp, attach, depth in anchors:
        depth = Fraction(depth)
        if depth <= 0:
            raise ValueError("anchor depths must be positive rationals")
        if comp in components and components[comp] != Fraction(attach):
            raise ValueError("anchors of one component must share the attach point")
        components[comp] = Fraction(attach)
        by_comp.setdefault(comp, []).append((key, depth))

    def shared(a, da, b, db):
        c = Fraction(min(closeness(a, b), INF))
        val = min(c, da, db)
        if val < 0:
            raise ValueError("negative closeness")
        return val

    segments: list[Segment] = []
    anchor_branch: dict = {}
    eid = itertools.count()

    def build(comp, group, base, parent):
        # group: anchors whose branches all pass through the node at ``base``
        for k, d in group:
            if d == base:
                anchor_branch[k] = (parent, base)
        live = [(k, d) for k, d in group if d > base]
        if not live:
            return
        if len(live) == 1:
            k, d = live[0]
            seg = Segment(comp, next(eid), base, d - base, parent, [k])
            segments.append(seg)
            anchor_branch[k] = (seg, d)
            return
        vals = [shared(k1, d1, k2, d2)
                for (k1, d1), (k2, d2) in itertools.combinations(live, 2)]
        stop = min(vals + [d for _, d in live])
        if stop > base:
            # common trunk up to the first separation or anchor end
            seg = Segment(comp, next(eid), base, stop - base, parent,
                          [k for k, _ in live])
            segments.append(seg)
            build(comp, live, stop, seg)
            return
        # immediate separation at this node: cluster by "shared > base"
        # (an equivalence by the three-point condition)
        clusters: list[list] = []
        for k, d in live:
            for cl in clusters:
                if shared(k, d, cl[0][0], cl[0][1]) > base:
                    cl.append((k, d))
                    break
            else:
                clusters.append([(k, d)])
        if len(clusters) == 1:
            raise ValueError("closeness oracle violates the three-point condition")
        for cl in clusters:
            build(comp, cl, base, parent)

    for comp, group in by_comp.items():
        build(comp, group, Fraction(0), None)
    return MetrizedGraph(ell, components, segments, anchor_branch)


def retract_depth(graph: MetrizedGraph, comp, closeness_to_anchors):
    """Retraction of an outside point onto the graph.

    ``closeness_to_anchors``: anchor key -> i-value between the point and
    that anchor's underlying point (for anchors in the point's component).
    Returns (segment, absolute depth), or None when the point retracts to
    the skeleton (either an anchor-free component or zero closeness).
    """
    best_key, best = None, Fraction(0)
    seen = set()
    for seg in graph.segments:
        if seg.component != comp:
            continue
        for k in seg.anchors:
            if k in seen:
                continue
            seen.add(k)
            leaf_seg, leaf_depth = graph.anchor_branch[k]
            c = min(Fraction(min(closeness_to_anchors(k), INF)), leaf_depth)
            if c > best:
                best, best_key = c, k
    if best_key is None or best == 0:
        return None
    for seg in graph.branch_path(best_key):
        if seg.depth0 < best <= seg.depth0 + seg.length:
            return (seg, best)
    raise AssertionError("retraction depth outside the anchor branch")


# ---------------------------------------------------------------------------
# functions on graphs


class GraphFunction:
    """Skeleton part (piecewise on the circle; a constant when ell = 0) and
    one PiecewisePoly per segment in segment-local coordinates
    [0, length] measured from segment.depth0."""

    __slots__ = ("graph", "skeleton", "edge_parts")

    def __init__(self, graph: MetrizedGraph, skeleton, edge_parts: dict):
        self.graph = graph
        if graph.ell > 0 and not isinstance(skeleton, PiecewisePoly):
            raise ValueError("nontrivial skeleton needs a circle function")
        self.skeleton = skeleton  # PiecewisePoly (circle) or Fraction (point)
        self.edge_parts = dict(edge_parts)  # eid -> PiecewisePoly on [0, len]

    # -- evaluation ----------------------------------------------------------

    def value_at_skeleton(self, pos) -> Fraction:
        if self.graph.ell > 0:
            return self.skeleton(Fraction(pos) % self.graph.ell)
        return Fraction(self.skeleton)

    def value_on_segment(self, seg: Segment, depth) -> Fraction:
        part = self.edge_parts[seg.eid]
        return part(Fraction(depth) - seg.depth0)

    def value_at(self, point) -> Fraction:
        """point = (None, skeleton position) or (segment, absolute depth)."""
        seg, pos = point
        if seg is None:
            return self.value_at_skeleton(pos)
        return self.value_on_segment(seg, pos)

    # -- integrals -------------------------------------------------------------

    def integral_skeleton(self) -> Fraction:
        if self.graph.ell > 0:
            return self.skeleton.integral()
        return Fraction(0)

    def integral_graph(self) -> Fraction:
        total = self.integral_skeleton()
        for seg in self.graph.segments:
            total += self.edge_parts[seg.eid].integral()
        return total

    def integral_mu(self) -> Fraction:
        """Against the canonical measure: uniform on the circle, or the Dirac
        mass at the point skeleton."""
        if self.graph.ell > 0:
            return self.skeleton.integral() / self.graph.ell
        return Fraction(self.skeleton)

    def deriv_l2_skeleton(self) -> Fraction:
        if self.graph.ell == 0:
            return Fraction(0)
        d = self.skeleton.derivative()
        return (d * d).integral()

    def deriv_l2_segments(self) -> Fraction:
        total = Fraction(0)
        for seg in self.graph.segments:
            d = self.edge_parts[seg.eid].derivative()
            total += (d * d).integral()
        return total

    def deriv_l2_sq(self) -> Fraction:
        return self.deriv_l2_skeleton() + self.deriv_l2_segments()

    def inner_deriv_against(self, other: "GraphFunction") -> Fraction:
        """integral of F' * G over the graph (F = self, G = other)."""
        total = Fraction(0)
        if self.graph.ell > 0:
            total += (self.skeleton.derivative() * other.skeleton).integral()
        for seg in self.graph.segments:
            total += (self.edge_parts[seg.eid].derivative() * other.edge_parts[seg.eid]).integral()
        return total

    def __add__(self, other: "GraphFunction") -> "GraphFunction":
        if other.graph is not self.graph:
            raise ValueError("functions on different graphs")
        if self.graph.ell > 0:
            sk = self.skeleton + other.skeleton
        else:
            sk = Fraction(self.skeleton) + Fraction(other.skeleton)
        return GraphFunction(self.graph, sk,
                             {e: self.edge_parts[e] + other.edge_parts[e]
                              for e in self.edge_parts})

    def __mul__(self, c):
        c = Fraction(c)
        sk = self.skeleton * c if self.graph.ell > 0 else Fraction(self.skeleton) * c
        return GraphFunction(self.graph, sk,
                             {e: p * c for e, p in self.edge_parts.items()})

    __rmul__ = __mul__

    def is_continuous_test_function(self) -> bool:
        """Continuity across all breakpoints, nodes and attach points, plus
        the degree <= 2 requirement."""
        if self.graph.ell > 0:
            if not self.skeleton.is_continuous() or self.skeleton.degree() > 2:
                return False
        for seg in self.graph.segments:
            part = self.edge_parts[seg.eid]
            if not part.is_continuous() or part.degree() > 2:
                return False
            if part.L != seg.length:
                return False
            if seg.parent is None:
                base_val = self.value_at_skeleton(self.graph.components[seg.component])
            else:
                parent_part = self.edge_parts[seg.parent.eid]
                base_val = parent_part(seg.parent.length)
            if part(Fraction(0)) != base_val:
                return False
        return True


def zero_function(graph: MetrizedGraph) -> GraphFunction:
    sk = PiecewisePoly.constant(graph.ell, 0, circle=True) if graph.ell > 0 else Fraction(0)
    return GraphFunction(graph, sk, {s.eid: PiecewisePoly.constant(s.length, 0) for s in graph.segments})


# ---------------------------------------------------------------------------
# the comparison functions of the equidistribution argument


def g_sigma(positions: Iterable, ell) -> PiecewisePoly:
    """G(x) = -(1/N) * sum_n Psi_ell(p_n - x) on the circle of length ell:
    piecewise linear with slope 1/ell, unit-mass jumps at the p_n, mean 0."""
    ell = Fraction(ell)
    if ell <= 0:
        raise ValueError("needs a positive skeleton length")
    ps = [Fraction(p) % ell for p in positions]
    n = len(ps)
    if n == 0:
        raise ValueError("needs at least one position")
    breaks = sorted(set(ps) | {Fraction(0)})
    pieces = []
    for x0 in breaks:
        # on (x0, next): G(x) = -(1/N) sum (p - x)/ell - floor((p-x)/ell) - 1/2
        # with floor constant on the open interval; evaluate via a midpoint
        nxt = min((b for b in breaks if b > x0), default=ell)
        mid = (x0 + nxt) / 2
        # -Psi((p-x)/ell) = x/ell - p/ell + floor((p-x)/ell) + 1/2, with the
        # floor constant on the open interval (evaluated at its midpoint)
        const = Fraction(0)
        for p in ps:
            val = (p - mid) / ell
            const += Fraction(val.numerator // val.denominator) + Fraction(1, 2)
        c0 = const - sum(ps) / ell
        pieces.append((x0, (c0 / n, Fraction(1, 1) / ell)))
    return PiecewisePoly(ell, pieces, circle=True)


def g_segments(graph: MetrizedGraph, covering: list) -> GraphFunction:
    """G(x) = (1/N) * sum_n chi_{[sigma_n, gamma_n]}(x) off the skeleton.

    ``covering``: list of retractions (segment, depth) as produced by
    ``retract_depth``; ``None`` entries (points retracting to the skeleton)
    contribute nothing.
    """
    n = len(covering)
    counts: dict = {}
    for r in covering:
        if r is None:
            continue
        seg, depth = r
        if seg is None:
            continue
        # the path [skeleton, depth] covers all ancestor segments fully and
        # the final one up to ``depth``
        cur = seg
        while cur is not None:
            upto = depth if cur is seg else cur.depth0 + cur.length
            counts.setdefault(cur.eid, []).append(upto)
            cur = cur.parent
    sk = PiecewisePoly.constant(graph.ell, 0, circle=True) if graph.ell > 0 else Fraction(0)
    parts = {}
    for seg in graph.segments:
        ends = counts.get(seg.eid, [])
        if not ends:
            parts[seg.eid] = PiecewisePoly.constant(seg.length, 0)
            continue
        # step function: value = #{ends >= depth} / n on [0, length] local coords
        local = sorted(set(Fraction(e) - seg.depth0 for e in ends))
        pieces = [(Fraction(0), (Fraction(len(ends), n),))]
        for b in local:
            if b < seg.length:
                val = Fraction(sum(1 for e in ends if Fraction(e) - seg.depth0 > b), n)
                pieces.append((b, (val,)))
        parts[seg.eid] = PiecewisePoly(seg.length, pieces, circle=False)
    return GraphFunction(graph, sk, parts)
