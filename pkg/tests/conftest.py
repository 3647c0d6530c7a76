"""Shared fixtures: curves over F_5(t) / F_7(t) with known rational points.

Curves are engineered so that fixed points lie on them exactly (solve the
Weierstrass equation for a6); the reduction landscape of each is pinned in
the tests that use it.
"""

import random

import pytest

from ffell.funcfield import FunctionField, Place, PrimeField
from ffell.elliptic import WeierstrassCurve


@pytest.fixture(scope="session")
def K5():
    return FunctionField(PrimeField(5))


@pytest.fixture(scope="session")
def K7():
    return FunctionField(PrimeField(7))


@pytest.fixture(scope="session")
def curve_A(K5):
    """y^2 + xy = x^3 + t: split mult at (t) and (t+3), additive at inf."""
    return WeierstrassCurve(K5, 1, 0, 0, 0, "t")


@pytest.fixture(scope="session")
def curve_M(K5):
    """y^2 + xy = x^3 + t^2: split mult of period 2 at (t), a degree-2
    multiplicative place, potentially good at infinity; rational points."""
    return WeierstrassCurve(K5, 1, 0, 0, 0, "t^2")


@pytest.fixture(scope="session")
def pts_M(curve_M):
    P = curve_M.point("1", "t+2")      # nonsingular reduction at (t)
    P0 = curve_M.point("0", "t")       # reduces to the node at (t)
    return P, P0


@pytest.fixture(scope="session")
def curve_7(K7):
    """y^2 + xy = x^3 + 2t^2 - t^3 over F_7, passing through (t, t)."""
    return WeierstrassCurve(K7, 1, 0, 0, 0, "2*t^2-t^3")


@pytest.fixture(scope="session")
def pts_7(curve_7):
    return (curve_7.point("t", "t"),)


@pytest.fixture(scope="session")
def curve_iso(K5):
    """y^2 = x^3 + (t - t^2)x: additive potentially good everywhere,
    rational 2-torsion (0,0), nontorsion (t,t)."""
    return WeierstrassCurve(K5, 0, 0, 0, "t-t^2", "0")


@pytest.fixture(scope="session")
def curve_bir(K5):
    """y^2 = (x - t^2)(x^2 + t^2 x + 3t^4 + 2): multiplicative reduction at
    every bad place (split at (t^4+3), nonsplit at infinity), 2-torsion
    (t^2, 0), and the nontorsion point (3t^2, 3t) of height 1."""
    t = K5.t
    r = t * t
    s = 3 * t**4 + 2
    return WeierstrassCurve(K5, 0, 0, 0, s - r * r, -(r * s))


@pytest.fixture(scope="session")
def curve_ns(K5):
    """y^2 = (x - t^2)(x^2 + t^2 x + 3t^4 + t^2 + 1): semistable with two
    nonsplit multiplicative places of period 2, a split degree-2 place and a
    nonsplit infinity; 2-torsion (t^2, 0) and the point (t^2+2, 3t)."""
    t = K5.t
    r = t * t
    s = 3 * t**4 + t * t + 1
    return WeierstrassCurve(K5, 0, 0, 0, s - r * r, -(r * s))


def pool_of_points(P, Q=None, span=3):
    """Small combinations a*P + b*Q for sampling."""
    out = []
    rng = range(-span, span + 1)
    for a in rng:
        for b in rng if Q is not None else [0]:
            if a == 0 and b == 0:
                continue
            R = a * P + (b * Q if Q is not None else P.curve.zero())
            if not R.is_zero() and R not in out:
                out.append(R)
    return out
