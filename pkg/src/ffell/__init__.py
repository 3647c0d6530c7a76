"""ffell: exact local heights, skeleton graphs and equidistribution bounds
for elliptic curves over rational function fields F_q(t), q = p^d, p >= 5.

Everything is exact: valuations are integers, logarithmic quantities are
rationals under the convention log|a|_v = -deg(v) * ord_v(a), and every
identity or inequality in the verification suites is decided by exact
rational comparison.
"""

__version__ = "0.1.0"
