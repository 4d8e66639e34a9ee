"""Hand-transcribed reference values shared by several test files."""

from __future__ import annotations

from ffrt.field_poly import Ring
from ffrt.relmat import PolyMatrix

# M(x^2 + xy, 1) at p = 3, rows and columns ordered
# 1, x, x^2, y, yx, yx^2, y^2, y^2x, y^2x^2
REFERENCE_9X9 = """
0 x 0 0 0 0 0 0 x*y
0 0 x 0 0 0 y 0 0
1 0 0 0 0 0 0 y 0
0 0 x 0 x 0 0 0 0
1 0 0 0 0 x 0 0 0
0 1 0 1 0 0 0 0 0
0 0 0 0 0 x 0 x 0
0 0 0 1 0 0 0 0 x
0 0 0 0 1 0 1 0 0
"""

# exponent vectors (a, b) of x^a y^b in the order above
REFERENCE_ORDER = ((0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1), (0, 2), (1, 2), (2, 2))


def reference_matrix(ring: Ring) -> PolyMatrix:
    rows = [line.split() for line in REFERENCE_9X9.strip().splitlines()]
    return PolyMatrix.from_rows(ring, [[ring.parse(c) for c in row] for row in rows])
