"""Coordinates and weights of the H(5,4) certificate, as given in the reference data."""

# the Hermitian form is x1^3 + ... + x6^3 over GF(4) = {0, 1, a, a^2}

STABILISED_VECTORS = [
    "(0,1,1,0,a,a)",
    "(1,a^2,1,0,0,a)",
    "(1,0,0,1,a^2,a)",
    "(0,0,1,a,a,a^2)",
    "(1,a^2,1,0,0,1)",
    "(1,a^2,a^2,a,a,1)",
    "(1,1,0,1,0,1)",
    "(1,1,a,a,1,a^2)",
]

# orbit representatives, orbits 1..34 in reference order (row by row)
ORBIT_REPS = [
    "(1,1,0,0,0,0)",
    "(0,0,0,0,1,1)",
    "(0,0,0,0,1,a)",
    "(0,0,0,0,1,a^2)",
    "(0,0,0,1,0,1)",
    "(0,0,0,1,0,a^2)",
    "(0,0,0,1,1,0)",
    "(0,0,0,1,a,0)",
    "(0,0,0,1,a^2,0)",
    "(0,0,1,0,0,1)",
    "(0,0,1,0,0,a^2)",
    "(0,0,1,0,a^2,0)",
    "(0,0,1,1,1,1)",
    "(0,0,1,1,1,a)",
    "(0,0,1,1,1,a^2)",
    "(0,0,1,a,a,1)",
    "(0,0,1,a,a,a)",
    "(0,0,1,a,a,a^2)",
    "(0,0,1,a,a^2,1)",
    "(0,0,1,a,a^2,a)",
    "(0,0,1,a^2,0,0)",
    "(0,0,1,a^2,a^2,1)",
    "(0,0,1,a^2,a^2,a)",
    "(0,1,0,1,a,1)",
    "(0,1,0,a,0,0)",
    "(0,1,0,a,a,1)",
    "(0,1,0,a,a,a^2)",
    "(0,1,0,a^2,1,a^2)",
    "(0,1,a,1,a^2,0)",
    "(0,1,a,a,1,0)",
    "(1,0,0,1,a^2,a)",
    "(1,0,a,0,1,a^2)",
    "(1,0,a^2,a,0,a^2)",
    "(1,a^2,1,0,0,a)",
]

WEIGHTS = [
    5, 0, -2, 0, -7, 3, 16, 0, 2, 0, 10, 0, 0, 0, 24, 12, 0, 36, 0, 0,
    -9, 6, -6, -6, 0, 0, 2, -8, 6, 24, -12, 0, 0, 0,
]  # fmt: skip

TIGHT_VALUE = 36
GROUP_ORDER = 144
ORBIT_COUNT = 34

# 1-based orbit numbers
ORBIT_LINE = 30
ORBIT_POINT = 34
ORBITS_PLANE = (14, 31, 33)
ORBIT_OVOID_TRIPLE = 14
SURVIVING = (2, 4, 8, 10, 12, 13, 14, 15, 16, 18, 19, 25, 26, 32)
INSIDE_W5 = (16, 18, 25, 32)
FINAL_VARIABLE = 15
FORCED_VALUE = (3, 2)  # the O_{W2,S} count forced by the orbit equations
