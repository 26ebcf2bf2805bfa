"""Golden values used by ``formalis reproduce``.

Each entry records the command that produced it.  Ideals are stored as
generator lists in the polynomial grammar and compared as ideals, so the
oracle's scaling of generators does not matter.  ``tests/oracle.py`` is a
sympy implementation that shares no code with this package.
"""

# oracle: python tests/oracle.py  (sympy groebner, method f5b, saturation via u*x - 1)
# pi_2(J_N) for y + sum_{i<N} i! x^-i t^i over Q[x, y, t]
COUNTEREXAMPLE_PI2 = {
    2: ["x*y + t", "t^2", "y*t", "y^2"],
    3: ["x*y - 2*y*t + t", "t^2", "y^2*t", "y^3"],
    4: ["x*y^2 + x*y - y*t + t", "x*y + 2*y^2*t - 2*y*t + t", "t^2", "x*t + x^2*y",
        "x*y*t", "y^4"],
    5: ["2*x*y^2 + x*y - 2*y^2*t + t", "4*y^3*t - 2*y^2*t + 2*y*t - t - x*y", "t^2",
        "x*t + x^2*y", "x*y*t", "y^5"],
    6: ["4*x*y^3 + 6*x*y^2 + x*y - 6*y^2*t + 4*y*t + t",
        "4*y^3*t + 4*x*y^2 + x*y - 6*y^2*t + 2*y*t + t", "t^2", "x*t + x^2*y", "x*y*t",
        "y^6"],
}

# oracle: python tests/oracle.py  (same pipeline, f = y + x*t)
POLYNOMIAL_CONTROL_PI2 = ["y + x*t", "t^2", "y*t", "y^2"]

# oracle: sympy undetermined-coefficient jet in tests/oracle.py::separatrix_graph,
# pole multiplicity of w by repeated sympy division
JOUANOLOU3_POLE_PROFILE = {"direction": (1, 2, 3), "N": 4, "axis": "z",
                           "profile": [0, 0, 1, 2, 3]}

# oracle: tests/oracle.py::separatrix_graph on (x, y, z) at (0, 0, 1), N = 5;
# agrees with the binomial series of sqrt(1 - x^2 - y^2) - 1
SPHERE_JET = "-1/8*x^4 - 1/4*x^2*y^2 - 1/8*y^4 - 1/2*x^2 - 1/2*y^2"

# hand derivation: (xy)^2 = (x^2 y^2) and x^2 never divides x*y^n
NONADIC_XY = {"chain": [["x*y"], ["x*y^2"], ["x*y^3"], ["x*y^4"]], "candidate": ["x*y"],
              "n_max": 2, "forward": {1: 1, 2: None}, "failure_m": 2}

# hand derivation: t^2 lies in every level but not in I_1^2
EMBEDDED_POINTS = {"points": [1, 2, 3, 4], "n_max": 2, "failure_m": 2}

# hand derivation for seeds y^E: the y-degree-0 obstruction appears at order E+1 at x^-(E+1)
COUNTEREXAMPLE_OBSTRUCTIONS = {0: (1, (-1, 0)), 1: (2, (-2, 0)), 2: (3, (-3, 0)),
                               3: (4, (-4, 0))}

# oracle: python tests/oracle.py saturate() on the cleared numerators
LINE_CLOSURES = [
    {"f": "x*t", "N": 4, "ideal": ["t"]},
    {"f": "x^-1*t", "N": 4, "ideal": ["t"]},
    {"f": "x + t", "N": 3, "ideal": ["1"]},
]

# hand derivation: geometric series of 1/(x + t)
INVERSE_X_PLUS_T = ["x^-1", "-x^-2", "x^-3", "-x^-4", "x^-5", "-x^-6"]

# hand derivation: m^(2n) contains I_ceil(n/2); intersection of (x) + m^n is (x)
CHEVALLEY = {"cofinal_witness": {1: 1, 2: 1, 3: 2, 4: 2}, "intersection": ["x"],
             "stable_from": 2}
