"""Independent reference computations built on sympy.

None of this touches formalis internals: ideals go through sympy's own
Gröbner engine (f5b), separatrix jets through undetermined coefficients
and sympy's linear solver.  Run ``python tests/oracle.py`` to print the
golden values frozen in the test-suite.
"""

from __future__ import annotations

import sys

import sympy as sp


def sym(text: str):
    return sp.sympify(text.replace("^", "**"))


def gb(gens, variables, order="grevlex"):
    gens = [sym(g) if isinstance(g, str) else g for g in gens]
    gens = [g for g in gens if g != 0]
    if not gens:
        return []
    G = sp.groebner(gens, *variables, order=order, method="f5b")
    return [sp.expand(g) for g in G.exprs]


def eliminate(gens, variables, drop):
    keep = [v for v in variables if v not in drop]
    G = gb(gens, list(drop) + keep, order="lex")
    free = [g for g in G if not (g.free_symbols & set(drop))]
    return gb(free, keep) if free else []


def saturate(gens, variables, f):
    u = sp.Symbol("u_oracle")
    gens = [sym(g) if isinstance(g, str) else g for g in gens]
    f = sym(f) if isinstance(f, str) else f
    return eliminate(gens + [u * f - 1], [u] + list(variables), [u])


def in_ideal(p, gens, variables):
    G = sp.groebner([sym(g) if isinstance(g, str) else g for g in gens], *variables,
                    order="grevlex", method="f5b")
    return G.contains(sym(p) if isinstance(p, str) else p)


def as_strings(exprs, variables):
    return sorted(str(sp.Poly(e, *variables).as_expr()) for e in exprs)


def counterexample_truncation(N, a=sp.factorial):
    x, y, t = sp.symbols("x y t")
    f = y + sum(a(i) * x ** (-i) * t ** i for i in range(1, N))
    return sp.expand(f * x ** (N - 1))


def saturation_profile(N_max, M, a=sp.factorial, f_cleared=None):
    """Reduced grevlex bases of pi_M(J_N) for N = M..N_max."""
    x, y, t = sp.symbols("x y t")
    out = {}
    for N in range(M, N_max + 1):
        q = f_cleared(N) if f_cleared else counterexample_truncation(N, a)
        J = saturate([q, t ** N], [x, y, t], x)
        out[N] = gb(J + [t ** M], [x, y, t])
    return out


def separatrix_graph(w, base, N, w_symbol=None):
    """Undetermined-coefficient jet of the leaf through ``base``.

    Picks the solved coordinate as the first of z, y, x with a nonzero form
    component at ``base``; returns {(i, j): coefficient} of phi in the two
    remaining centred coordinates, total degrees 1..N.
    """
    X = sp.symbols("x y z")
    comps = [sym(c) for c in w]
    at = [c.subs(dict(zip(X, base))) for c in comps]
    axis = next(i for i in (2, 1, 0) if sp.simplify(at[i]) != 0)
    free = [i for i in range(3) if i != axis]
    u, v = sp.symbols("u_o v_o")
    unknowns = {}
    phi = 0
    for k in range(1, N + 1):
        cs = {(i, k - i): sp.Symbol(f"c_{i}_{k - i}") for i in range(k + 1)}
        trial = phi + sum(c * u ** i * v ** j for (i, j), c in cs.items())
        point = [None] * 3
        point[free[0]] = base[free[0]] + u
        point[free[1]] = base[free[1]] + v
        point[axis] = base[axis] + trial
        sub = dict(zip(X, point))
        W = [sp.expand(c.subs(sub)) for c in comps]
        ru = sp.expand(W[free[0]] + W[axis] * sp.diff(trial, u))
        rv = sp.expand(W[free[1]] + W[axis] * sp.diff(trial, v))
        eqs = []
        for r in (ru, rv):
            P = sp.Poly(r, u, v)
            for (i, j), c in P.terms():
                if i + j == k - 1:
                    eqs.append(c)
        sol = sp.solve(eqs, list(cs.values()), dict=True)
        assert len(sol) == 1, "separatrix coefficients not uniquely determined"
        for key, c in cs.items():
            val = sp.factor(sp.cancel(sol[0][c]))
            unknowns[key] = val
            phi += val * u ** key[0] * v ** key[1]
    return axis, {key: val for key, val in unknowns.items() if val != 0}


def pole_profile(coeffs, w, N):
    prof = [0] * (N + 1)
    for (i, j), c in coeffs.items():
        den = sp.denom(sp.cancel(c))
        k = 0
        while sp.rem(den, w, w) == 0 and den != 0:
            den = sp.quo(den, w, w)
            k += 1
        prof[i + j] = max(prof[i + j], k)
    return prof


def jouanolou(m):
    return (f"x^{m - 1}*z - y^{m}", f"y^{m - 1}*x - z^{m}", f"z^{m - 1}*y - x^{m}")


def main(argv):
    x, y, t = sp.symbols("x y t")
    print("# saturation profile, counterexample a_i = i!, M = 2")
    for N, G in saturation_profile(6, 2).items():
        print(N, as_strings(G, [x, y, t]))
    print("# J_2 of y + x^-1 t")
    print(as_strings(saturate([x * y + t, t ** 2], [x, y, t], x), [x, y, t]))
    print("# polynomial control y + x t, M = 2")
    for N, G in saturation_profile(5, 2, f_cleared=lambda N: y + x * t).items():
        print(N, as_strings(G, [x, y, t]))
    w = sp.Symbol("w")
    print("# Jouanolou m=3 family along (1,2,3), N=4")
    axis, co = separatrix_graph(jouanolou(3), [w, 2 * w, 3 * w], 4)
    print("axis", axis, "profile", pole_profile(co, w, 4))
    print("# sphere jet")
    print(separatrix_graph(("x", "y", "z"), [0, 0, 1], 5))


if __name__ == "__main__":
    main(sys.argv[1:])
