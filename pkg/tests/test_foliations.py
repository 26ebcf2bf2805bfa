import random
from fractions import Fraction

import pytest
import sympy as sp

import oracle
from formalis import goldens
from formalis.exactpoly import Poly, parse_poly
from formalis.foliations import (XYZ, PfaffError, SeparatrixError, algebraic_solution_search,
                                 check_integrability, divides_mod_degree, euler_residue,
                                 graph_residual, is_formal_separatrix, jouanolou_form,
                                 line_validation, make_pfaff, omega_wedge_df, separatrix_family,
                                 smooth_separatrix)
from formalis.groebner import Ideal, member
from formalis.towers import PreconditionError


def P(text):
    return parse_poly(text, XYZ)


def form(*comps):
    return tuple(P(c) for c in comps)


def exact_form(F):
    return tuple(F.diff(v) for v in "xyz")


class TestPfaff:
    def test_accepts(self):
        assert make_pfaff(1, P("y"), P("-x"), P("0")).m == 1
        w = make_pfaff(3, P("x^2*z - y^3"), P("y^2*x - z^3"), P("z^2*y - x^3"))
        assert w.components == jouanolou_form(3).components

    def test_rejects_euler(self):
        with pytest.raises(PfaffError) as err:
            make_pfaff(1, P("x"), P("0"), P("0"))
        assert err.value.residue == P("x^2")

    def test_rejects_inhomogeneous(self):
        with pytest.raises(PfaffError):
            make_pfaff(2, P("y*z + y"), P("-x*z"), P("0"))

    def test_jouanolou(self):
        assert jouanolou_form(2).components == form("x*z - y^2", "y*x - z^2", "z*y - x^2")
        assert euler_residue(jouanolou_form(4)).is_zero()
        with pytest.raises(PreconditionError):
            jouanolou_form(1)

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_jouanolou_integrable(self, m):
        ok, res = check_integrability(jouanolou_form(m))
        assert ok and res.is_zero()

    def test_integrability_examples(self):
        assert check_integrability(form("y", "-x", "0"))[0]
        ok, res = check_integrability(form("z", "x", "y"))
        assert not ok and res == P("x + y + z")

    def test_integrability_matches_sympy(self):
        x, y, z = sp.symbols("x y z")
        rng = random.Random(3)
        for _ in range(5):
            comps = [sum(rng.randint(-2, 2) * x ** a * y ** b * z ** c
                         for a, b, c in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1)])
                     for _ in range(3)]
            w1, w2, w3 = comps
            curl = (sp.diff(w3, y) - sp.diff(w2, z), sp.diff(w1, z) - sp.diff(w3, x),
                    sp.diff(w2, x) - sp.diff(w1, y))
            expected = sp.expand(w1 * curl[0] + w2 * curl[1] + w3 * curl[2])
            mine = check_integrability(tuple(P(str(c).replace("**", "^")) for c in comps))[1]
            assert sp.expand(oracle.sym(str(mine)) - expected) == 0


class TestWedge:
    def test_examples(self):
        assert omega_wedge_df(form("y", "-x", "0"), P("x")).components == (P("x"), P("0"), P("0"))
        assert omega_wedge_df(form("y", "-x", "0"), P("7")).is_zero()
        assert omega_wedge_df(form("x", "y", "z"), P("x^2 + y^2 + z^2")).is_zero()

    def test_separatrix_examples(self):
        rot = form("y", "-x", "0")
        assert is_formal_separatrix(rot, P("x"), 4)
        assert not is_formal_separatrix(rot, P("z"), 4)
        assert is_formal_separatrix(form("x", "y", "z"), P("x^2 + y^2 + z^2 - 1"), 6)

    def test_unit_multiple_and_leading_term(self):
        rot = form("y", "-x", "0")
        u = P("1 + y + z^2 + x*y*z")
        f = P("x") * u
        assert is_formal_separatrix(rot, f, 8)
        lowest = P("x")
        for c in omega_wedge_df(rot, lowest).components:
            assert member(c, Ideal(XYZ, [lowest]))

    def test_lowest_form_of_leaf(self):
        # leaf of dF through a smooth point of the level set F = 0
        F = P("x + y^2 + x*z")
        assert is_formal_separatrix(exact_form(F), F, 7)
        low = P("x")
        wedge = omega_wedge_df(exact_form(F), F)
        assert wedge.is_zero()
        assert divides_mod_degree(low, P("x*y"), 5)
        assert not divides_mod_degree(P("x"), P("y"), 5)


class TestDarboux:
    def test_rotation_lines(self):
        fams = algebraic_solution_search(make_pfaff(1, P("y"), P("-x"), P("0")), 1)
        found = {f.leading: f for f in fams}
        assert set(found) == {"x", "y"}
        assert found["x"].free == ["c0"]
        assert found["x"].specialize({"c0": 3}) == P("x + 3*y")
        assert found["y"].f.to_spec(XYZ) == P("y")

    @pytest.mark.parametrize("n", [1, 2])
    def test_jouanolou_empty(self, n):
        assert algebraic_solution_search(jouanolou_form(3), n) == []

    def test_pencil(self):
        F, G = P("x*y"), P("z^2")
        w = make_pfaff(3, *[G * F.diff(v) - F * G.diff(v) for v in "xyz"])
        fams = algebraic_solution_search(w, 2)
        found = {f.leading: f for f in fams}
        assert set(found) == {"x^2", "x*y", "y^2", "x*z", "y*z", "z^2"}
        pencil = found["x*y"]
        assert pencil.free == ["c3"]
        rng = random.Random(1)
        for fam in fams:
            vals = {c: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for c in fam.free}
            f = fam.specialize(vals)
            assert is_formal_separatrix(w, f, 2 * w.m + 2)
        assert pencil.specialize({"c3": Fraction(-2, 3)}) == P("x*y - 2/3*z^2")


class TestSeparatrix:
    def test_dz(self):
        jet = smooth_separatrix(form("0", "0", "1"), (0, 0, 0), 4)
        assert jet.axis == "z" and jet.coeffs == {}

    def test_sphere(self):
        jet = smooth_separatrix(form("x", "y", "z"), (0, 0, 1), 5)
        assert str(jet.as_poly()) == goldens.SPHERE_JET
        axis, co = oracle.separatrix_graph(("x", "y", "z"), [0, 0, 1], 5)
        assert {k: Fraction(int(sp.numer(v)), int(sp.denom(v))) for k, v in co.items()} == jet.coeffs

    def test_rotation_plane(self):
        rot = form("y", "-x", "0")
        jet = smooth_separatrix(rot, (1, 0, 0), 5)
        assert jet.axis == "y" and jet.coeffs == {}
        shifted = jet.hypersurface()
        assert shifted == P("y")

    def test_singular_point(self):
        with pytest.raises(SeparatrixError):
            smooth_separatrix(form("y", "-x", "0"), (0, 0, 1), 3)

    def test_non_integrable(self):
        with pytest.raises(SeparatrixError):
            smooth_separatrix(form("z", "x", "y"), (1, 0, 0), 3)

    def test_leaves_of_exact_forms(self):
        rng = random.Random(23)
        x, y, z = sp.symbols("x y z")
        u, v = sp.symbols("u v")
        for _ in range(5):
            F = _random_poly(rng)
            p = (rng.randint(-2, 2), rng.randint(-2, 2), rng.randint(-2, 2))
            w = exact_form(F)
            if all(c.evaluate(dict(zip("xyz", p))) == 0 for c in w):
                continue
            N = 4
            jet = smooth_separatrix(w, p, N)
            pos = {n: sp.Integer(c) for n, c in zip("xyz", p)}
            phi = sum(sp.Rational(c.numerator, c.denominator) * u ** i * v ** j
                      for (i, j), c in jet.coeffs.items())
            sub = {jet.free[0]: pos[jet.free[0]] + u, jet.free[1]: pos[jet.free[1]] + v,
                   jet.axis: pos[jet.axis] + phi}
            Fs = oracle.sym(str(F))
            level = sp.expand(Fs.subs({x: sub["x"], y: sub["y"], z: sub["z"]}, simultaneous=True)
                              - Fs.subs({x: pos["x"], y: pos["y"], z: pos["z"]}))
            low = [m for m, c in sp.Poly(level, u, v).terms() if c != 0 and sum(m) <= N]
            assert low == []


class TestFamily:
    def test_line_validation(self):
        ok, wit = line_validation(jouanolou_form(3), (1, 1, 1))
        assert not ok and wit["restrictions"] == ["0", "0", "0"]
        ok, wit = line_validation(jouanolou_form(3), (1, 2, 3))
        assert ok and wit["restrictions"][0] == "-5*s^3"
        with pytest.raises(PreconditionError):
            line_validation(jouanolou_form(3), (0, 0, 0))

    def test_rotation_family_is_constant(self):
        w = make_pfaff(1, P("y"), P("-x"), P("0"))
        fam = separatrix_family(w, (1, 0, 0), 4)
        assert fam.pole_profile == [0] * 5

    def test_jouanolou_profile(self):
        gold = goldens.JOUANOLOU3_POLE_PROFILE
        fam = separatrix_family(jouanolou_form(3), gold["direction"], gold["N"])
        assert fam.axis == gold["axis"]
        assert fam.pole_profile == gold["profile"]
        assert all(a <= b for a, b in zip(fam.pole_profile, fam.pole_profile[1:]))

    def test_family_matches_oracle(self):
        w = sp.Symbol("w")
        axis, co = oracle.separatrix_graph(oracle.jouanolou(3), [w, 2 * w, 3 * w], 3)
        fam = separatrix_family(jouanolou_form(3), (1, 2, 3), 3)
        assert "xyz"[axis] == fam.axis
        assert set(co) == set(fam.coeffs)
        for key, val in co.items():
            assert sp.simplify(val - oracle.sym(str(fam.coeffs[key]))) == 0

    @pytest.mark.parametrize("w0", [Fraction(1), Fraction(-2, 3), Fraction(5, 7)])
    def test_specialization(self, w0):
        d = (1, 2, 3)
        fam = separatrix_family(jouanolou_form(3), d, 4)
        jet = smooth_separatrix(jouanolou_form(3), tuple(w0 * c for c in d), 4)
        assert fam.specialize(w0) == jet.coeffs

    def test_residual_of_family_specialization(self):
        d = (1, 2, 3)
        jet = smooth_separatrix(jouanolou_form(3), d, 5)
        ru, rv = graph_residual(jouanolou_form(3).components, jet.base_point, 2, jet.coeffs, 5)
        assert not ru and not rv


def _random_poly(rng):
    terms = {}
    for _ in range(rng.randint(2, 4)):
        e = tuple(rng.randint(0, 2) for _ in range(3))
        if sum(e):
            terms[e] = rng.randint(-3, 3)
    terms[(1, 0, 0)] = terms.get((1, 0, 0), 0) + 1
    return Poly(XYZ, terms)
