import json

import pytest

from formalis.exactpoly import Poly, PolyError, VarSpec, parse_poly
from formalis.groebner import Ideal, buchberger, contains, ideals_equal, member
from formalis.towers import (NONADIC_CAVEAT, PreconditionError, Tower, TowerError,
                             adic_witness_test, chevalley_dichotomy, complete_localize,
                             is_ideal_of_definition, load_tower, quotient_tower, tower_from_chain,
                             validate_tower)

XY = VarSpec(("x", "y"))
XT = VarSpec(("x", "t"))
XYT = VarSpec(("x", "y", "t"))


def I(ring, *gens):
    return Ideal(ring, [parse_poly(g, ring) for g in gens])


def power(J, n):
    out = J
    for _ in range(n - 1):
        out = Ideal(J.ring, buchberger(out * J).basis)
    return out


def xy_chain(depth=4):
    return Tower(XY, [I(XY, f"x*y^{n}") for n in range(1, depth + 1)])


def m_chain(depth, step=1):
    m = I(XY, "x", "y")
    return Tower(XY, [power(m, step * n) for n in range(1, depth + 1)])


def embedded_chain(points):
    x, t = Poly.var(XT, "x"), Poly.var(XT, "t")
    chain, prod = [], t
    for a in points:
        prod = prod * (x - a)
        chain.append(Ideal(XT, [t ** 2, prod]))
    return Tower(XT, chain)


class TestValidation:
    def test_accepts(self):
        assert validate_tower(m_chain(3)).ok
        assert validate_tower(xy_chain(3)).ok

    def test_non_nilpotent_kernel(self):
        rep = validate_tower([I(XY, "x"), I(XY, "x^2*y")])
        assert not rep.ok
        (fail,) = rep.failures
        assert fail["level"] == 1 and fail["kind"] == "kernel_not_nilpotent"
        assert fail["generator"] == "x"
        with pytest.raises(TowerError):
            Tower(XY, [I(XY, "x"), I(XY, "x^2*y")])

    def test_not_descending(self):
        rep = validate_tower([I(XY, "x^2"), I(XY, "x")])
        assert rep.failures[0]["kind"] == "not_descending"

    def test_from_chain_radical_gate(self):
        tower_from_chain(XY, [I(XY, f"x*y^{n}") for n in (1, 2, 3)])
        tower_from_chain(XY, [I(XY, f"x^{n}") for n in (1, 2, 3)])
        with pytest.raises(TowerError):
            tower_from_chain(XY, [I(XY, "x", "y"), I(XY, "x")])

    def test_load_roundtrip(self, tmp_path):
        T = xy_chain(3)
        path = tmp_path / "t.json"
        path.write_text(json.dumps(T.to_json()))
        U = load_tower(str(path))
        assert all(ideals_equal(a, b) for a, b in zip(T.chain, U.chain))
        assert load_tower(T.to_json()).depth == 3

    def test_load_rejects_invertible(self):
        with pytest.raises(PolyError):
            load_tower({"vars": ["x"], "invertible": ["x"], "chain": [["x"]]})

    def test_level_bounds(self):
        with pytest.raises(PreconditionError):
            xy_chain(2).level(3)


class TestConstructions:
    def test_quotient(self):
        T = Tower(XYT, [I(XYT, "t"), I(XYT, "t^2")])
        Q = quotient_tower(T, I(XYT, "y"))
        assert ideals_equal(Q.level(2), I(XYT, "y", "t^2"))
        assert all(ideals_equal(a, b) for a, b in zip(quotient_tower(T, Ideal(XYT, [])).chain, T.chain))
        assert all(buchberger(L).is_unit() for L in quotient_tower(T, I(XYT, "1")).chain)

    def test_localize(self):
        T = Tower(XT, [I(XT, "t"), I(XT, "t^2")])
        L = complete_localize(T, parse_poly("x", XT))
        u = L.ring.names[-1]
        assert ideals_equal(L.level(2), I(L.ring, "t^2", f"{u}*x - 1"))
        one = complete_localize(T, parse_poly("1", XT))
        assert member(parse_poly(f"{u} - 1", one.ring), one.level(1))
        empty = complete_localize(Tower(XT, [I(XT, "x", "t")]), parse_poly("x", XT))
        assert buchberger(empty.level(1)).is_unit()

    def test_localize_and_quotient_commute(self):
        T = Tower(XYT, [I(XYT, "t", "y^2"), I(XYT, "t^2", "y^2")])
        K = I(XYT, "y - x*t")
        f = parse_poly("x", XYT)
        a = complete_localize(quotient_tower(T, K), f)
        b = complete_localize(T, f)
        b = quotient_tower(b, K.to_ring(b.ring))
        assert all(ideals_equal(p, q) for p, q in zip(a.chain, b.chain))


class TestIdealOfDefinition:
    def test_examples(self):
        T = xy_chain()
        assert is_ideal_of_definition(I(XY, "x*y"), T)[0]
        ok, wit = is_ideal_of_definition(I(XY, "x"), T)
        assert not ok and wit["not_nilpotent"]
        assert is_ideal_of_definition(T.level(1), T)[0]


class TestAdic:
    def test_xy_chain_fails_at_two(self):
        rep = adic_witness_test(xy_chain(), I(XY, "x*y"), 2)
        assert not rep.passed
        assert rep.forward_witness == {1: 1, 2: None}
        assert rep.to_json()["failure_m"] == 2

    def test_maximal_chain_passes(self):
        T = m_chain(4)
        rep = adic_witness_test(T, I(XY, "x", "y"), T.depth)
        assert rep.passed
        assert rep.forward_witness == {n: n for n in range(1, 5)}
        assert rep.backward_witness == {i: i for i in range(1, 5)}

    def test_embedded_points(self):
        T = embedded_chain([1, 2, 3, 4])
        rep = adic_witness_test(T, T.level(1), 2)
        assert rep.forward_failure == 2
        t2 = parse_poly("t^2", XT)
        assert all(member(t2, L) for L in T.chain)
        assert not member(t2, power(T.level(1), 2))

    def test_embedded_chain_strict(self):
        T = embedded_chain([0, 1, -1, 2, 3])
        for k in range(T.depth - 1):
            assert contains(T.chain[k], T.chain[k + 1])
            assert not contains(T.chain[k + 1], T.chain[k])

    @pytest.mark.parametrize("gens", [("x", "y"), ("x*y",), ("x^2", "y"), ("x + y", "y^2")])
    def test_self_adic(self, gens):
        J = I(XY, *gens)
        T = Tower(XY, [power(J, n) for n in range(1, 4)])
        assert adic_witness_test(T, J, 3).passed

    def test_candidate_must_define(self):
        with pytest.raises(PreconditionError):
            adic_witness_test(xy_chain(), I(XY, "x"), 2)

    def test_caveat_text(self):
        assert "evidence" in NONADIC_CAVEAT


class TestChevalley:
    def test_double_powers_cofinal(self):
        res = chevalley_dichotomy(m_chain(4, step=2), I(XY, "x", "y"), 4)
        assert res.case == "cofinal"
        assert res.data["witness"] == {"1": 1, "2": 1, "3": 2, "4": 2}

    def test_identity_witness(self):
        res = chevalley_dichotomy(m_chain(4), I(XY, "x", "y"), 4)
        assert res.data["witness"] == {str(n): n for n in range(1, 5)}

    def test_stabilized_intersection(self):
        m = I(XY, "x", "y")
        T = Tower(XY, [I(XY, "x") + power(m, n) for n in range(1, 6)])
        res = chevalley_dichotomy(T, m, 4)
        assert res.case == "stabilized_intersection"
        assert res.data["generators"] == ["x"]
        assert res.data["stable_from"] == 2
        core = I(XY, *res.data["generators"])
        assert all(contains(L, core) for L in T.chain)

    def test_shifted_point(self):
        R = XY
        m = I(R, "x - 1", "y + 2")
        T = Tower(R, [power(m, n) for n in range(1, 4)])
        assert chevalley_dichotomy(T, m, 3).case == "cofinal"

    def test_rejects_non_maximal(self):
        with pytest.raises(PreconditionError):
            chevalley_dichotomy(m_chain(2), I(XY, "x*y"), 2)
