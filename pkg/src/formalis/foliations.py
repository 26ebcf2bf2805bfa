"""Pfaff forms on the projective plane and formal separatrices.

A one-form is a triple ``(w1, w2, w3)`` of polynomials in ``x, y, z``
standing for ``w1 dx + w2 dy + w3 dz``.  Smooth separatrices are graphs
``s = p_s + phi(u, v)`` over the two remaining centred coordinates, solved
one total degree at a time; the same solver runs over ``Q(w)`` to follow
the separatrix along the line ``w * direction``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exactpoly import Poly, PolyError, VarSpec, iter_monomials, parse_poly
from .groebner import (Ideal, MonomialOrder, ResourceCapError,
                       buchberger, eliminate, normal_form)
from .ratfunc import RatFunc
from .towers import PreconditionError

XYZ = VarSpec(("x", "y", "z"))
AXIS_PREFERENCE = (2, 1, 0)  # z > y > x

MAX_FORM_DEGREE = 4
MAX_SOLUTION_DEGREE = 4


class PfaffError(ValueError):
    """Not a Pfaff form: non-homogeneous components or nonzero Euler residue."""

    def __init__(self, message: str, residue: Optional[Poly] = None):
        super().__init__(message)
        self.residue = residue


class SeparatrixError(ValueError):
    """The base point is singular or the form is not integrable."""


OneForm = Tuple[Poly, Poly, Poly]


def _as_poly(p: Union[str, Poly]) -> Poly:
    return parse_poly(p, XYZ) if isinstance(p, str) else p.to_spec(XYZ)


@dataclass(frozen=True)
class PfaffForm:
    """Degree-m homogeneous one-form with ``x*w1 + y*w2 + z*w3 = 0``."""

    m: int
    w1: Poly
    w2: Poly
    w3: Poly

    def __post_init__(self):
        for name, w in zip(("w1", "w2", "w3"), self.components):
            if w.spec != XYZ:
                raise PfaffError(f"{name} must be a polynomial in x, y, z")
            if not w.is_homogeneous(self.m):
                raise PfaffError(f"{name} = {w} is not homogeneous of degree {self.m}")
        r = euler_residue(self.components)
        if not r.is_zero():
            raise PfaffError(f"Euler relation fails, residue {r}", r)

    @property
    def components(self) -> OneForm:
        return (self.w1, self.w2, self.w3)

    def to_json(self) -> dict:
        return {"m": self.m, "w": [str(w) for w in self.components]}


def _form(w) -> OneForm:
    if isinstance(w, PfaffForm):
        return w.components
    return tuple(_as_poly(c) for c in w)


def euler_residue(w) -> Poly:
    w1, w2, w3 = _form(w)
    x, y, z = (Poly.var(XYZ, v) for v in "xyz")
    return x * w1 + y * w2 + z * w3


def make_pfaff(m: int, w1, w2, w3) -> PfaffForm:
    return PfaffForm(m, _as_poly(w1), _as_poly(w2), _as_poly(w3))


def jouanolou_form(m: int) -> PfaffForm:
    """``(x^{m-1}z - y^m)dx + (y^{m-1}x - z^m)dy + (z^{m-1}y - x^m)dz``."""
    if m < 2:
        raise PreconditionError("Jouanolou forms need m >= 2")
    return make_pfaff(m, f"x^{m - 1}*z - y^{m}", f"y^{m - 1}*x - z^{m}", f"z^{m - 1}*y - x^{m}")


def check_integrability(w) -> Tuple[bool, Poly]:
    """Coefficient of ``dx^dy^dz`` in ``dw ^ w``; integrable iff it is zero."""
    w1, w2, w3 = _form(w)
    d = Poly.diff
    residual = (w1 * (d(w3, "y") - d(w2, "z"))
                + w2 * (d(w1, "z") - d(w3, "x"))
                + w3 * (d(w2, "x") - d(w1, "y")))
    return residual.is_zero(), residual


@dataclass(frozen=True)
class TwoForm:
    """``c_xy dx^dy + c_yz dy^dz + c_xz dx^dz``."""

    c_xy: Poly
    c_yz: Poly
    c_xz: Poly

    @property
    def components(self) -> Tuple[Poly, Poly, Poly]:
        return (self.c_xy, self.c_yz, self.c_xz)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)


def omega_wedge_df(w, f: Union[str, Poly]) -> TwoForm:
    w1, w2, w3 = _form(w)
    f = _as_poly(f) if isinstance(f, str) else f
    fx, fy, fz = (f.diff(v) for v in "xyz")
    return TwoForm(w1 * fy - w2 * fx, w2 * fz - w3 * fy, w1 * fz - w3 * fx)


def _truncate_degree(p: Poly, N: int) -> Poly:
    return Poly(p.spec, {e: c for e, c in p.terms.items() if sum(e) < N})


def _lowest_form(p: Poly) -> Tuple[int, Poly]:
    d = min(sum(e) for e in p.terms)
    return d, p.homogeneous_part(d)


def divides_mod_degree(f: Poly, c: Poly, N: int) -> bool:
    """Is ``c`` in ``(f) + m^N`` of the power series ring?

    The lowest form of a multiple of ``f`` is a multiple of the lowest form
    of ``f``, so lowest forms are divided exactly and the quotient times
    ``f`` is subtracted until everything left has degree ``>= N``.
    """
    f = _truncate_degree(f, N)
    if f.is_zero():
        raise PreconditionError("f vanishes modulo the truncation degree")
    n, fn = _lowest_form(f)
    G = buchberger(Ideal(f.spec, [fn]))
    r = _truncate_degree(c, N)
    while not r.is_zero():
        d, rd = _lowest_form(r)
        rem, (q,) = normal_form(rd, G, cofactors=True)
        if not rem.is_zero():
            return False
        r = _truncate_degree(r - q * f, N)
    return True


def is_formal_separatrix(w, f: Union[str, Poly], N: int) -> bool:
    """``f`` divides every component of ``w ^ df`` modulo total degree ``N``."""
    f = _as_poly(f) if isinstance(f, str) else f
    wdf = omega_wedge_df(w, f)
    return all(divides_mod_degree(f, c, N) for c in wdf.components)


# -- algebraic solutions ----------------------------------------------------

@dataclass
class DarbouxFamily:
    """Solutions with a fixed monic leading monomial.

    ``f`` has parameter coefficients reduced modulo ``constraints``;
    ``free`` lists the parameters left unconstrained by a linear system.
    """

    leading: str
    f: Poly
    constraints: List[Poly]
    free: List[str]
    linear: bool

    def specialize(self, values: Dict[str, Fraction]) -> Poly:
        """Instantiate the free parameters (only for linear constraint sets)."""
        if not self.linear:
            raise PolyError("constraints are nonlinear; no rational parametrisation")
        subs = {p: Fraction(values.get(p, 0)) for p in self.f.spec.names if p not in "xyz"}
        return self.f.subs(subs, XYZ)

    def to_json(self) -> dict:
        return {"leading_monomial": self.leading, "f": str(self.f),
                "free_parameters": self.free,
                "constraints": [str(c) for c in self.constraints], "linear": self.linear}


def _coeff_vectors(p: Poly, unknown_ring: VarSpec, xyz_idx: Sequence[int]) -> List[Poly]:
    """Split ``p`` (over unknowns + x,y,z) into its x,y,z-monomial coefficients."""
    buckets: Dict[tuple, dict] = {}
    k = unknown_ring.nvars
    for e, c in p.terms.items():
        mono = tuple(e[i] for i in xyz_idx)
        buckets.setdefault(mono, {})[e[:k]] = c
    return [Poly(unknown_ring, terms) for _, terms in sorted(buckets.items())]


def algebraic_solution_search(w: PfaffForm, n: int, max_form_degree: int = MAX_FORM_DEGREE,
                              max_degree: int = MAX_SOLUTION_DEGREE) -> List[DarbouxFamily]:
    """All homogeneous ``f`` of degree ``n`` (up to scaling) with ``f | w ^ df``.

    One branch per choice of leading monomial (grevlex, x > y > z) with
    coefficient 1 and larger monomials absent; in each branch the bilinear
    system ``w ^ df = f * Theta`` is decided by a Gröbner basis.  The linear
    equations ``i_R Theta = -n w`` (contract with the radial field
    ``x d/dx + y d/dy + z d/dz``) hold for every solution and are added to
    shrink the cofactor space.
    """
    if n < 1:
        raise PreconditionError("solution degree must be >= 1")
    if w.m > max_form_degree or n > max_degree:
        raise ResourceCapError(f"search limited to m <= {max_form_degree}, n <= {max_degree}")
    monos = sorted(iter_monomials(3, n), key=lambda e: (sum(e),) + tuple(-a for a in reversed(e)),
                   reverse=True)
    theta_monos = list(iter_monomials(3, w.m - 1))
    families = []
    for a, lead in enumerate(monos):
        lower = monos[a + 1:]
        cnames = [f"c{k}" for k in range(len(lower))]
        tnames = [f"th{k}" for k in range(3 * len(theta_monos))]
        unknown_ring = VarSpec(cnames + tnames)
        big = VarSpec(cnames + tnames + ["x", "y", "z"])
        xyz_idx = [big.index(v) for v in "xyz"]

        def mono(e, coef_var=None):
            ex = [0] * big.nvars
            for i, k in zip(xyz_idx, e):
                ex[i] = k
            if coef_var is not None:
                ex[big.index(coef_var)] = 1
            return Poly.monomial(big, tuple(ex))

        f = mono(lead)
        for cn, e in zip(cnames, lower):
            f = f + mono(e, cn)
        thetas = []
        for comp in range(3):
            th = Poly.zero(big)
            for k, e in enumerate(theta_monos):
                th = th + mono(e, tnames[comp * len(theta_monos) + k])
            thetas.append(th)
        W = [c.to_spec(big) for c in w.components]
        wdf = _wedge_big(W, f)
        eqs = []
        for c, th in zip(wdf, thetas):
            eqs += _coeff_vectors(c - f * th, unknown_ring, xyz_idx)
        X, Y, Z = (Poly.var(big, v) for v in "xyz")
        t_xy, t_yz, t_xz = thetas
        contraction = (-Y * t_xy - Z * t_xz + n * W[0],
                       X * t_xy - Z * t_yz + n * W[1],
                       Y * t_yz + X * t_xz + n * W[2])
        for c in contraction:
            eqs += _coeff_vectors(c, unknown_ring, xyz_idx)
        I = Ideal(unknown_ring, eqs)
        G = buchberger(I)
        if G.is_unit():
            continue
        C = eliminate(I, tnames)
        cring = C.ring
        lexG = buchberger(C, MonomialOrder("lex"))
        linear = all(g.total_degree() <= 1 for g in lexG.basis)
        leads = set()
        for g, lm in zip(lexG.basis, lexG.leading_monomials()):
            leads.add(cring.names[[i for i, v in enumerate(lm) if v][0]] if any(lm) else None)
        free = [c for c in cnames if c not in leads]
        out_ring = VarSpec(cnames + ["x", "y", "z"])
        fam = Poly.monomial(out_ring, (0,) * len(cnames) + lead)
        for cn, e in zip(cnames, lower):
            coef = normal_form(Poly.var(cring, cn), lexG).to_spec(out_ring)
            fam = fam + coef * Poly.monomial(out_ring, (0,) * len(cnames) + e)
        used = [c for c in cnames if fam.degree(c) > 0]
        keep = VarSpec(used + ["x", "y", "z"])
        lead_str = str(Poly.monomial(XYZ, lead))
        families.append(DarbouxFamily(lead_str, fam.to_spec(keep),
                                      [g.to_spec(VarSpec(cnames)) for g in lexG.basis],
                                      [c for c in free if c in used], linear))
    return families


def _wedge_big(W, f: Poly):
    fx, fy, fz = (f.diff(v) for v in "xyz")
    return (W[0] * fy - W[1] * fx, W[1] * fz - W[2] * fy, W[0] * fz - W[2] * fx)


# -- truncated bivariate series over an arbitrary field ---------------------

Series = Dict[Tuple[int, int], object]


def _s_add(a: Series, b: Series) -> Series:
    out = dict(a)
    for k, v in b.items():
        s = out[k] + v if k in out else v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _s_scale(a: Series, c) -> Series:
    return {k: v * c for k, v in a.items() if v * c}


def _s_mul(a: Series, b: Series, K: int) -> Series:
    out: Series = {}
    for (i, j), u in a.items():
        for (k, l), v in b.items():
            if i + j + k + l > K:
                continue
            key = (i + k, j + l)
            s = out[key] + u * v if key in out else u * v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _s_inv(a: Series, K: int, one) -> Series:
    c0 = a.get((0, 0))
    if not c0:
        raise SeparatrixError("series not invertible")
    inv0 = one / c0
    rest = {k: -v * inv0 for k, v in a.items() if k != (0, 0)}
    # 1/(c0 (1 - rest)) = inv0 * sum rest^j
    out = {(0, 0): inv0}
    power = {(0, 0): one}
    for _ in range(K):
        power = _s_mul(power, rest, K)
        if not power:
            break
        out = _s_add(out, _s_scale(power, inv0))
    return out


def _homogeneous(a: Series, k: int) -> Series:
    return {key: v for key, v in a.items() if sum(key) == k}


def _shift_polynomial(p: Poly, base: Sequence, zero, one) -> Dict[Tuple[int, int, int], object]:
    """Expand ``p(base + X)`` as a polynomial in ``X`` with field coefficients."""
    out: Dict[Tuple[int, int, int], object] = {}
    for e, c in p.terms.items():
        parts = []
        for b, a in zip(base, e):
            parts.append([(k, one * comb(a, k) * b ** (a - k)) for k in range(a + 1)])
        for (k1, c1), (k2, c2), (k3, c3) in itertools.product(*parts):
            v = c1 * c2 * c3 * c
            if not v:
                continue
            key = (k1, k2, k3)
            s = out[key] + v if key in out else v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _compose(shifted, axis: int, free: Tuple[int, int], phi_powers, K: int, zero) -> Series:
    out: Series = {}
    for e, c in shifted.items():
        if e[free[0]] + e[free[1]] > K:
            continue
        base = {(e[free[0]], e[free[1]]): c}
        term = _s_mul(base, phi_powers[e[axis]], K) if e[axis] else base
        out = _s_add(out, term)
    return out


def _phi_powers(phi: Series, upto: int, K: int, one) -> list:
    pw = [{(0, 0): one}]
    for _ in range(upto):
        pw.append(_s_mul(pw[-1], phi, K))
    return pw


def _deriv(a: Series, var: int) -> Series:
    out = {}
    for (i, j), v in a.items():
        k = (i, j)[var]
        if k:
            out[(i - 1, j) if var == 0 else (i, j - 1)] = v * k
    return out


def _solve_graph(w: OneForm, base: Sequence, N: int, zero, one):
    """Order-by-order graph ``X_s = phi(X_u, X_v)`` of the leaf through ``base``."""
    shifted = [_shift_polynomial(c, base, zero, one) for c in w]
    at_p = [s.get((0, 0, 0), zero) for s in shifted]
    axis = next((i for i in AXIS_PREFERENCE if at_p[i]), None)
    if axis is None:
        raise SeparatrixError("the form vanishes at the base point (singular point of the foliation)")
    free = tuple(i for i in range(3) if i != axis)
    maxpow = max((e[axis] for s in shifted for e in s), default=0)
    phi: Series = {}
    for k in range(N):
        pw = _phi_powers(phi, maxpow, k, one)
        S = [_compose(s, axis, free, pw, k, zero) for s in shifted]
        inv = _s_inv(S[axis], k, one)
        A = _homogeneous(_s_scale(_s_mul(S[free[0]], inv, k), -one), k)
        B = _homogeneous(_s_scale(_s_mul(S[free[1]], inv, k), -one), k)
        # closedness of A du + B dv is what integrability guarantees
        if _s_add(_deriv(A, 1), _s_scale(_deriv(B, 0), -one)):
            raise SeparatrixError(f"cross-derivative mismatch at order {k}; integrability failed")
        step = {}
        for (i, j), v in A.items():
            step[(i + 1, j)] = v / (k + 1)
        for (i, j), v in B.items():
            key = (i, j + 1)
            s = step[key] + v / (k + 1) if key in step else v / (k + 1)
            if s:
                step[key] = s
            else:
                step.pop(key, None)
        phi = _s_add(phi, {key: v for key, v in step.items() if v})
    return axis, free, phi


def graph_residual(w, base: Sequence, axis: int, phi: Series, N: int, zero=Fraction(0), one=Fraction(1)):
    """Pull ``w`` back to the graph and keep total degrees ``< N``.

    Returns the two coefficients ``(w_u + w_s phi_u, w_v + w_s phi_v)``.
    """
    w = _form(w)
    free = tuple(i for i in range(3) if i != axis)
    shifted = [_shift_polynomial(c, base, zero, one) for c in w]
    maxpow = max((e[axis] for s in shifted for e in s), default=0)
    K = N - 1
    pw = _phi_powers(phi, maxpow, K, one)
    S = [_compose(s, axis, free, pw, K, zero) for s in shifted]
    ru = _s_add(S[free[0]], _s_mul(S[axis], _deriv(phi, 0), K))
    rv = _s_add(S[free[1]], _s_mul(S[axis], _deriv(phi, 1), K))
    return ru, rv


@dataclass
class SeparatrixJet:
    """Graph ``coord[axis] = base[axis] + phi`` in coordinates centred at ``base``."""

    base_point: Tuple[Fraction, Fraction, Fraction]
    axis: str
    free: Tuple[str, str]
    coeffs: Dict[Tuple[int, int], Fraction]
    order: int

    def as_poly(self) -> Poly:
        spec = VarSpec(self.free)
        return Poly(spec, self.coeffs)

    def hypersurface(self) -> Poly:
        """``X_s - phi(X_u, X_v)`` in centred coordinates, as a polynomial in x, y, z."""
        idx = {n: i for i, n in enumerate("xyz")}
        terms = {}
        for (i, j), c in self.coeffs.items():
            e = [0, 0, 0]
            e[idx[self.free[0]]] = i
            e[idx[self.free[1]]] = j
            terms[tuple(e)] = -c
        e = [0, 0, 0]
        e[idx[self.axis]] = 1
        terms[tuple(e)] = Fraction(1)
        return Poly(XYZ, terms)

    def to_json(self) -> dict:
        return {"base_point": [str(c) for c in self.base_point], "axis": self.axis,
                "free": list(self.free), "order": self.order, "phi": str(self.as_poly())}


def smooth_separatrix(w, p: Sequence, N: int) -> SeparatrixJet:
    """Unique smooth formal separatrix through ``p`` up to total degree ``N``."""
    form = _form(w)
    ok, res = check_integrability(form)
    if not ok:
        raise SeparatrixError(f"form is not integrable, dw^w = {res}")
    p = tuple(Fraction(c) for c in p)
    axis, free, phi = _solve_graph(form, p, N, Fraction(0), Fraction(1))
    names = "xyz"
    ru, rv = graph_residual(form, p, axis, phi, N)
    if ru or rv:
        raise SeparatrixError("graph residual nonzero; solver inconsistency")
    return SeparatrixJet(p, names[axis], (names[free[0]], names[free[1]]), phi, N)


def line_validation(w: PfaffForm, direction: Sequence) -> Tuple[bool, dict]:
    """Does ``w`` restricted to ``s*direction`` vanish only at ``s = 0``?

    Each component restricts to ``w_i(direction) * s^m``, so the form is
    nonsingular off the origin along the line iff some ``w_i(direction)``
    is nonzero.
    """
    d = tuple(Fraction(c) for c in direction)
    if not any(d):
        raise PreconditionError("direction must be nonzero")
    vals = [c.evaluate(dict(zip("xyz", d))) for c in w.components]
    hit = next((i for i, v in enumerate(vals) if v), None)
    witness = {"restrictions": [f"{v}*s^{w.m}" if v else "0" for v in vals],
               "component": None if hit is None else hit + 1}
    return hit is not None, witness


@dataclass
class FamilyJet:
    """Separatrix jets along ``w * line`` with coefficients in ``Q(w)``."""

    line: Tuple[Fraction, Fraction, Fraction]
    axis: str
    free: Tuple[str, str]
    coeffs: Dict[Tuple[int, int], RatFunc]
    order: int
    pole_profile: List[int] = field(default_factory=list)

    def specialize(self, w0) -> Dict[Tuple[int, int], Fraction]:
        out = {}
        for k, c in self.coeffs.items():
            v = c(Fraction(w0))
            if v:
                out[k] = v
        return out

    def to_json(self) -> dict:
        return {"line": [str(c) for c in self.line], "axis": self.axis, "free": list(self.free),
                "order": self.order, "pole_profile": self.pole_profile,
                "coefficients": {f"{self.free[0]}^{i}*{self.free[1]}^{j}": str(c)
                                 for (i, j), c in sorted(self.coeffs.items())}}


def separatrix_family(w: PfaffForm, direction: Sequence, N: int) -> FamilyJet:
    """Run the separatrix solver at the generic point ``w * direction``.

    ``pole_profile[k]`` is the largest multiplicity of ``w = 0`` among the
    denominators of the total-degree-``k`` coefficients.
    """
    ok, wit = line_validation(w, direction)
    if not ok:
        raise PreconditionError(f"line meets the singular locus: {wit}")
    ok, res = check_integrability(w)
    if not ok:
        raise SeparatrixError(f"form is not integrable, dw^w = {res}")
    d = tuple(Fraction(c) for c in direction)
    W = RatFunc.w()
    base = tuple(W * c for c in d)
    zero, one = RatFunc.const(0), RatFunc.const(1)
    axis, free, phi = _solve_graph(w.components, base, N, zero, one)
    profile = [0] * (N + 1)
    for (i, j), c in phi.items():
        profile[i + j] = max(profile[i + j], c.pole_order())
    names = "xyz"
    return FamilyJet(d, names[axis], (names[free[0]], names[free[1]]), phi, N, profile)
