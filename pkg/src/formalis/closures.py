"""Closures of ordinary subschemes, pseudo-closures and the t-adic laboratory.

Closures are kernels of restriction to a distinguished open ``D(f)``; at a
fixed tower level this is the saturation ``(J + I_level) : f^infinity``.
The rest of the module deals with Laurent series ``f`` in ``k[x^±, y][[t]]``
truncated mod ``t^N``: inverting to a monomial in one variable, the
closure of ``(f)`` in the polynomial model, and the greedy search for a
polynomial multiple ``f*g`` together with the ``d, e, D, E`` bookkeeping of
its failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .exactpoly import Poly, PolyError, TruncSeries, VarSpec, laurent_clear, truncate
from .groebner import Ideal, buchberger, contains, ideals_equal, saturate
from .towers import PreconditionError, Tower

INF = math.inf


@dataclass(frozen=True)
class OpenSubschemeSpec:
    """``V(J)`` inside the distinguished open ``D(f)``."""

    f: Poly
    J: Ideal

    def __post_init__(self):
        if self.f.is_zero():
            raise PreconditionError("distinguished open of the zero element")


def _invertible_product(spec: VarSpec) -> Poly:
    p = Poly.constant(spec, 1)
    for name in sorted(spec.invertible, key=spec.index):
        p = p * Poly.var(spec, name)
    return p


def ordinary_closure(T: Tower, Y: OpenSubschemeSpec, level: int) -> Ideal:
    """Kernel of ``P/I_level -> ((P/I_level)/J)_f``."""
    I = T.level(level)
    J = Y.J.to_ring(T.ring)
    return saturate(I + J, Y.f.to_spec(T.ring))


@dataclass
class ClosureChain:
    """Levelwise closure ideals, indexed by ``indices`` (levels or orders N).

    ``projections[M]`` lists ``(N, J_N + I_M)`` for ``N >= M``.
    """

    indices: List[int]
    levels: List[Ideal]
    stabilized_at: Optional[int]
    projections: Dict[int, List[Tuple[int, Ideal]]] = field(default_factory=dict)

    def projection_monotone(self, M: int) -> bool:
        proj = self.projections[M]
        return all(contains(a, b) for (_, a), (_, b) in zip(proj, proj[1:]))

    def projection_strict(self, M: int) -> bool:
        proj = self.projections[M]
        return all(contains(a, b) and not contains(b, a) for (_, a), (_, b) in zip(proj, proj[1:]))

    def projection_stable_from(self, M: int) -> Optional[int]:
        """First N from which ``pi_M(J_N)`` no longer changes."""
        proj = self.projections[M]
        for k, (N, I) in enumerate(proj):
            if all(ideals_equal(I, J) for _, J in proj[k + 1:]):
                return N
        return None

    def to_json(self) -> dict:
        return {
            "indices": self.indices,
            "levels": [[str(g) for g in buchberger(I).basis] for I in self.levels],
            "stabilized_at": self.stabilized_at,
            "projections": {
                str(M): [{"N": N, "ideal": [str(g) for g in buchberger(I).basis]} for N, I in rows]
                for M, rows in sorted(self.projections.items())
            },
        }


def _stabilized(indices, levels) -> Optional[int]:
    # a single trailing level says nothing about stabilisation
    if len(levels) < 2 or not ideals_equal(levels[-1], levels[-2]):
        return None
    k = len(levels) - 2
    while k > 0 and ideals_equal(levels[k - 1], levels[-1]):
        k -= 1
    return indices[k]


def _projections(indices, levels, cut: Callable[[int], Ideal], Ms) -> dict:
    out = {}
    for M in Ms:
        out[M] = [(N, I + cut(M)) for N, I in zip(indices, levels) if N >= M]
    return out


def pseudo_closure(T: Tower, Y_chain: Sequence[OpenSubschemeSpec]) -> ClosureChain:
    """Closure ideal of ``Y_i`` at level ``i`` for every level."""
    if len(Y_chain) != T.depth:
        raise PreconditionError(f"need one open subscheme per level ({T.depth}), got {len(Y_chain)}")
    levels = [ordinary_closure(T, Y, i) for i, Y in enumerate(Y_chain, start=1)]
    for i in range(len(levels) - 1):
        if not contains(levels[i], levels[i + 1]):
            raise PreconditionError(f"closure chain not descending at level {i + 1}")
    indices = list(range(1, T.depth + 1))
    proj = _projections(indices, levels, T.level, indices)
    return ClosureChain(indices, levels, _stabilized(indices, levels), proj)


# -- one-variable inversion -------------------------------------------------

def _univariate_laurent(f: TruncSeries) -> str:
    spec = f.spec
    others = [n for n in spec.names if n != spec.series_var]
    if len(others) != 1 or others[0] not in spec.invertible:
        raise PreconditionError("expected series over k[x^±][[t]] with a single invertible x")
    return others[0]


@dataclass
class InverseSeries:
    """``g = sum_i num_i / fn**power_i * t**i`` truncated at ``order``.

    When ``fn`` is a monomial every power is 0 and ``num_i`` is ``g_i`` itself.
    """

    spec: VarSpec
    fn: Poly
    terms: List[Tuple[Poly, int]]
    order: int

    def denominators_cleared(self) -> Tuple[TruncSeries, int]:
        """``(G, K)`` with ``G = fn**K * g`` a Laurent series."""
        K = max((k for _, k in self.terms), default=0)
        t = Poly.var(self.spec, self.spec.series_var)
        G = Poly.zero(self.spec)
        for i, (num, k) in enumerate(self.terms):
            G = G + num * self.fn ** (K - k) * t ** i
        return truncate(G, self.order), K

    def as_series(self) -> TruncSeries:
        if any(k for _, k in self.terms):
            raise PolyError("coefficients involve 1/f_n; use denominators_cleared()")
        return self.denominators_cleared()[0]

    def to_json(self) -> dict:
        return {"f_n": str(self.fn),
                "coefficients": [{"order": i, "numerator": str(num), "f_n_power": k}
                                 for i, (num, k) in enumerate(self.terms)]}


def invert_to_monomial(f: TruncSeries, N: Optional[int] = None) -> Tuple[InverseSeries, int]:
    """Solve ``f*g = t^n (mod t^N)`` by the recursion ``g_{i+1} = -(sum g_j f_{n+i+1-j})/f_n``."""
    _univariate_laurent(f)
    N = N or f.order
    if N > f.order:
        raise PreconditionError(f"f is only known mod t^{f.order}")
    f = truncate(f.poly, N)
    n = f.valuation()
    if n is None:
        raise PreconditionError("cannot invert the zero series")
    coeffs = f.coeffs()
    fn = coeffs[n]
    length = N - n
    spec = f.spec
    if fn.is_monomial():
        inv = fn ** -1
        g = [inv]
        for i in range(length - 1):
            s = Poly.zero(spec)
            for j in range(i + 1):
                s = s + g[j] * coeffs[n + i + 1 - j]
            g.append(-(s * inv))
        terms = [(gi, 0) for gi in g]
    else:
        nums = [Poly.constant(spec, 1)]
        for i in range(length - 1):
            # g_j = nums[j] / fn^(j+1); bring the sum over fn^(i+1)
            s = Poly.zero(spec)
            for j in range(i + 1):
                s = s + nums[j] * fn ** (i - j) * coeffs[n + i + 1 - j]
            nums.append(-s)
        terms = [(num, i + 1) for i, num in enumerate(nums)]
    return InverseSeries(spec, fn, terms, length), n


def line_closure(f: TruncSeries, N: Optional[int] = None) -> Ideal:
    """Contraction of ``(f, t^N)`` to ``k[x, t]``: saturate the cleared numerator by ``x``."""
    _univariate_laurent(f)
    N = N or f.order
    f = truncate(f.poly, min(N, f.order))
    if f.poly.is_zero():
        raise PreconditionError("f vanishes mod t^N")
    q, _ = laurent_clear(f.poly)
    P = f.spec.polynomial()
    t = Poly.var(P, f.tvar)
    return saturate(Ideal(P, [q.to_spec(P), t ** N]), _invertible_product(f.spec).to_spec(P))


# -- the two-variable counterexample ----------------------------------------

def counterexample_ring() -> VarSpec:
    return VarSpec(("x", "y", "t"), invertible=("x",), series_var="t")


def factorial_rule(i: int) -> int:
    return math.factorial(i)


def counterexample_series(rule: Callable[[int], Union[int, Fraction]], N: int,
                          spec: Optional[VarSpec] = None) -> TruncSeries:
    """``y + sum_{1 <= i < N} a_i x^-i t^i`` with ``a_i = rule(i)``.

    The growth hypothesis is checked on the available coefficients: every
    ``a_i`` nonzero, ``|a_i|`` strictly increasing, and the ratios
    ``|a_{i+1}/a_i|`` strictly increasing (a finite stand-in for divergence).
    """
    spec = spec or counterexample_ring()
    a = [Fraction(rule(i)) for i in range(1, max(N, 3))]
    for i, ai in enumerate(a, start=1):
        if ai == 0:
            raise PreconditionError(f"growth hypothesis violated: a_{i} = 0")
    for i in range(1, len(a)):
        if not abs(a[i]) > abs(a[i - 1]):
            raise PreconditionError(f"growth hypothesis violated at i={i + 1}: |a_{i + 1}| <= |a_{i}|")
    ratios = [abs(a[i + 1] / a[i]) for i in range(len(a) - 1)]
    for i in range(1, len(ratios)):
        if not ratios[i] > ratios[i - 1]:
            raise PreconditionError(f"growth hypothesis violated at i={i + 2}: ratio not increasing")
    x = Poly.var(spec, "x")
    t = Poly.var(spec, "t")
    f = Poly.var(spec, "y")
    for i in range(1, N):
        f = f + a[i - 1] * x ** -i * t ** i
    return truncate(f, N)


@dataclass
class DEProfile:
    """Per-order minima of a series ``g`` in ``k[x^±, y][[t]]``.

    ``d[i]`` is the least x-exponent in ``g_i``, ``e[i]`` the least
    y-exponent among those terms, and ``D[i]``, ``E[i]`` the same data for
    the shifted contributions ``x^-j g_{i-j}``, ``1 <= j <= i``.  Empty
    infima are ``INF``.
    """

    d: list
    e: list
    D: list
    E: list

    def descent_holds(self) -> bool:
        """D strictly decreasing and E non-increasing where both are finite."""
        idx = [i for i in range(len(self.D)) if self.D[i] != INF]
        for a, b in zip(idx, idx[1:]):
            if not (self.D[b] < self.D[a] and self.E[b] <= self.E[a]):
                return False
        return True

    def to_json(self) -> dict:
        enc = lambda seq: [v if v != INF else "inf" for v in seq]
        return {"d": enc(self.d), "e": enc(self.e), "D": enc(self.D), "E": enc(self.E)}


def _xy_names(spec: VarSpec) -> Tuple[str, str]:
    inv = [n for n in spec.names if n in spec.invertible]
    rest = [n for n in spec.names if n not in spec.invertible and n != spec.series_var]
    if len(inv) != 1 or len(rest) != 1:
        raise PreconditionError("expected ring k[x^±, y][[t]]")
    return inv[0], rest[0]


def de_profile(f: Optional[TruncSeries], g: TruncSeries, N: Optional[int] = None) -> DEProfile:
    """Evaluate the ``d, e, D, E`` sequences of ``g`` for orders ``< N``.

    ``f`` only fixes the ring and may be None.
    """
    N = N or g.order
    xn, yn = _xy_names(g.spec)
    xi, yi = g.spec.index(xn), g.spec.index(yn)
    d, e = [], []
    for i in range(N):
        gi = g.coeff(i) if i < g.order else Poly.zero(g.spec)
        if gi.is_zero():
            d.append(INF)
            e.append(INF)
            continue
        m = min(ex[xi] for ex in gi.terms)
        d.append(m)
        e.append(min(ex[yi] for ex in gi.terms if ex[xi] == m))
    D, E = [INF], [INF]
    for i in range(1, N):
        cands = [(d[j] - i + j, e[j]) for j in range(i) if d[j] != INF]
        if not cands:
            D.append(INF)
            E.append(INF)
            continue
        Di = min(c for c, _ in cands)
        D.append(Di)
        E.append(min(ej for c, ej in cands if c == Di))
    return DEProfile(d, e, D, E)


@dataclass
class ObstructionCertificate:
    """A negative-x term of ``h'_order`` that no choice of ``g_order`` cancels.

    ``partial`` holds ``g_0 .. g_{order-1}`` of the canonical branch.
    """

    order: int
    exponent: Tuple[int, int]
    coefficient: Fraction
    profile: DEProfile
    partial: List[Poly]

    def check(self, f: TruncSeries) -> bool:
        """Recompute ``h'_order`` from ``f`` and ``partial`` and confirm the term."""
        xn, yn = _xy_names(f.spec)
        xi, yi = f.spec.index(xn), f.spec.index(yn)
        f0 = f.coeff(0)
        k = f0.degree(yn)
        hp = Poly.zero(f.spec)
        for j in range(1, self.order + 1):
            hp = hp + f.coeff(j) * self.partial[self.order - j]
        hits = [c for ex, c in hp.terms.items()
                if (ex[xi], ex[yi]) == self.exponent]
        # f0 = c*y^k: y-degree below k is out of reach of f0*g_order
        return (len(hits) == 1 and hits[0] == self.coefficient
                and self.exponent[0] < 0 and self.exponent[1] < k)

    def to_json(self) -> dict:
        return {"order": self.order, "x_exponent": self.exponent[0],
                "y_exponent": self.exponent[1], "coefficient": str(self.coefficient),
                "profile": self.profile.to_json(),
                "partial": [str(p) for p in self.partial]}


def search_polynomial_multiple(f: TruncSeries, seed: Poly, N: Optional[int] = None
                               ) -> Union[TruncSeries, ObstructionCertificate]:
    """Greedy canonical-branch search for ``g`` with ``f*g`` polynomial mod ``t^N``.

    ``f_0`` must be ``c*y^k`` with ``k >= 1``.  At order ``i`` the negative-x
    part of ``f_0*g_i`` is made to cancel that of ``h'_i = sum_{j>=1} f_j
    g_{i-j}``; everything else in ``g_i`` is zero.  Only this one branch is
    explored.
    """
    N = N or f.order
    spec = f.spec
    xn, yn = _xy_names(spec)
    xi, yi = spec.index(xn), spec.index(yn)
    f0 = f.coeff(0)
    if not f0.is_monomial() or f0.degree(xn) != 0 or f0.min_degree(xn) != 0 or f0.degree(yn) < 1:
        raise PreconditionError("t^0 coefficient of f must be c*y^k with k >= 1")
    (e0, c0), = f0.terms.items()
    k = e0[yi]
    seed = seed.to_spec(spec)
    if seed.has_negative_exponents() or seed.degree(spec.series_var) > 0:
        raise PreconditionError("seed must be a polynomial in x, y")
    fs = [f.coeff(j) for j in range(min(N, f.order))] + [Poly.zero(spec)] * max(0, N - f.order)
    g = [seed]
    for i in range(1, N):
        hp = Poly.zero(spec)
        for j in range(1, i + 1):
            hp = hp + fs[j] * g[i - j]
        negative = {ex: c for ex, c in hp.terms.items() if ex[xi] < 0}
        blocked = sorted((ex for ex in negative if ex[yi] < k), key=lambda ex: (ex[xi], ex[yi]))
        if blocked:
            ex = blocked[0]
            partial = list(g)
            gser = TruncSeries.from_coeffs(spec, partial, i + 1)
            return ObstructionCertificate(i, (ex[xi], ex[yi]), negative[ex],
                                          de_profile(f, gser, i + 1), partial)
        gi = {}
        for ex, c in negative.items():
            ne = list(ex)
            ne[yi] -= k
            gi[tuple(ne)] = -c / c0
        g.append(Poly(spec, gi))
    return TruncSeries.from_coeffs(spec, g, N)


def saturation_profile(f: TruncSeries, N_max: int, M: int) -> ClosureChain:
    """``J_N = (x-cleared f mod t^N, t^N) : x^infinity`` for ``N = 1..N_max``, with ``pi_M``."""
    if not 1 <= M <= N_max:
        raise PreconditionError("need 1 <= M <= N_max")
    if N_max > f.order:
        raise PreconditionError(f"f is only known mod t^{f.order}")
    P = f.spec.polynomial()
    t = Poly.var(P, f.tvar)
    sat_by = _invertible_product(f.spec).to_spec(P)
    indices, levels = [], []
    for N in range(1, N_max + 1):
        fN = truncate(f.poly, N)
        q, _ = laurent_clear(fN.poly)
        J = saturate(Ideal(P, [q.to_spec(P), t ** N]), sat_by)
        indices.append(N)
        levels.append(Ideal(P, buchberger(J).basis))
    proj = _projections(indices, levels, lambda m: Ideal(P, [t ** m]), [M])
    chain = ClosureChain(indices, levels, _stabilized(indices, levels), proj)
    if not chain.projection_monotone(M):
        raise AssertionError("projection system is not monotone; saturation is broken")
    return chain
