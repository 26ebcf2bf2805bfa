"""Admissible rings at finite depth, presented as descending ideal chains.

A :class:`Tower` over a polynomial ring ``P`` stands for the limit of the
discrete rings ``P/I_1 <- P/I_2 <- ...``.  Power-series ambient rings such
as ``k[[x, y]]`` or ``k[x, y][[t]]`` are modelled by their polynomial rings
level by level; all the checks here only use levelwise ideal arithmetic.

A negative answer from :func:`adic_witness_test` only says that no witness
was found within the search bounds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

from .exactpoly import Poly, PolyError, VarSpec, parse_poly
from .groebner import (Ideal, buchberger, contains, ideals_equal, normal_form,
                       radical_member)

DEFAULT_DEPTH = 6
DEFAULT_NMAX = 4

NONADIC_CAVEAT = ("no witness up to the search bounds is evidence, not proof, of "
                  "non-adicness: only the given candidate ideal was tested")


class TowerError(ValueError):
    """A chain fails a structural requirement (descending, nilpotent kernels, radicals)."""


class PreconditionError(ValueError):
    """An operation was called outside its domain."""


@dataclass
class ValidationReport:
    ok: bool
    failures: List[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"pass": self.ok, "failures": self.failures}


def _check_chain(ring: VarSpec, chain: Sequence[Ideal]) -> ValidationReport:
    failures = []
    for i in range(len(chain) - 1):
        I, J = chain[i], chain[i + 1]
        if I.ring != ring or J.ring != ring:
            raise PolyError("chain ideals must live in the tower ring")
        if not contains(I, J):
            bad = next(g for g in J.gens if not normal_form(g, buchberger(I)).is_zero())
            failures.append({"level": i + 1, "kind": "not_descending", "generator": str(bad)})
            continue
        # kernel of P/I_{i+1} -> P/I_i is I_i/I_{i+1}: must be nilpotent
        for g in I.gens:
            if not radical_member(g, J):
                failures.append({"level": i + 1, "kind": "kernel_not_nilpotent",
                                 "generator": str(g)})
                break
    return ValidationReport(not failures, failures)


class Tower:
    """Descending chain ``I_1 ⊇ I_2 ⊇ ...`` with nilpotent transition kernels.

    Construction validates the chain and raises :class:`TowerError` otherwise.
    """

    def __init__(self, ring: VarSpec, chain: Sequence[Ideal]):
        if ring.invertible:
            raise PolyError("tower rings are polynomial rings")
        chain = tuple(I if I.ring == ring else I.to_ring(ring) for I in chain)
        if not chain:
            raise TowerError("a tower needs at least one level")
        report = _check_chain(ring, chain)
        if not report.ok:
            raise TowerError(f"invalid tower: {report.failures[0]}")
        self.ring = ring
        self.chain = chain

    @property
    def depth(self) -> int:
        return len(self.chain)

    def level(self, i: int) -> Ideal:
        """1-based level ideal."""
        if not 1 <= i <= self.depth:
            raise PreconditionError(f"level {i} outside 1..{self.depth}")
        return self.chain[i - 1]

    def to_json(self) -> dict:
        d = self.ring.to_json()
        d["chain"] = [[str(g) for g in I.gens] for I in self.chain]
        return d

    def __repr__(self) -> str:
        return f"Tower({self.ring.names}, {[str(I) for I in self.chain]})"


def validate_tower(T: Union[Tower, Sequence[Ideal]], ring: Optional[VarSpec] = None) -> ValidationReport:
    """Check descent and nilpotency of each transition kernel.

    Accepts a constructed :class:`Tower` or a raw list of ideals, so that
    invalid chains can be diagnosed instead of rejected.
    """
    if isinstance(T, Tower):
        return _check_chain(T.ring, T.chain)
    chain = list(T)
    ring = ring or (chain[0].ring if chain else None)
    return _check_chain(ring, chain)


def tower_from_chain(ring: VarSpec, chain: Sequence[Ideal]) -> Tower:
    """Build a tower after checking that every level has the radical of ``I_1``."""
    chain = [I if I.ring == ring else I.to_ring(ring) for I in chain]
    if not chain:
        raise TowerError("empty chain")
    first = chain[0]
    for i, I in enumerate(chain[1:], start=2):
        if not contains(chain[i - 2], I):
            raise TowerError(f"chain not descending at level {i - 1}")
        for g in first.gens:
            if not radical_member(g, I):
                raise TowerError(f"radical mismatch: {g} of I_1 is not in the radical of I_{i}")
        for g in I.gens:
            if not radical_member(g, first):
                raise TowerError(f"radical mismatch: {g} of I_{i} is not in the radical of I_1")
    return Tower(ring, chain)


def load_tower(data: Union[str, dict]) -> Tower:
    """Read the JSON tower description (path, JSON text or parsed dict)."""
    if isinstance(data, str):
        if data.lstrip().startswith("{"):
            data = json.loads(data)
        else:
            with open(data) as fh:
                data = json.load(fh)
    ring = VarSpec(data["vars"], data.get("invertible", ()), data.get("series_var"))
    if ring.invertible:
        raise PolyError("tower description may not declare invertible variables")
    chain = [Ideal(ring, [parse_poly(g, ring) for g in level]) for level in data["chain"]]
    return Tower(ring, chain)


def quotient_tower(T: Tower, K: Ideal) -> Tower:
    """Levelwise presentation ``I_i + K`` of the closed subscheme cut out by ``K``."""
    if K.ring != T.ring:
        raise PolyError("quotient ideal must live in the tower ring")
    return Tower(T.ring, [I + K for I in T.chain])


def complete_localize(T: Tower, f: Poly) -> Tower:
    """Adjoin ``u`` with ``u*f = 1`` at every level."""
    f = f.to_spec(T.ring)
    if f.is_zero():
        raise PreconditionError("cannot localize at zero")
    u = T.ring.fresh_name("u")
    big = T.ring.with_vars([u])
    rel = Poly.var(big, u) * f.to_spec(big) - 1
    return Tower(big, [Ideal(big, [g.to_spec(big) for g in I.gens] + [rel]) for I in T.chain])


def is_ideal_of_definition(J: Ideal, T: Tower) -> tuple:
    """Openness (``J ⊇ I_i`` for some level) plus nilpotency mod every level.

    Returns ``(flag, witness)``.  The witness records the opening level (or
    None) and the first non-nilpotent generator with its level, if any.
    """
    if J.ring != T.ring:
        raise PolyError("ring mismatch")
    open_at = next((i for i in range(1, T.depth + 1) if contains(J, T.level(i))), None)
    bad = None
    for i in range(1, T.depth + 1):
        for g in J.gens:
            if not radical_member(g, T.level(i)):
                bad = {"level": i, "generator": str(g)}
                break
        if bad:
            break
    witness = {"open_at": open_at, "not_nilpotent": bad}
    return open_at is not None and bad is None, witness


@dataclass
class AdicReport:
    """Two-sided cofinality evidence between the chain and powers of a candidate.

    ``forward_witness[n] = i`` means ``I_i ⊆ candidate**n`` (the power is
    open); ``backward_witness[i] = m`` means ``candidate**m ⊆ I_i``.  A value
    of None records a failure at that index.
    """

    candidate: Ideal
    depth: int
    n_max: int
    forward_witness: Dict[int, Optional[int]]
    backward_witness: Dict[int, Optional[int]]

    @property
    def forward_failure(self) -> Optional[int]:
        return next((n for n, i in sorted(self.forward_witness.items()) if i is None), None)

    @property
    def backward_failure(self) -> Optional[int]:
        return next((i for i, m in sorted(self.backward_witness.items()) if m is None), None)

    @property
    def passed(self) -> bool:
        return self.forward_failure is None and self.backward_failure is None

    def to_json(self) -> dict:
        return {
            "candidate": [str(g) for g in self.candidate.gens],
            "depth": self.depth,
            "n_max": self.n_max,
            "pass": self.passed,
            "forward_witness": {str(k): v for k, v in sorted(self.forward_witness.items())},
            "backward_witness": {str(k): v for k, v in sorted(self.backward_witness.items())},
            "failure_m": self.forward_failure,
            "failure_level": self.backward_failure,
        }


def adic_witness_test(T: Tower, candidate: Ideal, n_max: int = DEFAULT_NMAX,
                      m_max: Optional[int] = None) -> AdicReport:
    """Search containments between ``candidate**n`` and the chain.

    Forward: for ``n <= n_max`` find the first level ``i`` with
    ``I_i ⊆ candidate**n``.  Backward: for ``i <= min(depth, n_max)`` find
    the least ``m <= m_max`` (default ``2*max(depth, n_max)``) with
    ``candidate**m ⊆ I_i``.
    """
    ok, wit = is_ideal_of_definition(candidate, T)
    if not ok:
        raise PreconditionError(f"candidate is not an ideal of definition: {wit}")
    if n_max < 1:
        raise PreconditionError("n_max must be positive")
    m_max = m_max or 2 * max(T.depth, n_max)
    powers: Dict[int, Ideal] = {}

    def power(k):
        if k not in powers:
            powers[k] = candidate if k == 1 else Ideal(candidate.ring, buchberger(power(k - 1) * candidate).basis)
        return powers[k]

    forward = {}
    for n in range(1, n_max + 1):
        P = power(n)
        forward[n] = next((i for i in range(1, T.depth + 1) if contains(P, T.level(i))), None)
    backward = {}
    for i in range(1, min(T.depth, n_max) + 1):
        I = T.level(i)
        backward[i] = next((m for m in range(1, m_max + 1) if contains(I, power(m))), None)
    return AdicReport(candidate, T.depth, n_max, forward, backward)


@dataclass
class DichotomyResult:
    """Outcome of the cofinal / nonzero-intersection dichotomy at finite depth.

    ``case`` is "cofinal" (``data`` maps n to the first level inside
    ``m**n``), "stabilized_intersection" (``data`` holds generators of the
    stable core and the index it stabilised at), or "inconclusive".
    """

    case: str
    data: dict

    def to_json(self) -> dict:
        return {"case": self.case, **self.data}


def _maximal_point(m: Ideal) -> Dict[str, object]:
    point = {}
    for g in m.gens:
        lin = [e for e in g.terms if sum(e) == 1]
        if len(lin) != 1 or g.total_degree() != 1 or len(g.terms) > 2:
            raise PreconditionError(f"{g} is not of the form var - c")
        (e,) = lin
        name = m.ring.names[e.index(1)]
        if g.terms[e] != 1:
            g = g * (1 / g.terms[e])
        point[name] = -g.constant_term()
    if set(point) != set(m.ring.names):
        raise PreconditionError("maximal ideal must involve every variable exactly once")
    return point


def chevalley_dichotomy(T: Tower, m: Ideal, n_max: int = DEFAULT_NMAX) -> DichotomyResult:
    """Decide, at finite depth, which branch of Chevalley's dichotomy shows up.

    Cofinal: every ``m**n`` (n <= n_max) contains some level.  Otherwise the
    stable core of ``I_depth + m**n`` is tracked: its reduced generators that
    do not lie in ``m**n``.  When that core is nonzero, equal for two
    consecutive ``n``, ``I_depth + m**n`` already equals ``I_{depth-1} + m**n``,
    and every core generator lies in every level, the intersection case is
    reported.
    """
    if m.ring != T.ring:
        raise PolyError("ring mismatch")
    _maximal_point(m)
    powers = {1: m}
    for n in range(2, n_max + 2):
        powers[n] = Ideal(m.ring, buchberger(powers[n - 1] * m).basis)

    witness = {}
    for n in range(1, n_max + 1):
        witness[n] = next((i for i in range(1, T.depth + 1) if contains(powers[n], T.level(i))), None)
    if all(v is not None for v in witness.values()):
        return DichotomyResult("cofinal", {"witness": {str(k): v for k, v in witness.items()}})

    last = T.level(T.depth)
    prev = T.level(T.depth - 1) if T.depth > 1 else None
    cores = {}
    for n in range(1, n_max + 1):
        L = last + powers[n]
        if prev is not None and not ideals_equal(L, prev + powers[n]):
            cores[n] = None
            continue
        G = buchberger(L)
        Gm = buchberger(powers[n])
        core = [g for g in G.basis if not normal_form(g, Gm).is_zero()]
        cores[n] = Ideal(T.ring, core)
    for n in range(1, n_max):
        a, b = cores[n], cores[n + 1]
        if a is None or b is None or a.is_zero():
            continue
        if ideals_equal(a, b) and all(contains(I, a) for I in T.chain):
            return DichotomyResult("stabilized_intersection", {
                "generators": [str(g) for g in buchberger(a).basis],
                "stable_from": n,
                "depth": T.depth,
            })
    return DichotomyResult("inconclusive", {"depth": T.depth, "n_max": n_max})
