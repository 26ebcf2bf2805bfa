"""Buchberger's algorithm and the ideal operations built on it.

Everything here works in an honest polynomial ring: an :class:`Ideal` may
not live over a :class:`~formalis.exactpoly.VarSpec` with invertible
variables.  Laurent inputs are handled by callers through
:func:`~formalis.exactpoly.laurent_clear` followed by :func:`saturate`.

Internally polynomials are plain ``{exponent tuple: Fraction}`` dicts and a
monomial order is a function from exponent tuples to flat integer tuples
(larger key = larger monomial).
"""

from __future__ import annotations

import contextlib
import contextvars
import hashlib
import heapq
import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .exactpoly import Exp, Poly, PolyError, VarSpec, parse_poly

log = logging.getLogger(__name__)

CACHE_VERSION = 1


class ResourceCapError(RuntimeError):
    """A configured degree or S-pair budget was exceeded."""


@dataclass(frozen=True)
class Limits:
    max_degree: int = 40
    max_pairs: int = 200_000


_limits = contextvars.ContextVar("formalis_limits", default=Limits())
_cache = contextvars.ContextVar("formalis_gb_cache", default=None)


@contextlib.contextmanager
def resource_limits(max_degree: int = 40, max_pairs: int = 200_000):
    token = _limits.set(Limits(max_degree, max_pairs))
    try:
        yield
    finally:
        _limits.reset(token)


# -- monomial orders --------------------------------------------------------

@dataclass(frozen=True)
class MonomialOrder:
    """``lex`` or ``grevlex`` on ``variables`` (a permutation of the ring).

    ``block`` > 0 turns the order into a product order: grevlex on the first
    ``block`` variables, ties broken by grevlex on the rest.
    """

    kind: str = "grevlex"
    variables: Tuple[str, ...] = ()
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def for_ring(self, spec: VarSpec) -> "MonomialOrder":
        if not self.variables:
            return MonomialOrder(self.kind, spec.names, self.block)
        if sorted(self.variables) != sorted(spec.names):
            raise PolyError(f"order variables {self.variables} are not a permutation of {spec.names}")
        return self

    def key_function(self, spec: VarSpec) -> Callable[[Exp], Tuple[int, ...]]:
        perm = [spec.index(v) for v in (self.variables or spec.names)]
        if self.kind == "lex":
            return lambda e: tuple(e[i] for i in perm)
        if self.block:
            first, rest = perm[:self.block], perm[self.block:]
            rfirst, rrest = first[::-1], rest[::-1]

            def key(e):
                return ((sum(e[i] for i in first),) + tuple(-e[i] for i in rfirst)
                        + (sum(e[i] for i in rest),) + tuple(-e[i] for i in rrest))
            return key
        rperm = perm[::-1]
        return lambda e: (sum(e),) + tuple(-e[i] for i in rperm)


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


# -- ideals -----------------------------------------------------------------

class Ideal:
    """Generators of an ideal in a polynomial ring (zero generators dropped)."""

    __slots__ = ("ring", "gens")

    def __init__(self, ring: VarSpec, gens: Iterable[Poly] = ()):
        if ring.invertible:
            raise PolyError("ideals live in polynomial rings; clear denominators first")
        out = []
        for g in gens:
            if g.spec != ring:
                g = g.to_spec(ring)
            if g.has_negative_exponents():
                raise PolyError(f"generator {g} has negative exponents")
            if not g.is_zero():
                out.append(g)
        self.ring = ring
        self.gens = tuple(out)

    @classmethod
    def parse(cls, ring: VarSpec, texts: Iterable[str]) -> "Ideal":
        return cls(ring, [parse_poly(s, ring) for s in texts])

    def is_zero(self) -> bool:
        return not self.gens

    def __add__(self, other: "Ideal") -> "Ideal":
        _same_ring(self, other)
        return Ideal(self.ring, self.gens + other.gens)

    def __mul__(self, other: "Ideal") -> "Ideal":
        _same_ring(self, other)
        return Ideal(self.ring, [a * b for a in self.gens for b in other.gens])

    def __pow__(self, k: int) -> "Ideal":
        if k < 0:
            raise ValueError("negative ideal power")
        if k == 0:
            return Ideal(self.ring, [Poly.constant(self.ring, 1)])
        if self.is_zero():
            return self
        # minimalise in between: powers of monomial-heavy ideals blow up otherwise
        result = self
        for _ in range(k - 1):
            result = Ideal(self.ring, buchberger(result * self).basis)
        return result

    def to_ring(self, ring: VarSpec) -> "Ideal":
        return Ideal(ring, [g.to_spec(ring) for g in self.gens])

    def __repr__(self) -> str:
        return f"Ideal({[str(g) for g in self.gens]}, vars={self.ring.names})"

    def __str__(self) -> str:
        return "(" + ", ".join(str(g) for g in self.gens) + ")" if self.gens else "(0)"


def _same_ring(a: Ideal, b: Ideal) -> None:
    if a.ring != b.ring:
        raise PolyError(f"ring mismatch: {a.ring.to_json()} vs {b.ring.to_json()}")


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Gröbner basis: monic, interreduced, sorted by leading monomial."""

    ring: VarSpec
    order: MonomialOrder
    basis: Tuple[Poly, ...]

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def leading_monomials(self) -> List[Exp]:
        key = self.order.key_function(self.ring)
        return [max(g.terms, key=key) for g in self.basis]

    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.basis)

    def __str__(self) -> str:
        return "{" + ", ".join(str(g) for g in self.basis) + "}"


# -- core polynomial kernels (dict representation) --------------------------

def _lead(p: dict, key) -> Exp:
    return max(p, key=key)


def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


class _Basis:
    """Working basis entries: (lead monomial, lead coeff, full dict)."""

    def __init__(self, key):
        self.key = key
        self.lms: List[Exp] = []
        self.lcs: List[Fraction] = []
        self.polys: List[dict] = []

    def add(self, p: dict) -> int:
        lm = _lead(p, self.key)
        self.lms.append(lm)
        self.lcs.append(p[lm])
        self.polys.append(p)
        return len(self.polys) - 1


def _reduce(p: dict, lms, lcs, polys, active, key, cofactors=None) -> dict:
    """Full normal form of ``p`` (consumed) by the polynomials in ``active``."""
    neg = lambda e: tuple(-v for v in key(e))
    heap = [(neg(m), m) for m in p]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = p.get(m)
        if c is None:
            continue
        del p[m]
        for j in active:
            lm = lms[j]
            if _divides(lm, m):
                q = tuple(a - b for a, b in zip(m, lm))
                qc = c / lcs[j]
                if cofactors is not None:
                    cofactors[j][q] = cofactors[j].get(q, 0) + qc
                for gm, gc in polys[j].items():
                    if gm == lm:
                        continue
                    mm = tuple(a + b for a, b in zip(gm, q))
                    old = p.get(mm)
                    if old is None:
                        p[mm] = -qc * gc
                        heapq.heappush(heap, (neg(mm), mm))
                    else:
                        v = old - qc * gc
                        if v:
                            p[mm] = v
                        else:
                            del p[mm]
                break
        else:
            rem[m] = c
    return rem


def _spoly(f: dict, flm, flc, g: dict, glm, glc) -> dict:
    lcm = _lcm(flm, glm)
    mf = tuple(a - b for a, b in zip(lcm, flm))
    mg = tuple(a - b for a, b in zip(lcm, glm))
    out = {}
    for e, c in f.items():
        if e == flm:
            continue
        out[tuple(a + b for a, b in zip(e, mf))] = c / flc
    for e, c in g.items():
        if e == glm:
            continue
        mm = tuple(a + b for a, b in zip(e, mg))
        v = out.get(mm, 0) - c / glc
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def _groebner_dicts(polys: List[dict], nvars: int, key, limits: Limits) -> List[dict]:
    """Buchberger with Gebauer–Möller pair management; returns a reduced basis."""
    B = _Basis(key)
    active: List[int] = []
    pairs: List[Tuple[tuple, int, int]] = []  # heap of (key(lcm), i, j)
    npairs = 0

    def update(h_idx: int):
        nonlocal pairs, active
        hlm = B.lms[h_idx]
        # new pairs (g, h) for g in active
        cand = []
        for g in active:
            cand.append((g, _lcm(B.lms[g], hlm)))
        # chain criterion among new pairs
        kept = []
        for k, (g, l) in enumerate(cand):
            coprime = all(a == 0 or b == 0 for a, b in zip(B.lms[g], hlm))
            dominated = False
            for k2, (g2, l2) in enumerate(cand):
                if k2 == k:
                    continue
                if _divides(l2, l) and (l2 != l or k2 < k):
                    dominated = True
                    break
            if not dominated:
                kept.append((g, l, coprime))
        new = [(g, l) for g, l, cp in kept if not cp]
        # prune old pairs via the chain criterion through h
        old = []
        for entry in pairs:
            _, i, j = entry
            l = _lcm(B.lms[i], B.lms[j])
            if (_divides(hlm, l) and _lcm(B.lms[i], hlm) != l and _lcm(B.lms[j], hlm) != l):
                continue
            old.append(entry)
        for g, l in new:
            old.append(((sum(l),) + key(l), g, h_idx))
        heapq.heapify(old)
        pairs = old
        # drop basis elements whose leading monomial h divides
        active = [g for g in active if not _divides(hlm, B.lms[g])]
        active.append(h_idx)

    for p in polys:
        p = dict(p)
        if not p:
            continue
        r = _reduce(p, B.lms, B.lcs, B.polys, active, key)
        if r:
            idx = B.add(r)
            if not any(B.lms[idx]):
                return [{(0,) * nvars: Fraction(1)}]
            update(idx)

    while pairs:
        _, i, j = heapq.heappop(pairs)
        npairs += 1
        if npairs > limits.max_pairs:
            raise ResourceCapError(f"S-pair budget of {limits.max_pairs} exceeded")
        s = _spoly(B.polys[i], B.lms[i], B.lcs[i], B.polys[j], B.lms[j], B.lcs[j])
        if not s:
            continue
        r = _reduce(s, B.lms, B.lcs, B.polys, active, key)
        if not r:
            continue
        idx = B.add(r)
        if sum(B.lms[idx]) > limits.max_degree:
            raise ResourceCapError(
                f"basis element of degree {sum(B.lms[idx])} exceeds cap {limits.max_degree}")
        if not any(B.lms[idx]):
            return [{(0,) * nvars: Fraction(1)}]
        update(idx)

    # interreduce: keep minimal leading monomials, reduce tails, make monic
    minimal = [g for g in active
               if not any(h != g and _divides(B.lms[h], B.lms[g]) for h in active)]
    minimal.sort(key=lambda g: key(B.lms[g]))
    out = []
    for g in minimal:
        others = [h for h in minimal if h != g]
        p = dict(B.polys[g])
        lm, lc = B.lms[g], B.lcs[g]
        del p[lm]
        tail = _reduce(p, B.lms, B.lcs, B.polys, others, key)
        tail = {e: c / lc for e, c in tail.items()}
        tail[lm] = Fraction(1)
        out.append(tail)
    return sorted(out, key=lambda p: key(_lead(p, key)), reverse=True)


# -- cache ------------------------------------------------------------------

class GBCache:
    """Directory of reduced bases keyed by a hash of (ring, order, gens).

    Entries are plain text in the polynomial grammar; unreadable or
    mismatching entries are ignored and recomputed.
    """

    def __init__(self, directory: str):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)

    @staticmethod
    def _header(ring: VarSpec, order: MonomialOrder, gens: Sequence[Poly]) -> str:
        gens = sorted(str(g) for g in gens)
        return "\n".join([
            f"formalis-gb v{CACHE_VERSION}",
            "vars " + " ".join(ring.names),
            f"order {order.kind} {order.block} " + " ".join(order.variables or ring.names),
            *("gen " + g for g in gens),
        ])

    def _path(self, header: str) -> str:
        h = hashlib.sha256(header.encode()).hexdigest()
        return os.path.join(self.directory, h[:2], h + ".gb")

    def get(self, ring, order, gens) -> Optional[Tuple[Poly, ...]]:
        header = self._header(ring, order, gens)
        path = self._path(header)
        try:
            with open(path) as fh:
                text = fh.read()
            head, sep, body = text.partition("\n---\n")
            if not sep or head != header:
                return None
            return tuple(parse_poly(line, ring) for line in body.splitlines() if line.strip())
        except (OSError, ValueError):
            return None

    def put(self, ring, order, gens, basis) -> None:
        header = self._header(ring, order, gens)
        path = self._path(header)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        tmp = f"{path}.{os.getpid()}.tmp"
        with open(tmp, "w") as fh:
            fh.write(header + "\n---\n" + "\n".join(str(b) for b in basis) + "\n")
        os.replace(tmp, path)


@contextlib.contextmanager
def use_cache(directory: Optional[str]):
    """Route :func:`buchberger` through an on-disk cache inside the block."""
    token = _cache.set(GBCache(directory) if directory else None)
    try:
        yield
    finally:
        _cache.reset(token)


# -- public operations ------------------------------------------------------

def buchberger(I: Ideal, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
    """Reduced Gröbner basis of ``I``; unique for the pair (ideal, order)."""
    ring = I.ring
    order = order.for_ring(ring)
    limits = _limits.get()
    for g in I.gens:
        if g.total_degree() > limits.max_degree:
            raise ResourceCapError(f"input degree {g.total_degree()} exceeds cap {limits.max_degree}")
    if not I.gens:
        return GroebnerBasis(ring, order, ())
    cache = _cache.get()
    if cache is not None:
        hit = cache.get(ring, order, I.gens)
        if hit is not None:
            return GroebnerBasis(ring, order, hit)
    key = order.key_function(ring)
    out = _groebner_dicts([g.terms for g in I.gens], ring.nvars, key, limits)
    basis = tuple(Poly(ring, p, _trusted=True) for p in out)
    log.debug("GB of %d generators in %s: %d elements", len(I.gens), ring.names, len(basis))
    if cache is not None:
        cache.put(ring, order, I.gens, basis)
    return GroebnerBasis(ring, order, basis)


def groebner(I: Ideal, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
    return buchberger(I, order)


def normal_form(p: Poly, G: GroebnerBasis, cofactors: bool = False):
    """Remainder of ``p`` modulo ``G``.

    With ``cofactors=True`` returns ``(r, qs)`` such that
    ``p == sum(q*g for q, g in zip(qs, G.basis)) + r``.
    """
    if p.spec != G.ring:
        raise PolyError(f"ring mismatch: {p.spec.names} vs {G.ring.names}")
    key = G.order.key_function(G.ring)
    polys = [g.terms for g in G.basis]
    lms = [_lead(g, key) for g in polys]
    lcs = [g[lm] for g, lm in zip(polys, lms)]
    cof = [dict() for _ in polys] if cofactors else None
    r = _reduce(dict(p.terms), lms, lcs, polys, range(len(polys)), key, cof)
    rp = Poly(G.ring, r, _trusted=True)
    if cofactors:
        return rp, [Poly(G.ring, {e: c for e, c in q.items() if c}, _trusted=True) for q in cof]
    return rp


def member(p: Poly, I: Ideal) -> bool:
    return normal_form(p.to_spec(I.ring), buchberger(I)).is_zero()


def contains(I: Ideal, J: Ideal) -> bool:
    """True iff ``J`` is a subset of ``I``."""
    _same_ring(I, J)
    G = buchberger(I)
    return all(normal_form(g, G).is_zero() for g in J.gens)


def ideals_equal(I: Ideal, J: Ideal) -> bool:
    _same_ring(I, J)
    return buchberger(I).basis == buchberger(J).basis


def _block_order(ring: VarSpec, first: Sequence[str]) -> MonomialOrder:
    rest = [v for v in ring.names if v not in set(first)]
    return MonomialOrder("grevlex", tuple(first) + tuple(rest), block=len(first))


def eliminate(I: Ideal, drop: Iterable[str]) -> Ideal:
    """Generators of ``I`` intersected with the subring without ``drop``.

    The result lives in the ring with the dropped variables removed.
    """
    drop = list(dict.fromkeys(drop))
    for v in drop:
        I.ring.index(v)
    sub = I.ring.without(drop)
    if not drop:
        return Ideal(sub, buchberger(I).basis)
    G = buchberger(I, _block_order(I.ring, drop))
    idx = [I.ring.index(v) for v in drop]
    keep = [g for g in G.basis if all(all(e[i] == 0 for i in idx) for e in g.terms)]
    return Ideal(sub, [g.to_spec(sub) for g in keep])


def saturate(I: Ideal, f: Poly) -> Ideal:
    """``(I : f^infinity)`` via a fresh Rabinowitsch variable ``u``."""
    f = f.to_spec(I.ring)
    if f.is_zero():
        raise PolyError("cannot saturate by zero")
    u = I.ring.fresh_name("u")
    big = I.ring.with_vars([u])
    uf = Poly.var(big, u) * f.to_spec(big) - 1
    J = Ideal(big, [g.to_spec(big) for g in I.gens] + [uf])
    out = eliminate(J, [u])
    return Ideal(I.ring, [g.to_spec(I.ring) for g in out.gens])


def radical_member(f: Poly, I: Ideal) -> bool:
    """True iff some power of ``f`` lies in ``I`` (Rabinowitsch criterion)."""
    f = f.to_spec(I.ring)
    if f.is_zero():
        return True
    u = I.ring.fresh_name("u")
    big = I.ring.with_vars([u])
    J = Ideal(big, [g.to_spec(big) for g in I.gens] + [Poly.var(big, u) * f.to_spec(big) - 1])
    return buchberger(J).is_unit()


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """``I ∩ J`` as the elimination of ``u`` from ``u*I + (1-u)*J``."""
    _same_ring(I, J)
    u = I.ring.fresh_name("u")
    big = I.ring.with_vars([u])
    U = Poly.var(big, u)
    gens = [U * g.to_spec(big) for g in I.gens] + [(1 - U) * g.to_spec(big) for g in J.gens]
    out = eliminate(Ideal(big, gens), [u])
    return Ideal(I.ring, [g.to_spec(I.ring) for g in out.gens])


def reduced_gens(I: Ideal) -> Tuple[str, ...]:
    """Canonical textual form (reduced grevlex basis)."""
    return tuple(str(g) for g in buchberger(I).basis)
