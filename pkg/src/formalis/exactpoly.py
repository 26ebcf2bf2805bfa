"""Exact multivariate (Laurent) polynomials over the rationals.

Polynomials carry a :class:`VarSpec` naming their variables, which of them
may appear with negative exponents, and optionally a distinguished series
variable ``t``.  :class:`TruncSeries` wraps a polynomial together with a
truncation order in that series variable.

Example
-------
>>> spec = VarSpec(("x", "y", "t"), invertible=("x",), series_var="t")
>>> f = parse_poly("y + x^-1*t", spec)
>>> q, m = laurent_clear(f)
>>> str(q), str(m)
('x*y + t', 'x')
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

Rat = Fraction
Exp = Tuple[int, ...]
Scalar = Union[int, Fraction]

# exponents are stored as python ints; keep them in a fixed signed range
EXP_LIMIT = 2**31 - 1

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class PolyError(ValueError):
    """Raised for malformed polynomial data (bad exponents, ring mismatch)."""


class ParseError(PolyError):
    """Syntax error in polynomial text; ``pos`` is the 0-based offset."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


@dataclass(frozen=True)
class VarSpec:
    """Ordered variable names, the Laurent subset and the series variable."""

    names: Tuple[str, ...]
    invertible: frozenset = field(default_factory=frozenset)
    series_var: Optional[str] = None

    def __init__(self, names: Iterable[str], invertible: Iterable[str] = (),
                 series_var: Optional[str] = None):
        names = tuple(names)
        invertible = frozenset(invertible)
        if len(set(names)) != len(names):
            raise PolyError(f"duplicate variable names in {names}")
        for n in names:
            if not _IDENT.match(n):
                raise PolyError(f"invalid identifier {n!r}")
        if not invertible <= set(names):
            raise PolyError(f"invertible variables {sorted(invertible - set(names))} not declared")
        if series_var is not None:
            if series_var not in names:
                raise PolyError(f"series variable {series_var!r} not declared")
            if series_var in invertible:
                raise PolyError("series variable cannot be invertible")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "invertible", invertible)
        object.__setattr__(self, "series_var", series_var)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise PolyError(f"unknown variable {name!r} for ring {self.names}") from None

    @property
    def series_index(self) -> Optional[int]:
        return None if self.series_var is None else self.names.index(self.series_var)

    def polynomial(self) -> "VarSpec":
        """The plain polynomial ring on the same variables."""
        return VarSpec(self.names)

    def with_vars(self, extra: Sequence[str]) -> "VarSpec":
        return VarSpec(self.names + tuple(extra), self.invertible, self.series_var)

    def without(self, drop: Iterable[str]) -> "VarSpec":
        drop = set(drop)
        names = tuple(n for n in self.names if n not in drop)
        sv = self.series_var if self.series_var not in drop else None
        return VarSpec(names, self.invertible - drop, sv)

    def fresh_name(self, base: str = "u") -> str:
        if base not in self.names:
            return base
        k = 1
        while f"{base}{k}" in self.names:
            k += 1
        return f"{base}{k}"

    def to_json(self) -> dict:
        return {"vars": list(self.names), "invertible": sorted(self.invertible),
                "series_var": self.series_var}


def grevlex_key(e: Exp) -> Tuple[int, ...]:
    """Sort key; larger key means larger monomial in grevlex."""
    return (sum(e),) + tuple(-a for a in reversed(e))


def _to_rat(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficient must be int or Fraction, got {type(c).__name__}")


class Poly:
    """Immutable sparse polynomial with rational coefficients.

    ``terms`` maps exponent tuples (aligned with ``spec.names``) to nonzero
    :class:`~fractions.Fraction` coefficients.
    """

    __slots__ = ("spec", "terms", "_hash")

    def __init__(self, spec: VarSpec, terms: Mapping[Exp, Scalar] = None, *, _trusted=False):
        self.spec = spec
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            n = spec.nvars
            inv = [name in spec.invertible for name in spec.names]
            for e, c in (terms or {}).items():
                e = tuple(int(a) for a in e)
                if len(e) != n:
                    raise PolyError(f"exponent {e} does not match ring {spec.names}")
                c = _to_rat(c)
                if c == 0:
                    continue
                for a, ok in zip(e, inv):
                    if a < 0 and not ok:
                        raise PolyError(f"negative exponent in {e} on a non-invertible variable")
                    if abs(a) > EXP_LIMIT:
                        raise PolyError("exponent overflow")
                clean[e] = clean.get(e, 0) + c
                if clean[e] == 0:
                    del clean[e]
            self.terms = clean
        self._hash = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, spec: VarSpec) -> "Poly":
        return cls(spec, {}, _trusted=True)

    @classmethod
    def constant(cls, spec: VarSpec, c: Scalar) -> "Poly":
        c = _to_rat(c)
        return cls(spec, {(0,) * spec.nvars: c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, spec: VarSpec, name: str, power: int = 1) -> "Poly":
        e = [0] * spec.nvars
        e[spec.index(name)] = power
        return cls(spec, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, spec: VarSpec, exps: Exp, c: Scalar = 1) -> "Poly":
        return cls(spec, {tuple(exps): c})

    # -- basic queries --------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.spec.nvars, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def sorted_terms(self) -> list:
        """Terms in decreasing grevlex order."""
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, name: str) -> int:
        i = self.spec.index(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def min_degree(self, name: str) -> int:
        i = self.spec.index(name)
        if not self.terms:
            return 0
        return min(e[i] for e in self.terms)

    def has_negative_exponents(self) -> bool:
        return any(a < 0 for e in self.terms for a in e)

    def is_homogeneous(self, degree: Optional[int] = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return degree is None or degs.pop() == degree

    def homogeneous_part(self, degree: int) -> "Poly":
        return Poly(self.spec, {e: c for e, c in self.terms.items() if sum(e) == degree},
                    _trusted=True)

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "Poly") -> None:
        if other.spec != self.spec:
            raise PolyError(f"ring mismatch: {self.spec.names} vs {other.spec.names}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.spec, other)
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly(self.spec, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.spec, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly.zero(self.spec)
            return Poly(self.spec, {e: c * other for e, c in self.terms.items()}, _trusted=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        for e in out:
            for a in e:
                if abs(a) > EXP_LIMIT:
                    raise PolyError("exponent overflow")
        return Poly(self.spec, out, _trusted=True)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "Poly":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        inv = 1 / _to_rat(other)
        return self * inv

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            if not self.is_monomial():
                raise PolyError("negative power of a non-monomial")
            (e, c), = self.terms.items()
            return Poly(self.spec, {tuple(a * k for a in e): c ** k})
        result = Poly.constant(self.spec, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.spec, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.spec == other.spec and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.spec, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution ---------------------------------------
    def diff(self, name: str) -> "Poly":
        i = self.spec.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return Poly(self.spec, out, _trusted=True)

    def subs(self, values: Mapping[str, Union[Scalar, "Poly"]], spec: VarSpec = None) -> "Poly":
        """Substitute variables by scalars or polynomials of ring ``spec``.

        Unsubstituted variables must exist in the target ring.
        """
        spec = spec or self.spec
        idx = {self.spec.index(k): v for k, v in values.items()}
        result = Poly.zero(spec)
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                v = idx[i]
                base = v if isinstance(v, Poly) else Poly.constant(spec, v)
                cache[key] = base ** k
            return cache[key]

        for e, c in self.terms.items():
            rest = [0] * spec.nvars
            term = Poly.constant(spec, c)
            for i, a in enumerate(e):
                if i in idx:
                    if a:
                        term = term * power(i, a)
                elif a:
                    rest[spec.index(self.spec.names[i])] = a
            result = result + term * Poly.monomial(spec, tuple(rest))
        return result

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        total = Fraction(0)
        idx = [(self.spec.index(k), _to_rat(v)) for k, v in point.items()]
        if len(idx) != self.spec.nvars:
            raise PolyError("evaluate needs a value for every variable")
        for e, c in self.terms.items():
            v = c
            for i, x in idx:
                if e[i]:
                    v *= x ** e[i]
            total += v
        return total

    def to_spec(self, spec: VarSpec) -> "Poly":
        """Re-express in another ring by matching variable names."""
        if spec == self.spec:
            return self
        pos = []
        for i, name in enumerate(self.spec.names):
            pos.append(spec.names.index(name) if name in spec.names else None)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * spec.nvars
            for i, a in enumerate(e):
                if a:
                    if pos[i] is None:
                        raise PolyError(f"variable {self.spec.names[i]!r} absent from target ring")
                    ne[pos[i]] = a
            out[tuple(ne)] = c
        return Poly(spec, out)

    def coefficient_in(self, name: str, k: int) -> "Poly":
        """Coefficient of ``name**k`` as a polynomial free of ``name``."""
        i = self.spec.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                out[e[:i] + (0,) + e[i + 1:]] = c
        return Poly(self.spec, out, _trusted=True)

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        lc = self.sorted_terms()[0][1]
        return self * (1 / lc)

    # -- printing -------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                name if a == 1 else f"{name}^{a}"
                for name, a in zip(self.spec.names, e) if a
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if k == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r}, vars={self.spec.names})"


def arith(a: Poly, b: Poly, op: str) -> Poly:
    """Apply ``op`` in {"add", "sub", "mul"}; both operands must share a ring."""
    if a.spec != b.spec:
        raise PolyError(f"ring mismatch: {a.spec.names} vs {b.spec.names}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^]))")


def _tokenize(text: str) -> list:
    pos = 0
    toks = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastgroup)
        toks.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


def parse_poly(text: str, spec: VarSpec) -> Poly:
    """Parse ``text`` in the grammar ``term (('+'|'-') term)*``.

    A term is an optional rational coefficient followed by ``*``-separated
    factors ``name`` or ``name^k`` (``k`` may be negative for invertible
    variables).
    """
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos]

    def take(kind=None, value=None):
        nonlocal pos
        tok = toks[pos]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want}, found {tok[1] or 'end of input'!r}", text, tok[2])
        pos += 1
        return tok

    def signed_int():
        sign = 1
        if peek()[0] == "op" and peek()[1] in "+-":
            sign = -1 if take()[1] == "-" else 1
        return sign * int(take("num")[1])

    def factor(exps, coef):
        kind, val, at = peek()
        if kind == "num":
            take()
            c = Fraction(int(val))
            if peek()[1] == "/":
                take()
                d = int(take("num")[1])
                if d == 0:
                    raise ParseError("zero denominator", text, at)
                c /= d
            return coef * c
        if kind == "ident":
            take()
            if val not in spec.names:
                raise ParseError(f"unknown variable {val!r}", text, at)
            k = 1
            if peek()[1] == "^":
                take()
                k = signed_int()
            i = spec.names.index(val)
            exps[i] += k
            return coef
        raise ParseError(f"unexpected {val or 'end of input'!r}", text, at)

    def term(sign):
        exps = [0] * spec.nvars
        coef = Fraction(sign)
        coef = factor(exps, coef)
        while peek()[1] == "*":
            take()
            coef = factor(exps, coef)
        for name, a in zip(spec.names, exps):
            if a < 0 and name not in spec.invertible:
                raise ParseError(f"negative exponent on non-invertible variable {name!r}",
                                 text, toks[pos - 1][2])
        return tuple(exps), coef

    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if take()[1] == "-" else 1
    if peek()[0] == "end":
        raise ParseError("empty expression", text, peek()[2])
    acc: dict = {}
    while True:
        e, c = term(sign)
        acc[e] = acc.get(e, 0) + c
        kind, val, at = peek()
        if kind == "end":
            break
        if val in "+-" and kind == "op":
            take()
            sign = -1 if val == "-" else 1
            continue
        raise ParseError(f"unexpected {val!r}", text, at)
    return Poly(spec, acc)


# -- truncated series -------------------------------------------------------

@dataclass(frozen=True)
class TruncSeries:
    """A polynomial taken modulo ``t**order`` in the ring's series variable."""

    poly: Poly
    order: int

    def __post_init__(self):
        ti = self.poly.spec.series_index
        if ti is None:
            raise PolyError("ring has no series variable")
        if self.order < 1:
            raise PolyError("truncation order must be positive")
        for e in self.poly.terms:
            if not 0 <= e[ti] < self.order:
                raise PolyError(f"term {e} outside 0 <= t-degree < {self.order}")

    @property
    def spec(self) -> VarSpec:
        return self.poly.spec

    @property
    def tvar(self) -> str:
        return self.poly.spec.series_var

    def coeff(self, i: int) -> Poly:
        """Coefficient of ``t**i`` (a polynomial without ``t``)."""
        return self.poly.coefficient_in(self.tvar, i)

    def coeffs(self) -> list:
        return [self.coeff(i) for i in range(self.order)]

    @classmethod
    def from_coeffs(cls, spec: VarSpec, coeffs: Sequence[Poly], order: int) -> "TruncSeries":
        t = Poly.var(spec, spec.series_var)
        p = Poly.zero(spec)
        tp = Poly.constant(spec, 1)
        for i, c in enumerate(coeffs[:order]):
            p = p + c * tp
            tp = tp * t
        return cls(p, order)

    def valuation(self) -> Optional[int]:
        """Lowest t-order with a nonzero coefficient, None for zero."""
        if self.poly.is_zero():
            return None
        ti = self.spec.series_index
        return min(e[ti] for e in self.poly.terms)

    def _same(self, other: "TruncSeries") -> int:
        if other.spec != self.spec:
            raise PolyError("ring mismatch")
        return min(self.order, other.order)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        n = self._same(other)
        return truncate(self.poly + other.poly, n)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        n = self._same(other)
        return truncate(self.poly - other.poly, n)

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        n = self._same(other)
        return truncate(self.poly * other.poly, n)

    def __str__(self) -> str:
        return f"{self.poly} + O({self.tvar}^{self.order})"


def truncate(p: Poly, N: int) -> TruncSeries:
    """Drop every term of ``p`` with series-variable exponent ``>= N``."""
    ti = p.spec.series_index
    if ti is None:
        raise PolyError("ring has no series variable")
    if N < 1:
        raise PolyError("truncation order must be positive")
    if any(e[ti] < 0 for e in p.terms):
        raise PolyError("negative series-variable exponent")
    kept = {e: c for e, c in p.terms.items() if e[ti] < N}
    return TruncSeries(Poly(p.spec, kept, _trusted=True), N)


def laurent_clear(p: Poly) -> Tuple[Poly, Poly]:
    """Return ``(q, m)`` with ``q = m*p`` free of negative exponents.

    ``m`` is the smallest monomial in the invertible variables that works.
    """
    spec = p.spec
    shift = [0] * spec.nvars
    for i, name in enumerate(spec.names):
        if name in spec.invertible and p.terms:
            shift[i] = max(0, -min(e[i] for e in p.terms))
    m = Poly.monomial(spec, tuple(shift))
    q = Poly(spec, {tuple(a + s for a, s in zip(e, shift)): c for e, c in p.terms.items()},
             _trusted=True)
    return q, m


def iter_monomials(nvars: int, degree: int) -> Iterator[Exp]:
    """All exponent tuples of the given total degree (lex-descending)."""
    if nvars == 1:
        yield (degree,)
        return
    for a in range(degree, -1, -1):
        for rest in iter_monomials(nvars - 1, degree - a):
            yield (a,) + rest
