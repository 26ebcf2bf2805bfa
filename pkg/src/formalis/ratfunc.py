"""Univariate polynomials and reduced rational functions over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Tuple, Union

Number = Union[int, Fraction]


def _trim(c: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class UPoly:
    """Dense univariate polynomial; ``coeffs[k]`` multiplies ``w**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Number] = ()):
        self.coeffs = _trim(Fraction(c) for c in coeffs)

    @classmethod
    def const(cls, c: Number) -> "UPoly":
        return cls((c,))

    @classmethod
    def w(cls) -> "UPoly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> Fraction:
        return self.coeffs[-1]

    def __add__(self, o: "UPoly") -> "UPoly":
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return UPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "UPoly":
        return UPoly(-c for c in self.coeffs)

    def __sub__(self, o: "UPoly") -> "UPoly":
        return self + (-o)

    def __mul__(self, o: "UPoly") -> "UPoly":
        if self.is_zero() or o.is_zero():
            return UPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return UPoly(out)

    def scale(self, c: Number) -> "UPoly":
        return UPoly(a * c for a in self.coeffs)

    def divmod(self, o: "UPoly") -> Tuple["UPoly", "UPoly"]:
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(r) - len(o.coeffs) + 1)
        lc = o.lead()
        while len(r) >= len(o.coeffs) and r:
            k = len(r) - len(o.coeffs)
            c = r[-1] / lc
            q[k] = c
            for j, b in enumerate(o.coeffs):
                r[k + j] -= c * b
            r = list(_trim(r))
        return UPoly(q), UPoly(r)

    def monic(self) -> "UPoly":
        return self.scale(1 / self.lead()) if self.coeffs else self

    def gcd(self, o: "UPoly") -> "UPoly":
        a, b = self, o
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def __call__(self, x: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def w_multiplicity(self) -> int:
        """Multiplicity of the root ``w = 0`` (by repeated division by ``w``)."""
        if self.is_zero():
            raise ZeroDivisionError("multiplicity of w in the zero polynomial")
        k = 0
        p = self
        w = UPoly.w()
        while True:
            q, r = p.divmod(w)
            if not r.is_zero():
                return k
            p, k = q, k + 1

    def __eq__(self, o) -> bool:
        return isinstance(o, UPoly) and self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("w" if k == 1 else f"w^{k}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


class RatFunc:
    """``num/den`` in lowest terms with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: UPoly, den: UPoly = None, _reduced=False):
        den = den if den is not None else UPoly.const(1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = UPoly.const(1)
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num = num.divmod(g)[0]
                    den = den.divmod(g)[0]
                lc = den.lead()
                num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num, self.den = num, den

    @classmethod
    def const(cls, c: Number) -> "RatFunc":
        return cls(UPoly.const(c), _reduced=True)

    @classmethod
    def w(cls) -> "RatFunc":
        return cls(UPoly.w(), _reduced=True)

    @staticmethod
    def _lift(o) -> "RatFunc":
        if isinstance(o, RatFunc):
            return o
        if isinstance(o, (int, Fraction)):
            return RatFunc.const(o)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __add__(self, o) -> "RatFunc":
        o = self._lift(o)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, o) -> "RatFunc":
        o = self._lift(o)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, o) -> "RatFunc":
        return (-self) + o

    def __mul__(self, o) -> "RatFunc":
        o = self._lift(o)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o) -> "RatFunc":
        o = self._lift(o)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return RatFunc.const(1) / self ** (-k)
        out = RatFunc.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __rtruediv__(self, o) -> "RatFunc":
        return self._lift(o) / self

    def __eq__(self, o) -> bool:
        o = self._lift(o)
        if o is NotImplemented:
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, w0: Number) -> Fraction:
        d = self.den(w0)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at w = {w0}")
        return self.num(w0) / d

    def pole_order(self) -> int:
        """Multiplicity of ``w`` in the denominator."""
        return self.den.w_multiplicity()

    def __str__(self) -> str:
        if self.den.degree == 0:
            return str(self.num)
        wrap = lambda p: str(p) if sum(1 for c in p.coeffs if c) <= 1 else f"({p})"
        return f"{wrap(self.num)}/{wrap(self.den)}"

    __repr__ = __str__
