"""Exact arithmetic in a dyadic local field and its square-class invariants.

A field is Q2(pi) where pi is a root of a monic Eisenstein polynomial of
degree e over the 2-adic integers (for e = 1, pi = 2).  Elements are stored
exactly as rational coefficient vectors in the basis 1, pi, ..., pi^(e-1);
square-class questions are answered in the finite residue ring
O / 2^m O = (Z/2^m)[x]/(f), which has pi-adic precision e*m.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import EvenDenominator, MalformedInput, ZeroElement

INF = math.inf

Scalar = Union[int, Fraction]


def v2(n: int) -> int:
    """2-adic valuation of a nonzero integer."""
    return (n & -n).bit_length() - 1


def v2_frac(q: Fraction) -> int:
    return v2(q.numerator) - v2(q.denominator)


def _solve(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


class DyadicField:
    """The field Q2(pi), pi a root of x^e + c_{e-1} x^{e-1} + ... + c_0.

    ``poly`` lists (c_0, ..., c_{e-1}).  The default for e = 1 is (-2,), so
    that pi = 2; for e > 1 the default is x^e + 2.
    """

    def __init__(self, e: int = 1, poly: Sequence[int] | None = None, guard: int = 12):
        if not isinstance(e, int) or e < 1:
            raise MalformedInput(f"ramification index must be a positive integer, got {e!r}")
        if poly is None:
            poly = (-2,) if e == 1 else (2,) + (0,) * (e - 1)
        poly = tuple(int(c) for c in poly)
        if len(poly) != e:
            raise MalformedInput(f"polynomial needs {e} coefficients, got {len(poly)}")
        if poly[0] == 0 or v2(poly[0]) != 1 or any(c != 0 and v2(c) < 1 for c in poly):
            raise MalformedInput(f"polynomial {poly} is not Eisenstein at 2")
        if guard < 0:
            raise MalformedInput("guard must be nonnegative")
        self.e = e
        self.poly = poly
        self.guard = guard
        self.precision = 2 * e + 1 + guard
        self.m = -(-self.precision // e) + 1
        self.modulus = 1 << self.m
        self.ring_precision = e * self.m
        self._key_cache: dict[tuple, tuple[int, float]] = {}
        self._pi_pow: dict[int, FieldElement] = {}
        self._hilbert_table: list[list[int]] | None = None
        self.rho = 1
        self.delta = self.element(-3)
        if self.defect(self.delta) != 2 * e:
            raise MalformedInput("the unit -3 does not have defect order 2e in this field")

    # -- identity -------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return isinstance(other, DyadicField) and (self.e, self.poly) == (other.e, other.poly)

    def __hash__(self) -> int:
        return hash((self.e, self.poly))

    def __repr__(self) -> str:
        return f"DyadicField(e={self.e}, poly={list(self.poly)})"

    def with_guard(self, guard: int) -> "DyadicField":
        return DyadicField(self.e, self.poly, guard)

    def descriptor(self) -> dict:
        if self.e == 1 and self.poly == (-2,):
            return {"e": 1}
        return {"e": self.e, "poly": list(self.poly)}

    @classmethod
    def from_descriptor(cls, desc: dict, guard: int = 12) -> "DyadicField":
        if not isinstance(desc, dict) or "e" not in desc:
            raise MalformedInput(f"bad field descriptor {desc!r}")
        try:
            return cls(int(desc["e"]), desc.get("poly"), guard)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, MalformedInput):
                raise
            raise MalformedInput(str(exc)) from exc

    # -- elements -------------------------------------------------------
    def element(self, value: "FieldElement | Scalar | str | Sequence") -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise MalformedInput("element belongs to a different field")
            return value
        if isinstance(value, (int, Fraction)):
            return FieldElement(self, (Fraction(value),) + (Fraction(0),) * (self.e - 1))
        if isinstance(value, str):
            return parse_element(value, self)
        coeffs = [Fraction(c) for c in value]
        if len(coeffs) > self.e:
            raise MalformedInput(f"coefficient list longer than e={self.e}")
        coeffs += [Fraction(0)] * (self.e - len(coeffs))
        return FieldElement(self, tuple(coeffs))

    @property
    def zero(self) -> "FieldElement":
        return self.element(0)

    @property
    def one(self) -> "FieldElement":
        return self.element(1)

    @property
    def pi(self) -> "FieldElement":
        return self.pi_power(1)

    def pi_power(self, k: int) -> "FieldElement":
        got = self._pi_pow.get(k)
        if got is None:
            if k == 0:
                got = self.one
            elif k > 0:
                if self.e == 1:
                    got = self.element(Fraction(2) ** k)
                else:
                    got = self.pi_power(k - 1) * FieldElement(self, tuple(Fraction(int(i == 1)) for i in range(self.e)))
            else:
                got = self.pi_power(-k).inverse()
            self._pi_pow[k] = got
        return got

    # -- exact coefficient arithmetic ----------------------------------
    def _mul(self, a: tuple, b: tuple) -> tuple:
        e = self.e
        if e == 1:
            return (a[0] * b[0],)
        r = [Fraction(0)] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        r[i + j] += x * y
        for k in range(2 * e - 2, e - 1, -1):
            c = r[k]
            if c:
                r[k] = Fraction(0)
                for i, p in enumerate(self.poly):
                    if p:
                        r[k - e + i] -= c * p
        return tuple(r[:e])

    def _inv(self, a: tuple) -> tuple:
        if self.e == 1:
            return (1 / a[0],)
        cols = []
        basis = tuple(Fraction(int(i == 0)) for i in range(self.e))
        x = tuple(Fraction(int(i == 1)) for i in range(self.e))
        cur = a
        for _ in range(self.e):
            cols.append(cur)
            cur = self._mul(cur, x)
        mat = [[cols[j][i] for j in range(self.e)] for i in range(self.e)]
        return tuple(_solve(mat, list(basis)))

    # -- residue ring (Z/2^m)[x]/(f) ------------------------------------
    def residue(self, a: "FieldElement") -> tuple:
        """Image of an integral element in O / 2^m O."""
        mod = self.modulus
        out = []
        for c in a.c:
            if c.denominator % 2 == 0:
                raise ValueError("element is not integral")
            out.append(c.numerator * pow(c.denominator, -1, mod) % mod)
        return tuple(out)

    def rmul(self, a: tuple, b: tuple) -> tuple:
        e, mod = self.e, self.modulus
        if e == 1:
            return (a[0] * b[0] % mod,)
        r = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    r[i + j] += x * y
        for k in range(2 * e - 2, e - 1, -1):
            c = r[k]
            if c:
                r[k] = 0
                for i, p in enumerate(self.poly):
                    r[k - e + i] -= c * p
        return tuple(x % mod for x in r[:e])

    def rval(self, a: tuple) -> int:
        """pi-adic order of a residue, capped at the ring precision."""
        best = self.ring_precision
        for i, c in enumerate(a):
            if c:
                best = min(best, self.e * v2(c) + i)
        return best

    def rsub(self, a: tuple, b: tuple) -> tuple:
        return tuple((x - y) % self.modulus for x, y in zip(a, b))

    def rone(self) -> tuple:
        return (1,) + (0,) * (self.e - 1)

    def rpi_power(self, k: int) -> tuple:
        r = self.rone()
        x = tuple(int(i == 1) for i in range(self.e)) if self.e > 1 else (2,)
        for _ in range(k):
            r = self.rmul(r, x)
        return r

    def rinv_unit(self, u: tuple) -> tuple:
        """Inverse of a unit congruent to 1 mod pi, by Newton iteration."""
        y = self.rone()
        two = (2 % self.modulus,) + (0,) * (self.e - 1)
        steps = max(1, math.ceil(math.log2(self.ring_precision + 1)) + 1)
        for _ in range(steps):
            y = self.rmul(y, self.rsub(two, self.rmul(u, y)))
        return y

    # -- square classes -------------------------------------------------
    def _unit_analysis(self, u: "FieldElement") -> tuple[int, float]:
        """Return (bits, defect) of a unit.

        bits holds the exponents of u over the generators 1 + pi^(2j+1)
        (bit j) and Delta (bit e), modulo squares.
        """
        res = self.residue(u)
        cached = self._key_cache.get(res)
        if cached is not None:
            return cached
        e = self.e
        one = self.rone()
        cur = res
        bits = 0
        d: float = INF
        while True:
            w = self.rval(self.rsub(cur, one))
            if w > 2 * e:
                break
            if w == 2 * e:
                bits |= 1 << e
                if d == INF:
                    d = 2 * e
                break
            if w % 2 == 1:
                bits |= 1 << (w // 2)
                if d == INF:
                    d = w
                g = tuple((x + y) % self.modulus for x, y in zip(one, self.rpi_power(w)))
            else:
                h = tuple((x + y) % self.modulus for x, y in zip(one, self.rpi_power(w // 2)))
                g = self.rmul(h, h)
            cur = self.rmul(cur, self.rinv_unit(g))
        self._key_cache[res] = (bits, d)
        return bits, d

    def class_key(self, a: "FieldElement") -> int:
        """Integer encoding of the square class of a nonzero element.

        Bit 0 is ord(a) mod 2; the remaining bits encode the unit part.
        The map is a group isomorphism onto (Z/2)^(e+2).
        """
        if a.is_zero:
            raise ZeroElement("zero has no square class")
        bits, _ = self._unit_analysis(a.unit_part())
        return (a.valuation % 2) | (bits << 1)

    def defect(self, a: "FieldElement") -> float:
        if a.is_zero:
            raise ZeroElement("defect of zero is undefined")
        if a.valuation % 2:
            return 0
        return self._unit_analysis(a.unit_part())[1]

    def from_key(self, key: int) -> "FieldElement":
        """A representative of the square class with the given key."""
        x = self.pi if key & 1 else self.one
        bits = key >> 1
        for j in range(self.e):
            if bits >> j & 1:
                x = x * (self.one + self.pi_power(2 * j + 1))
        if bits >> self.e & 1:
            x = x * self.delta
        return x

    def unit_literal(self, a: "FieldElement") -> str:
        """Unit part of ``a`` reduced modulo pi^(2e+1), as a literal."""
        k = -(-(2 * self.e + 1) // self.e)
        mod = 1 << k
        u = a.unit_part()
        vals = [c.numerator * pow(c.denominator, -1, mod) % mod for c in u.c]
        if self.e == 1:
            return str(vals[0])
        return "[" + ",".join(str(v) for v in vals) + "]"


class FieldElement:
    """Exact element of a :class:`DyadicField`."""

    __slots__ = ("field", "c", "_val")

    def __init__(self, field: DyadicField, coeffs: tuple):
        self.field = field
        self.c = coeffs
        self._val: float | None = None

    # -- valuation ------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not any(self.c)

    @property
    def valuation(self) -> float:
        if self._val is None:
            e = self.field.e
            vals = [e * v2_frac(x) + i for i, x in enumerate(self.c) if x]
            self._val = min(vals) if vals else INF
        return self._val

    @property
    def precision(self) -> float:
        """Exact elements carry unbounded precision."""
        return INF

    def unit_part(self) -> "FieldElement":
        if self.is_zero:
            raise ZeroElement("zero has no unit part")
        v = self.valuation
        if v == 0:
            return self
        return self * self.field.pi_power(-v)

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise MalformedInput("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, tuple(x + y for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-x for x in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, tuple(x - y for x, y in zip(self.c, o.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field._mul(self.c, o.c))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(self.field, self.field._inv(self.c))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        r = self.field.one
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __eq__(self, other) -> bool:
        o = self._coerce(other) if isinstance(other, (FieldElement, int, Fraction)) else NotImplemented
        if o is NotImplemented:
            return NotImplemented
        return self.c == o.c

    def __hash__(self) -> int:
        return hash((self.field.e, self.c))

    def __bool__(self) -> bool:
        return not self.is_zero

    def literal(self) -> str:
        if self.field.e == 1:
            return str(self.c[0])
        return "[" + ",".join(str(x) for x in self.c) + "]"

    def __repr__(self) -> str:
        return f"FieldElement({self.literal()})"


_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def _parse_rational(text: str, strict: bool) -> Fraction:
    m = _RATIONAL.match(text)
    if not m:
        raise MalformedInput(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise MalformedInput("zero denominator")
    if strict and den % 2 == 0:
        raise EvenDenominator(f"even denominator in {text!r}")
    return Fraction(num, den)


def parse_element(literal: "str | int | Fraction | Sequence", field: DyadicField,
                  strict: bool = False) -> FieldElement:
    """Parse "p/q", an integer, or a list of such as pi-power coefficients.

    A list may be given as a Python sequence or as a bracketed string such
    as "[0,1]".  With ``strict=True`` even denominators are rejected.
    """
    if isinstance(literal, (int, Fraction)) and not isinstance(literal, bool):
        return field.element(literal)
    if isinstance(literal, str):
        s = literal.strip()
        if s.startswith("["):
            if not s.endswith("]"):
                raise MalformedInput(f"unterminated list literal {literal!r}")
            inner = s[1:-1].strip()
            parts = [p.strip().strip('"').strip("'") for p in inner.split(",")] if inner else []
            return parse_element(parts, field, strict)
        return field.element(_parse_rational(s, strict))
    if isinstance(literal, (list, tuple)):
        coeffs = []
        for p in literal:
            if isinstance(p, (int, Fraction)) and not isinstance(p, bool):
                q = Fraction(p)
                if strict and q.denominator % 2 == 0:
                    raise EvenDenominator(f"even denominator in {p!r}")
                coeffs.append(q)
            elif isinstance(p, str):
                coeffs.append(_parse_rational(p, strict))
            else:
                raise MalformedInput(f"bad coefficient {p!r}")
        if len(coeffs) > field.e:
            raise MalformedInput(f"coefficient list longer than e={field.e}")
        return field.element(coeffs)
    raise MalformedInput(f"cannot parse element from {literal!r}")


# -- module-level operations --------------------------------------------

def ord_(a: FieldElement) -> float:
    return a.valuation


def defect_order(a: FieldElement) -> float:
    """Relative quadratic defect d(a); INF iff a is a square."""
    return a.field.defect(a)


def same_square_class(a: FieldElement, b: FieldElement) -> bool:
    return a.field.class_key(a) == b.field.class_key(b)


def is_square(a: FieldElement) -> bool:
    return a.field.class_key(a) == 0


def _hilbert_q2(a: FieldElement, b: FieldElement) -> int:
    al, be = int(a.valuation), int(b.valuation)
    f = a.field
    u = f.residue(a.unit_part())[0] % 8
    v = f.residue(b.unit_part())[0] % 8

    def eps(x):
        return ((x - 1) // 2) % 2

    def omega(x):
        return ((x * x - 1) // 8) % 2

    s = eps(u) * eps(v) + al * omega(v) + be * omega(u)
    return -1 if s % 2 else 1


def hilbert_table(field: DyadicField) -> list[list[int]]:
    """Hilbert symbols between the square-class generators, as 0/1 exponents.

    Generator s corresponds to key bit s: pi, then 1 + pi^(2j+1), then
    Delta.  Each entry is found by the isotropy search on <g_s, g_t, -1>.
    """
    if field._hilbert_table is None:
        from .search import isotropy_search

        gens = [field.from_key(1 << s) for s in range(field.e + 2)]
        n = len(gens)
        tab = [[0] * n for _ in range(n)]
        for s in range(n):
            for t in range(s, n):
                iso = isotropy_search([gens[s], gens[t], -field.one])
                tab[s][t] = tab[t][s] = 0 if iso else 1
        field._hilbert_table = tab
    return field._hilbert_table


# Names of deliberately broken routines, used only by the self-test's
# negative control.
FAULTS: set[str] = set()


def hilbert(a: FieldElement, b: FieldElement) -> int:
    """Hilbert symbol (a, b) in {+1, -1}."""
    f = a.field
    if a.is_zero or b.is_zero:
        raise ZeroElement("Hilbert symbol of zero")
    if FAULTS and "hilbert" in FAULTS and not (is_square(a) or is_square(b)):
        return -_hilbert_exact(a, b)
    return _hilbert_exact(a, b)


def _hilbert_exact(a: FieldElement, b: FieldElement) -> int:
    f = a.field
    if f.e == 1:
        return _hilbert_q2(a, b)
    ka, kb = f.class_key(a), f.class_key(b)
    tab = hilbert_table(f)
    s = 0
    for i in range(f.e + 2):
        if ka >> i & 1:
            row = tab[i]
            for j in range(f.e + 2):
                if kb >> j & 1:
                    s ^= row[j]
    return -1 if s else 1


def in_norm_group(b: FieldElement, a: FieldElement) -> bool:
    """Whether b lies in N(a), the norms from F(sqrt a)."""
    return hilbert(a, b) == 1


def in_A(a: FieldElement) -> bool:
    if a.is_zero:
        raise ZeroElement("zero is never in the admissible set")
    e = a.field.e
    return a.valuation >= -2 * e and a.valuation + defect_order(-a) >= 0


def reduce_unit(u: FieldElement) -> FieldElement:
    """Small representative of the unit u modulo 1 + pi^(2e+1)."""
    f = u.field
    k = -(-(2 * f.e + 1) // f.e)
    mod = 1 << k
    return f.element([c.numerator * pow(c.denominator, -1, mod) % mod for c in u.c])


def unit_square_classes(field: DyadicField) -> list[FieldElement]:
    """Representatives of the unit square classes, 2^(e+1) of them."""
    e = field.e
    odd = list(range(1, 2 * e, 2))
    reps = []
    for mask in range(1 << e):
        x = field.one
        for j, i in enumerate(odd):
            if mask >> j & 1:
                x = x + field.pi_power(i)
        reps.append(x)
    out = [reduce_unit(x) for x in reps + [x * field.delta for x in reps]]
    keys = {field.class_key(x) for x in out}
    if len(keys) != len(out):
        out = [field.from_key(k << 1) for k in range(1 << (e + 1))]
    return out


def all_square_classes(field: DyadicField) -> list[FieldElement]:
    units = unit_square_classes(field)
    return units + [field.pi * u for u in units]
