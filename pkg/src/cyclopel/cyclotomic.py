"""Exact arithmetic in cyclotomic fields Q(zeta_m) on the power basis.

Elements are vectors of big-integer coefficients over the basis
1, z, ..., z^(phi(m)-1) with z = zeta_m, together with a minimal positive
integer denominator.  All operations are exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import NotUnit, UnsupportedModulus

__all__ = [
    "SUPPORTED_MODULI",
    "Cyclo",
    "cyclotomic_poly",
    "element_str",
    "euler_phi",
    "parse_element",
    "real_embedding_reps",
    "relative_split",
    "relative_trace",
    "units_mod",
]

# Moduli with full element arithmetic.  Class-number-sensitive operations
# (beta0, sign solving, assembly) impose their own narrower lists.
SUPPORTED_MODULI = frozenset({3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 16, 17, 19, 21, 25, 27, 32})


def euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


def units_mod(m: int) -> tuple[int, ...]:
    """Units of Z/mZ in ascending order."""
    return tuple(k for k in range(1, m) if gcd(k, m) == 1)


def real_embedding_reps(m: int) -> tuple[int, ...]:
    """One representative n < m/2 per conjugate pair {n, m-n} of units."""
    return tuple(n for n in range(1, (m + 1) // 2) if gcd(n, m) == 1 and 2 * n != m)


# ---------------------------------------------------------------------------
# integer polynomial helpers (ascending coefficient lists)


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_rem_monic(a: list[int], d: list[int]) -> list[int]:
    """Remainder of a by d, d monic with integer coefficients; exact over Z."""
    assert d and d[-1] == 1
    r = list(a)
    dd = len(d) - 1
    while len(r) > dd:
        c = r[-1]
        if c:
            off = len(r) - 1 - dd
            for j in range(dd):
                r[off + j] -= c * d[j]
        r.pop()
    return _poly_trim(r)


def _poly_divmod_monic(a: list[int], d: list[int]) -> tuple[list[int], list[int]]:
    assert d and d[-1] == 1
    r = list(a)
    dd = len(d) - 1
    q = [0] * max(0, len(r) - dd)
    while len(r) > dd:
        c = r[-1]
        if c:
            off = len(r) - 1 - dd
            q[off] = c
            for j in range(dd):
                r[off + j] -= c * d[j]
        r.pop()
    return _poly_trim(q), _poly_trim(r)


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, ascending.  Computed by exact division of
    x^m - 1 by the product of Phi_d over proper divisors d of m."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return (-1, 1)
    num = [-1] + [0] * (m - 1) + [1]
    for d in _divisors(m)[:-1]:
        q, r = _poly_divmod_monic(num, list(cyclotomic_poly(d)))
        assert r == [], f"Phi_{d} does not divide x^{m}-1 exactly"
        num = q
    return tuple(num)


# ---------------------------------------------------------------------------
# rational polynomial xgcd, used only for inversion


def _fpoly_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _fpoly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    r = list(a)
    q = [Fraction(0)] * max(0, len(r) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(r) >= len(b):
        c = r[-1] * inv_lead
        off = len(r) - len(b)
        q[off] = c
        for j in range(len(b)):
            r[off + j] -= c * b[j]
        del r[-1]
        _fpoly_trim(r)
        if not r:
            break
    return _fpoly_trim(q), r


def _fpoly_xgcd(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction], list[Fraction]]:
    """(g, s, t) with s*a + t*b = g."""
    r0, r1 = list(a), list(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]

    def sub_mul(x, q, y):
        # x - q*y
        out = list(x) + [Fraction(0)] * max(0, len(q) + len(y) - 1 - len(x))
        for i, qi in enumerate(q):
            if qi:
                for j, yj in enumerate(y):
                    out[i + j] -= qi * yj
        return _fpoly_trim(out)

    while r1:
        q, r = _fpoly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub_mul(s0, q, s1)
        t0, t1 = t1, sub_mul(t0, q, t1)
    return r0, s0, t0


# ---------------------------------------------------------------------------


class Cyclo:
    """An element of Q(zeta_m): integer coefficient vector over the power
    basis plus a positive denominator in lowest terms."""

    __slots__ = ("m", "num", "den", "_hash")

    def __init__(self, m: int, num, den: int = 1):
        if m not in SUPPORTED_MODULI:
            raise UnsupportedModulus(f"modulus {m} not supported for field arithmetic")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        phi = euler_phi(m)
        coeffs = _poly_rem_monic([int(c) for c in num], list(cyclotomic_poly(m)))
        coeffs += [0] * (phi - len(coeffs))
        den = int(den)
        if den < 0:
            den = -den
            coeffs = [-c for c in coeffs]
        g = den
        for c in coeffs:
            g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            den //= g
            coeffs = [c // g for c in coeffs]
        if all(c == 0 for c in coeffs):
            den = 1
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "num", tuple(coeffs))
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):  # immutable
        raise AttributeError("Cyclo is immutable")

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, m: int) -> "Cyclo":
        return cls(m, [])

    @classmethod
    def one(cls, m: int) -> "Cyclo":
        return cls(m, [1])

    @classmethod
    def from_int(cls, m: int, k: int) -> "Cyclo":
        return cls(m, [k])

    @classmethod
    def from_fraction(cls, m: int, q: Fraction) -> "Cyclo":
        return cls(m, [q.numerator], q.denominator)

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "Cyclo":
        k %= m
        return cls(m, [0] * k + [1])

    # predicates -------------------------------------------------------

    @property
    def is_integral(self) -> bool:
        return self.den == 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.num)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.num[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    def is_real(self) -> bool:
        return self == self.conj()

    def is_unit(self) -> bool:
        """True iff the element and its inverse are both integral."""
        if self.is_zero() or self.den != 1:
            return False
        return self.inverse().den == 1

    # arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Cyclo):
            if other.m != self.m:
                raise ValueError(f"modulus mismatch: {self.m} vs {other.m}")
            return other
        if isinstance(other, int):
            return Cyclo.from_int(self.m, other)
        if isinstance(other, Fraction):
            return Cyclo.from_fraction(self.m, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self.den * o.den // gcd(self.den, o.den)
        fa, fb = d // self.den, d // o.den
        n = [fa * x + fb * y for x, y in zip(self.num, o.num)]
        return Cyclo(self.m, n, d)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.m, [-c for c in self.num], self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyclo(self.m, _poly_mul(list(self.num), list(o.num)), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclo":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # (A/den)^-1 = den * A^-1 with A the integer numerator polynomial
        a = _fpoly_trim([Fraction(c) for c in self.num])
        phi_m = [Fraction(c) for c in cyclotomic_poly(self.m)]
        g, s, _ = _fpoly_xgcd(a, phi_m)
        assert len(g) == 1, "lift not coprime to the cyclotomic polynomial"
        inv = [c / g[0] for c in s]
        d = 1
        for c in inv:
            d = d * c.denominator // gcd(d, c.denominator)
        return Cyclo(self.m, [int(c * d) * self.den for c in inv], d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        out = Cyclo.one(self.m)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ValueError:
            return False
        if o is NotImplemented:
            return o
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.m, self.num, self.den)))
        return self._hash

    def __repr__(self):
        return f"Cyclo({self.m}, {element_str(self)!r})"

    # Galois -----------------------------------------------------------

    def galois(self, i: int) -> "Cyclo":
        """Image under sigma_i: zeta -> zeta^i, gcd(i, m) = 1.  Acts on the
        degree-< m lift, then reduces."""
        i %= self.m
        if gcd(i, self.m) != 1:
            raise ValueError(f"sigma_{i} is not a field automorphism mod {self.m}")
        lift = [0] * self.m
        for a, c in enumerate(self.num):
            if c:
                lift[(a * i) % self.m] += c
        return Cyclo(self.m, lift, self.den)

    def conj(self) -> "Cyclo":
        return self.galois(self.m - 1)

    # rational trace and norm -------------------------------------------

    def trace(self) -> Fraction:
        """tr_{Q(zeta_m)/Q}."""
        tv = _trace_vector(self.m)
        return Fraction(sum(c * t for c, t in zip(self.num, tv)), self.den)

    def norm(self) -> Fraction:
        """N_{Q(zeta_m)/Q}."""
        acc = Cyclo.one(self.m)
        for u in units_mod(self.m):
            acc = acc * self.galois(u)
        assert acc.is_rational(), "norm failed to land in Q"
        return acc.as_fraction()

    def norm_to_real(self) -> "Cyclo":
        """x * conj(x), an element of the maximal real subfield."""
        out = self * self.conj()
        assert out.is_real()
        return out

    # change of modulus --------------------------------------------------

    def to_modulus(self, big_m: int) -> "Cyclo":
        """Rewrite over Q(zeta_M).  Supports m | M (zeta_m = zeta_M^(M/m))
        and the equal-field descent M odd, m = 2M (zeta_m = -zeta_M^((M+1)/2))."""
        if big_m == self.m:
            return self
        if big_m % self.m == 0:
            k = big_m // self.m
            lift = [0] * big_m
            for a, c in enumerate(self.num):
                lift[(a * k) % big_m] += c
            return Cyclo(big_m, lift, self.den)
        if self.m == 2 * big_m and big_m % 2 == 1:
            k = (big_m + 1) // 2
            lift = [0] * big_m
            for a, c in enumerate(self.num):
                if c:
                    s = -1 if a % 2 else 1
                    lift[(a * k) % big_m] += s * c
            return Cyclo(big_m, lift, self.den)
        raise ValueError(f"no supported identification of Q(zeta_{self.m}) inside Q(zeta_{big_m})")


@lru_cache(maxsize=None)
def _trace_vector(m: int) -> tuple[int, ...]:
    """trace of each power-basis monomial zeta^a, 0 <= a < phi(m)."""
    phi = euler_phi(m)
    out = []
    for a in range(phi):
        acc = [0] * m
        for u in units_mod(m):
            acc[(a * u) % m] += 1
        red = _poly_rem_monic(acc, list(cyclotomic_poly(m)))
        red += [0] * (phi - len(red))
        assert all(c == 0 for c in red[1:]), "monomial trace not rational"
        out.append(red[0] if red else 0)
    return tuple(out)


# ---------------------------------------------------------------------------
# relative structure of Q(zeta_3m) / Q(zeta_m), m odd and coprime to 3


def _solve_linear_fractions(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve the square system mat * x = rhs by Gaussian elimination."""
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


@lru_cache(maxsize=None)
def _relative_basis_matrix(m: int) -> tuple[tuple[Fraction, ...], ...]:
    """Columns: zeta_m^i * zeta_3^j (i < phi(m), j < 2) written over the
    power basis of Q(zeta_3m)."""
    big = 3 * m
    assert gcd(m, 3) == 1 and m % 2 == 1
    phi_small = euler_phi(m)
    cols = []
    for j in range(2):
        for i in range(phi_small):
            e = (3 * i + m * j) % big
            col = Cyclo.zeta(big, e)
            cols.append(col.num)
    # transpose into row-major matrix of size phi(3m) x 2 phi(m)
    n = euler_phi(big)
    assert len(cols) == n
    return tuple(tuple(Fraction(cols[c][r]) for c in range(n)) for r in range(n))


def relative_split(x: Cyclo) -> tuple[Cyclo, Cyclo]:
    """For x in Q(zeta_3m) (m odd, coprime to 3) return (x1, x2) over
    Q(zeta_m) with x = x1 + x2 * zeta_3."""
    big = x.m
    if big % 3 != 0 or (big // 3) % 3 == 0 or big % 2 == 0:
        raise ValueError(f"modulus {big} is not 3*m with m odd and coprime to 3")
    m = big // 3
    mat = [list(row) for row in _relative_basis_matrix(m)]
    rhs = [Fraction(c, x.den) for c in x.num]
    sol = _solve_linear_fractions(mat, rhs)
    phi_small = euler_phi(m)

    def pack(chunk):
        den = 1
        for q in chunk:
            den = den * q.denominator // gcd(den, q.denominator)
        return Cyclo(m, [int(q * den) for q in chunk], den)

    return pack(sol[:phi_small]), pack(sol[phi_small:])


def _relative_conjugator(big: int) -> int:
    """The unit t mod 3m with t = 1 mod m and t = 2 mod 3 (generator of
    Gal(Q(zeta_3m)/Q(zeta_m)))."""
    m = big // 3
    for t in units_mod(big):
        if t % m == 1 and t % 3 == 2:
            return t
    raise AssertionError("no relative conjugator found")


def relative_trace(x: Cyclo) -> Cyclo:
    """tr from Q(zeta_3m) to Q(zeta_m), returned over modulus m."""
    x1, x2 = relative_split(x)
    # x + tau(x) = 2 x1 + x2 (zeta_3 + zeta_3^2) = 2 x1 - x2
    return 2 * x1 - x2


# ---------------------------------------------------------------------------
# strings


def element_str(x: Cyclo) -> str:
    """Canonical form: integer polynomial in z over a positive denominator,
    e.g. '(2*z - 1)/3', 'z^2', '-5'."""
    terms = []
    for a in range(len(x.num) - 1, -1, -1):
        c = x.num[a]
        if c == 0:
            continue
        if a == 0:
            body = str(abs(c))
        else:
            zpart = "z" if a == 1 else f"z^{a}"
            body = zpart if abs(c) == 1 else f"{abs(c)}*{zpart}"
        terms.append((c < 0, body))
    if not terms:
        return "0"
    first_neg, first = terms[0]
    s = ("-" if first_neg else "") + first
    for neg, body in terms[1:]:
        s += (" - " if neg else " + ") + body
    if x.den != 1:
        s = (f"({s})" if len(terms) > 1 else s) + f"/{x.den}"
    return s


class _Tokens:
    def __init__(self, s: str):
        self.toks: list[tuple[str, int]] = []
        i = 0
        while i < len(s):
            ch = s[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(s) and s[j].isdigit():
                    j += 1
                self.toks.append(("int", int(s[i:j])))
                i = j
            elif ch == "z":
                self.toks.append(("z", 0))
                i += 1
            elif ch in "+-*/^()":
                self.toks.append((ch, 0))
                i += 1
            else:
                raise ValueError(f"unexpected character {ch!r} in element string")
        self.pos = 0

    def peek(self):
        return self.toks[self.pos][0] if self.pos < len(self.toks) else None

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t


def parse_element(s: str, m: int) -> Cyclo:
    """Parse an element expression in the variable z = zeta_m.  Accepts
    + - * / ^ parentheses and implicit multiplication, e.g. '5/(z^3-z^2)'."""
    tk = _Tokens(s)

    def atom() -> Cyclo:
        kind, val = tk.next()
        if kind == "int":
            base = Cyclo.from_int(m, val)
        elif kind == "z":
            base = Cyclo.zeta(m)
        elif kind == "(":
            base = expr()
            if tk.peek() != ")":
                raise ValueError("missing closing parenthesis")
            tk.next()
        elif kind == "-":
            return -atom()
        else:
            raise ValueError(f"unexpected token {kind!r}")
        if tk.peek() == "^":
            tk.next()
            ekind, eval_ = tk.next()
            if ekind != "int":
                raise ValueError("exponent must be a nonnegative integer")
            base = base**eval_
        return base

    def term() -> Cyclo:
        out = atom()
        while True:
            nxt = tk.peek()
            if nxt == "*":
                tk.next()
                out = out * atom()
            elif nxt == "/":
                tk.next()
                out = out / atom()
            elif nxt in ("z", "("):
                out = out * atom()
            else:
                return out

    def expr() -> Cyclo:
        out = term()
        while tk.peek() in ("+", "-"):
            op, _ = tk.next()
            rhs = term()
            out = out + rhs if op == "+" else out - rhs
        return out

    result = expr()
    if tk.peek() is not None:
        raise ValueError("trailing tokens in element string")
    return result
