"""Exact arithmetic in cyclotomic fields and reduction into finite fields.

A :class:`CycNum` is an element of Q(zeta_e) written in the power basis
``1, z, ..., z^(phi(e)-1)`` modulo the e-th cyclotomic polynomial.  The
coefficients are integers over one common positive denominator, so equality is
plain tuple equality.  Since Z[zeta_e] is the full ring of integers, a value is
an algebraic integer exactly when its denominator is 1.

:class:`FpEmbedding` realises the reduction map Z[zeta_e] -> GF(p^k): it sends
zeta_e to a fixed primitive m-th root of unity, m the p'-part of e, so p-power
roots of unity collapse to 1.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import DomainError
from .perm import is_prime, p_part

Rational = Union[int, Fraction]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_div_exact(num, cyclotomic_poly(d))
    return tuple(num)


def _poly_div_exact(a: list[int], b: Sequence[int]) -> list[int]:
    a = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] // b[db]
        q[i - db] = c
        if c:
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    if any(a[:db]):
        raise ArithmeticError("inexact polynomial division")
    return q


def euler_phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


@lru_cache(maxsize=None)
def _power_table(e: int) -> tuple[tuple[int, ...], ...]:
    """``table[k]`` = coefficients of z^k reduced mod Phi_e, for ``k < max(e, 2 phi)``."""
    phi_poly = cyclotomic_poly(e)
    deg = len(phi_poly) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(max(e, 2 * deg)):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(deg):
                cur[j] -= top * phi_poly[j]
    return tuple(rows)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class CycNum:
    """Exact element of Q(zeta_e)."""

    __slots__ = ("e", "coeffs", "den", "_hash")

    def __init__(self, e: int, coeffs: Sequence[int], den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            coeffs = [-c for c in coeffs]
            den = -den
        g = den
        for c in coeffs:
            if g == 1:
                break
            g = math.gcd(g, c)
        if g != 1:
            coeffs = [c // g for c in coeffs]
            den //= g
        self.e = e
        self.coeffs = tuple(coeffs)
        self.den = den
        self._hash = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def rational(cls, value: Rational, e: int = 1) -> "CycNum":
        value = Fraction(value)
        deg = euler_phi(e)
        coeffs = [0] * deg
        coeffs[0] = value.numerator
        return cls(e, coeffs, value.denominator)

    @classmethod
    def root_of_unity(cls, n: int, k: int = 1) -> "CycNum":
        """zeta_n^k."""
        return cls(n, _power_table(n)[k % n])

    @classmethod
    def from_exponents(cls, e: int, counts: dict[int, int]) -> "CycNum":
        """sum of ``counts[k] * zeta_e^k``."""
        table = _power_table(e)
        deg = euler_phi(e)
        acc = [0] * deg
        for k, c in counts.items():
            if c:
                row = table[k % e]
                for j in range(deg):
                    acc[j] += c * row[j]
        return cls(e, acc)

    # -- conversions ----------------------------------------------------------

    def promote(self, e: int) -> "CycNum":
        if e == self.e:
            return self
        if e % self.e:
            raise ValueError(f"conductor {self.e} does not divide {e}")
        step = e // self.e
        table = _power_table(e)
        deg = euler_phi(e)
        acc = [0] * deg
        for i, c in enumerate(self.coeffs):
            if c:
                row = table[i * step]
                for j in range(deg):
                    acc[j] += c * row[j]
        return CycNum(e, acc, self.den)

    def _coerce(self, other) -> tuple["CycNum", "CycNum"]:
        if not isinstance(other, CycNum):
            if isinstance(other, (int, Fraction)):
                other = CycNum.rational(other, self.e)
            else:
                raise TypeError(f"cannot combine CycNum with {type(other).__name__}")
        if other.e == self.e:
            return self, other
        e = _lcm(self.e, other.e)
        return self.promote(e), other.promote(e)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return Fraction(self.coeffs[0], self.den)

    def is_integral(self) -> bool:
        return self.den == 1

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_complex(self) -> complex:
        z = complex(math.cos(2 * math.pi / self.e), math.sin(2 * math.pi / self.e))
        total = 0j
        for i, c in enumerate(self.coeffs):
            if c:
                total += c * z**i
        return total / self.den

    def fraction_coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.coeffs)

    def sort_key(self) -> tuple:
        return self.fraction_coeffs()

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        a, b = self._coerce(other)
        den = _lcm(a.den, b.den)
        fa, fb = den // a.den, den // b.den
        return CycNum(a.e, [x * fa + y * fb for x, y in zip(a.coeffs, b.coeffs)], den)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.e, [-c for c in self.coeffs], self.den)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CycNum(
                self.e, [c * other.numerator for c in self.coeffs], self.den * other.denominator
            )
        a, b = self._coerce(other)
        deg = len(a.coeffs)
        prod = [0] * (2 * deg - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        table = _power_table(a.e)
        acc = prod[:deg]
        for k in range(deg, 2 * deg - 1):
            c = prod[k]
            if c:
                row = table[k]
                for j in range(deg):
                    acc[j] += c * row[j]
        return CycNum(a.e, acc, a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, CycNum):
            if not other.is_rational():
                return self * other.inverse()
            other = other.to_fraction()
        other = Fraction(other)
        if other == 0:
            raise ZeroDivisionError("division by zero")
        return self * (1 / other)

    def inverse(self) -> "CycNum":
        """Inverse via the product of the nontrivial Galois conjugates."""
        if self.is_zero():
            raise ZeroDivisionError("division by zero")
        others = CycNum.rational(1, self.e)
        for j in range(2, self.e):
            if math.gcd(j, self.e) == 1:
                others = others * self.galois(j)
        norm = (self * others).to_fraction()
        return others * (1 / norm)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycNum.rational(1, self.e)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, j: int) -> "CycNum":
        """Image under zeta_e -> zeta_e^j."""
        if math.gcd(j, self.e) != 1:
            raise ValueError(f"galois exponent {j} not coprime to {self.e}")
        table = _power_table(self.e)
        deg = len(self.coeffs)
        acc = [0] * deg
        for i, c in enumerate(self.coeffs):
            if c:
                row = table[(i * j) % self.e]
                for t in range(deg):
                    acc[t] += c * row[t]
        return CycNum(self.e, acc, self.den)

    def conjugate(self) -> "CycNum":
        return self.galois(-1 % self.e if self.e > 1 else 1)

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.to_fraction() == other
        if not isinstance(other, CycNum):
            return NotImplemented
        if self.e == other.e:
            return self.den == other.den and self.coeffs == other.coeffs
        a, b = self._coerce(other)
        return a.den == b.den and a.coeffs == b.coeffs

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.to_fraction())
            else:
                self._hash = hash((self.e, self.coeffs, self.den))
        return self._hash

    def __str__(self):
        if self.is_rational():
            return str(self.to_fraction())
        out = ""
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            f = Fraction(c, self.den)
            sign = "-" if f < 0 else ("+" if out else "")
            mag = abs(f)
            if i == 0:
                out += f"{sign}{mag}"
            else:
                power = f"z{self.e}" + (f"^{i}" if i > 1 else "")
                out += sign + ("" if mag == 1 else f"{mag}*") + power
        return out

    def __repr__(self):
        return f"CycNum({self})"

    # -- JSON -----------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "e": self.e,
            "coeffs": [[str(f.numerator), str(f.denominator)] for f in self.fraction_coeffs()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CycNum":
        e = int(obj["e"])
        fracs = [Fraction(int(n), int(d)) for n, d in obj["coeffs"]]
        if len(fracs) != euler_phi(e):
            raise ValueError(f"expected {euler_phi(e)} coefficients for conductor {e}")
        den = 1
        for f in fracs:
            den = _lcm(den, f.denominator)
        return cls(e, [int(f * den) for f in fracs], den)


def cyc_add(a: CycNum, b: CycNum) -> CycNum:
    return a + b


def cyc_mul(a: CycNum, b: CycNum) -> CycNum:
    return a * b


def cyc_galois(a: CycNum, j: int) -> CycNum:
    return a.galois(j)


def galois_orbit_sum(a: CycNum) -> CycNum:
    total = CycNum.rational(0, a.e)
    for j in range(1, max(a.e, 2)):
        if math.gcd(j, a.e) == 1:
            total = total + a.galois(j)
    return total


# -- finite fields --------------------------------------------------------------


class GF:
    """GF(p^k) with elements encoded as integers (base-p digits = polynomial coefficients).

    The defining polynomial is the lexicographically least monic irreducible of
    degree ``k`` whose root generates the multiplicative group, so log and
    antilog tables are available for multiplication.
    """

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.k = k
        self.q = p**k
        if self.q > 10**7:
            raise ValueError(f"field GF({p}^{k}) too large")
        self.modulus = self._find_modulus()
        self._build_tables()

    def _find_modulus(self) -> tuple[int, ...]:
        p, k = self.p, self.k
        if k == 1:
            g = next(a for a in range(1, p) if _mult_order_mod(a, p) == p - 1) if p > 2 else 1
            return ((-g) % p, 1)
        for code in range(p**k):
            tail = [(code // p**i) % p for i in range(k)]
            poly = tuple(tail) + (1,)
            if tail[0] == 0:
                continue
            if self._generator_order(poly) == self.q - 1:
                return poly
        raise AssertionError("no primitive polynomial found")

    def _generator_order(self, poly) -> int:
        p, k = self.p, self.k
        one = [1] + [0] * (k - 1)
        cur = list(one)
        for n in range(1, self.q):
            top = cur[-1]
            cur = [0] + cur[:-1]
            for j in range(k):
                cur[j] = (cur[j] - top * poly[j]) % p
            if cur == one:
                return n
        return 0

    def _build_tables(self) -> None:
        p, k, q = self.p, self.k, self.q
        exp = [0] * (q - 1)
        log = [0] * q
        cur = [1] + [0] * (k - 1)
        poly = self.modulus
        for n in range(q - 1):
            code = sum(c * p**i for i, c in enumerate(cur))
            exp[n] = code
            log[code] = n
            top = cur[-1]
            cur = [0] + cur[:-1]
            for j in range(k):
                cur[j] = (cur[j] - top * poly[j]) % p
        self.exp = exp
        self.log = log

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    @property
    def generator(self) -> int:
        return self.exp[1 % (self.q - 1)] if self.q > 2 else 1

    def from_int(self, n: int) -> int:
        return n % self.p

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p = self.p
        result = 0
        scale = 1
        while a or b:
            result += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return result

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        p = self.p
        result = 0
        scale = 1
        while a:
            result += ((-(a % p)) % p) * scale
            a //= p
            scale *= p
        return result

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % self.p
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        if self.k == 1:
            return pow(a, -1, self.p)
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n <= 0:
                raise ZeroDivisionError("zero to non-positive power")
            return 0
        return self.exp[(self.log[a] * n) % (self.q - 1)]

    def mult_order(self, a: int) -> int:
        return (self.q - 1) // math.gcd(self.q - 1, self.log[a])

    def sum(self, values: Iterable[int]) -> int:
        total = 0
        for v in values:
            total = self.add(total, v)
        return total


def _mult_order_mod(a: int, m: int) -> int:
    if m == 1:
        return 1
    if math.gcd(a, m) != 1:
        raise ValueError(f"{a} not invertible mod {m}")
    x, k = a % m, 1
    while x != 1:
        x = x * a % m
        k += 1
    return k


@lru_cache(maxsize=None)
def _field(p: int, k: int) -> GF:
    return GF(p, k)


class FpEmbedding:
    """Ring homomorphism Z_(p)[zeta_e] -> GF(p^k) with zeta_e -> a primitive m-th root.

    ``m`` is the p'-part of ``e`` and ``k`` the multiplicative order of ``p`` mod
    ``m``.  The root is ``g^((p^k-1)/m)`` for the field's primitive generator
    ``g``; values with conductor dividing ``e`` are mapped compatibly.
    """

    def __init__(self, p: int, e: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.e = e
        self.m = e // p_part(e, p)
        self.k = _mult_order_mod(p, self.m)
        self.field = _field(p, self.k)
        F = self.field
        self.root = F.pow(F.generator, (F.q - 1) // self.m) if F.q > 1 else 1
        self._zeta_images = [F.pow(self.root, i) for i in range(e)] if self.m > 1 else [1] * e

    def __repr__(self):
        return f"FpEmbedding(p={self.p}, e={self.e}, field={self.field})"

    def describe(self) -> dict:
        return {
            "p": self.p,
            "e": self.e,
            "m": self.m,
            "k": self.k,
            "modulus": list(self.field.modulus),
            "root": self.root,
        }

    def reduce(self, a: Union[CycNum, Rational]) -> int:
        F = self.field
        p = self.p
        if not isinstance(a, CycNum):
            a = Fraction(a)
            if a.denominator % p == 0:
                raise DomainError(f"{a} is not p-integral for p={p}")
            return F.mul(F.from_int(a.numerator), F.inv(F.from_int(a.denominator)))
        if self.e % a.e:
            raise ValueError(f"conductor {a.e} does not divide embedding conductor {self.e}")
        if a.den % p == 0:
            raise DomainError(f"value with denominator {a.den} is not p-integral for p={p}")
        step = self.e // a.e
        images = self._zeta_images
        total = 0
        for i, c in enumerate(a.coeffs):
            c %= p
            if c:
                total = F.add(total, F.mul(c if F.k == 1 else F.from_int(c), images[(i * step) % self.e]))
        return F.mul(total, F.inv(F.from_int(a.den)))


def reduce_mod_p(a: Union[CycNum, Rational], embedding: FpEmbedding) -> int:
    return embedding.reduce(a)


def p_galois_exponents(e: int, p: int) -> list[int]:
    """Exponents j of the automorphisms of Q(zeta_e) fixing the p'-roots of unity."""
    m = e // p_part(e, p)
    return [j for j in range(1, e + 1) if j % m == 1 % m and math.gcd(j, e) == 1] or [1]


def is_p_rational(values: Sequence[CycNum], p: int) -> bool:
    """True iff every value is fixed by all automorphisms moving only p-power roots of unity."""
    if not values:
        return True
    e = 1
    for v in values:
        e = _lcm(e, v.e if isinstance(v, CycNum) else 1)
    for j in p_galois_exponents(e, p):
        for v in values:
            if isinstance(v, CycNum) and v.promote(e).galois(j % e or 1) != v:
                return False
    return True
