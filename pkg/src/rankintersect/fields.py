"""Exact arithmetic in F_q (q prime) and F_{q^m}: Frobenius maps and basis expansion.

Elements of F_{q^m} are plain ints: the encoding of sum(c_j * alpha^j) is
sum(c_j * q^j) with digits in the power basis (little-endian). Scalars of the
base field F_q embed as themselves.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from . import linalg
from .errors import DegreeMismatch, DependentInput, NonPrimeCharacteristic, ReducibleModulus


# --- small number theory -------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors by trial division (inputs stay well below 2^40 here)."""
    factors = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            factors.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        factors.append(n)
    return factors


# --- polynomial arithmetic on ascending coefficient tuples over F_q ------

def _poly_trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: Sequence[int], b: Sequence[int], q: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % q
    return _poly_trim(out)


def _poly_mod(a: Sequence[int], mod: Sequence[int], q: int) -> list[int]:
    # mod must be monic
    out = [v % q for v in a]
    dm = len(mod) - 1
    while len(out) - 1 >= dm and out:
        lead = out[-1]
        if lead:
            shift = len(out) - 1 - dm
            for i, c in enumerate(mod):
                out[shift + i] = (out[shift + i] - lead * c) % q
        out.pop()
        _poly_trim(out)
    return out


def _poly_gcd(a: Sequence[int], b: Sequence[int], q: int) -> list[int]:
    a = _poly_trim([v % q for v in a])
    b = _poly_trim([v % q for v in b])
    while b:
        inv = pow(b[-1], q - 2, q)
        monic_b = [(v * inv) % q for v in b]
        a, b = b, _poly_mod(a, monic_b, q)
    return a


def _poly_powmod(base: Sequence[int], exp: int, mod: Sequence[int], q: int) -> list[int]:
    result = [1]
    acc = _poly_mod(base, mod, q)
    while exp:
        if exp & 1:
            result = _poly_mod(_poly_mul(result, acc, q), mod, q)
        acc = _poly_mod(_poly_mul(acc, acc, q), mod, q)
        exp >>= 1
    return result


def is_irreducible(modulus: Sequence[int], q: int) -> bool:
    """Rabin test for a monic polynomial over F_q."""
    m = len(modulus) - 1
    if m < 1 or modulus[-1] % q != 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    # x^(q^m) == x mod f
    t = x
    for _ in range(m):
        t = _poly_powmod(t, q, modulus, q)
    if _poly_trim([(a - b) % q for a, b in zip_pad(t, x)]):
        return False
    # gcd(x^(q^(m/p)) - x, f) = 1 for every prime p | m
    for p in prime_factors(m):
        t = x
        for _ in range(m // p):
            t = _poly_powmod(t, q, modulus, q)
        diff = _poly_trim([(a - b) % q for a, b in zip_pad(t, x)])
        g = _poly_gcd(modulus, diff, q)
        if len(g) - 1 > 0:
            return False
    return True


def zip_pad(a: Sequence[int], b: Sequence[int]) -> list[tuple[int, int]]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]


def _raw_mul_enc(a: int, b: int, q: int, modulus: Sequence[int]) -> int:
    m = len(modulus) - 1
    prod = _poly_mod(_poly_mul(list(decode(a, q, m)), list(decode(b, q, m)), q),
                     list(modulus), q)
    prod += [0] * (m - len(prod))
    return encode(prod, q)


def _raw_pow_enc(a: int, e: int, q: int, modulus: Sequence[int]) -> int:
    result = 1
    acc = a
    while e:
        if e & 1:
            result = _raw_mul_enc(result, acc, q, modulus)
        acc = _raw_mul_enc(acc, acc, q, modulus)
        e >>= 1
    return result


# --- the extension field --------------------------------------------------

def encode(digits: Sequence[int], q: int) -> int:
    value = 0
    for d in reversed(digits):
        value = value * q + d % q
    return value


def decode(value: int, q: int, m: int) -> tuple[int, ...]:
    digits = []
    for _ in range(m):
        digits.append(value % q)
        value //= q
    return tuple(digits)


_TABLE_LIMIT = 1 << 16


class ExtField:
    """The tower F_q in F_{q^m} with a fixed monic irreducible modulus.

    Immutable after construction; safe to share across threads. Multiplication
    uses log/antilog tables when q^m <= 2^16, otherwise polynomial reduction.
    """

    def __init__(self, q: int, m: int, modulus: Sequence[int] | None = None,
                 basis: Sequence[int] | None = None):
        if not is_prime(q):
            raise NonPrimeCharacteristic(f"q = {q} is not prime")
        if m < 1:
            raise DegreeMismatch(f"extension degree m = {m} must be >= 1")
        if modulus is None:
            modulus = default_modulus(q, m)
        modulus = tuple(v % q for v in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise DegreeMismatch(f"modulus must be monic of degree {m}, got {list(modulus)}")
        if not is_irreducible(modulus, q):
            raise ReducibleModulus(f"modulus {list(modulus)} is reducible over F_{q}")
        self.q = q
        self.m = m
        self.modulus = modulus
        self.order = q ** m
        # encoding of the modulus root alpha (= class of x; for m = 1 the root itself)
        self.alpha = q % self.order if m > 1 else (-modulus[0]) % q
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        if self.order <= _TABLE_LIMIT:
            self._build_tables()
        if basis is None:
            basis = tuple(self.pow(self.alpha, j) for j in range(m)) if m > 1 else (1,)
            self._power_basis = True
            self._basis_inv = None
        else:
            basis = tuple(int(b) % self.order for b in basis)
            if len(basis) != m:
                raise DegreeMismatch(f"basis must have {m} elements")
            columns = [decode(b, q, m) for b in basis]
            mat = [tuple(col[i] for col in columns) for i in range(m)]
            try:
                self._basis_inv = linalg.invert_matrix(mat, q)
            except Exception as exc:
                raise DependentInput(f"basis is not F_q-linearly independent: {list(basis)}") from exc
            self._power_basis = all(basis[j] == (q ** j if m > 1 else 1) for j in range(m))
        self.basis = tuple(basis)

    # -- raw polynomial product (bootstrap path, also used beyond table limit)

    def _raw_mul(self, a: int, b: int) -> int:
        q, m = self.q, self.m
        if q == 2:
            # carry-less multiply on bit-packed coefficients, then modulus reduction
            prod = 0
            x = a
            while x:
                low = x & -x
                prod ^= b << (low.bit_length() - 1)
                x ^= low
            modbits = encode(self.modulus, 2)
            top = 1 << m
            while prod >> m:
                shift = prod.bit_length() - (m + 1)
                prod ^= modbits << shift
            return prod
        pa = list(decode(a, q, m))
        pb = list(decode(b, q, m))
        prod = _poly_mod(_poly_mul(pa, pb, q), list(self.modulus), q)
        prod += [0] * (m - len(prod))
        return encode(prod, q)

    def _element_order_is_max(self, g: int, factors: list[int]) -> bool:
        n = self.order - 1
        for p in factors:
            if self.pow(g, n // p) == 1:
                return False
        return True

    def _build_tables(self) -> None:
        n = self.order - 1
        if n == 1:
            self._exp = [1]
            self._log = [0, 0]
            return
        factors = prime_factors(n)
        generator = None
        for g in range(2, self.order):
            if all(self._pow_raw(g, n // p) != 1 for p in factors):
                generator = g
                break
        if generator is None:  # cannot happen for a true field
            raise ReducibleModulus(f"no multiplicative generator found; modulus {list(self.modulus)}")
        exp = [1] * n
        for i in range(1, n):
            exp[i] = self._raw_mul(exp[i - 1], generator)
        log = [0] * self.order
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = exp
        self._log = log
        self.generator = generator

    def _pow_raw(self, a: int, e: int) -> int:
        result = 1
        acc = a
        while e:
            if e & 1:
                result = self._raw_mul(result, acc)
            acc = self._raw_mul(acc, acc)
            e >>= 1
        return result

    # -- arithmetic

    def add(self, a: int, b: int) -> int:
        if self.q == 2:
            return a ^ b
        return encode([(x + y) % self.q for x, y in zip(decode(a, self.q, self.m), decode(b, self.q, self.m))], self.q)

    def neg(self, a: int) -> int:
        if self.q == 2:
            return a
        return encode([(-x) % self.q for x in decode(a, self.q, self.m)], self.q)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            n = self.order - 1
            return self._exp[(self._log[a] + self._log[b]) % n]
        return self._raw_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self._exp is not None:
            n = self.order - 1
            return self._exp[(-self._log[a]) % n]
        return self._pow_raw(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        n = self.order - 1
        e %= n
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % n]
        return self._pow_raw(a, e)

    def frobenius(self, a: int, i: int = 1) -> int:
        """The q^i-power map; F_q-linear, and the identity for i = m."""
        return self.pow(a, self.q ** (i % self.m))

    def is_primitive(self, a: int) -> bool:
        if a == 0:
            return False
        n = self.order - 1
        return all(self.pow(a, n // p) != 1 for p in prime_factors(n)) if n > 1 else a == 1

    # -- coordinates

    def expand(self, a: int) -> tuple[int, ...]:
        """Coordinates of a with respect to the field's basis Gamma."""
        digits = decode(a, self.q, self.m)
        if self._power_basis:
            return digits
        q = self.q
        return tuple(
            sum(self._basis_inv[i][j] * digits[j] for j in range(self.m)) % q
            for i in range(self.m)
        )

    def lift(self, coords: Sequence[int]) -> int:
        """Inverse of expand: the element with the given Gamma-coordinates."""
        if len(coords) != self.m:
            raise DegreeMismatch(f"expected {self.m} coordinates")
        acc = 0
        for c, g in zip(coords, self.basis):
            if c % self.q:
                acc = self.add(acc, self.mul(c % self.q, g))
        return acc

    # -- misc

    def elements(self):
        return range(self.order)

    def nonzero(self):
        return range(1, self.order)

    def describe(self) -> dict:
        return {"q": self.q, "m": self.m, "modulus": list(self.modulus)}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExtField)
            and (self.q, self.m, self.modulus, self.basis) == (other.q, other.m, other.modulus, other.basis)
        )

    def __hash__(self) -> int:
        return hash((self.q, self.m, self.modulus, self.basis))

    def __repr__(self) -> str:
        return f"ExtField(q={self.q}, m={self.m}, modulus={list(self.modulus)})"


@lru_cache(maxsize=None)
def default_modulus(q: int, m: int) -> tuple[int, ...]:
    """Smallest primitive monic polynomial of degree m, ordered by sum(c_j q^j)."""
    if not is_prime(q):
        raise NonPrimeCharacteristic(f"q = {q} is not prime")
    if m < 1:
        raise DegreeMismatch(f"m = {m} must be >= 1")
    order = q**m
    n = order - 1
    factors = prime_factors(n) if n > 1 else []
    for low in range(order):
        candidate = decode(low, q, m) + (1,)
        if not is_irreducible(candidate, q):
            continue
        alpha = q % order if m > 1 else (-candidate[0]) % q
        if n == 1:
            primitive = alpha == 1
        elif alpha == 0:
            primitive = False
        else:
            primitive = all(
                _raw_pow_enc(alpha, n // p, q, candidate) != 1 for p in factors
            )
        if primitive:
            return candidate
    raise ReducibleModulus(f"no primitive polynomial of degree {m} over F_{q}")  # unreachable


@lru_cache(maxsize=None)
def make_extension_field(q: int, m: int, modulus: tuple[int, ...] | None = None) -> ExtField:
    """Construct (and cache) the tower F_q in F_{q^m} with a validated modulus."""
    return ExtField(q, m, modulus=modulus)
