"""Fixed-precision p-adic integers and Teichmüller representatives.

The ring of Witt vectors over F_p is Z_p.  An element is kept as its residue
modulo ``p**N``; every element has a unique expansion ``sum(omega(d_i) p**i)``
with Teichmüller digits ``omega(d_i)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DivisionByZero, DomainError, PrecisionLoss
from .valuecore import INF, Exponent, is_prime

__all__ = [
    "PadicInt", "padic_arith", "padic_valuation", "teichmuller",
    "teichmuller_lift", "teich_digits", "teich_reassemble", "base_digits",
]


@dataclass(frozen=True)
class PadicInt:
    """An element of Z_p known modulo ``p**N``."""

    value: int
    p: int
    N: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.N < 1:
            raise PrecisionLoss(f"precision must be positive, got {self.N}")
        object.__setattr__(self, "value", self.value % self.p ** self.N)

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    def _coerce(self, other) -> tuple[int, int, int]:
        """Return (a, b, N) reduced to the common (minimum) precision."""
        if isinstance(other, PadicInt):
            if other.p != self.p:
                raise DomainError(f"Z_{self.p} and Z_{other.p} do not mix")
            n = min(self.N, other.N)
            return self.value, other.value, n
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value, other, self.N
        raise TypeError(f"cannot combine PadicInt with {type(other).__name__}")

    def __add__(self, other):
        a, b, n = self._coerce(other)
        return PadicInt(a + b, self.p, n)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, n = self._coerce(other)
        return PadicInt(a - b, self.p, n)

    def __rsub__(self, other):
        a, b, n = self._coerce(other)
        return PadicInt(b - a, self.p, n)

    def __mul__(self, other):
        a, b, n = self._coerce(other)
        return PadicInt(a * b, self.p, n)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicInt(-self.value, self.p, self.N)

    def __bool__(self):
        return self.value != 0

    def valuation(self) -> Exponent:
        return padic_valuation(self)

    @property
    def is_saturated(self) -> bool:
        """True when the value is zero at this precision (valuation >= N)."""
        return self.value == 0

    def divexact(self, other) -> "PadicInt":
        """Exact division; the result loses ``v_p(other)`` digits of precision."""
        a, b, n = self._coerce(other)
        b %= self.p ** n
        if b == 0:
            raise DivisionByZero("division by an element that is zero at this precision")
        vb = _val_int(b, self.p)
        va = _val_int(a % self.p ** n, self.p) if a % self.p ** n else n
        if va < vb:
            raise DomainError(f"v_p(a)={va} < v_p(b)={vb}: quotient is not integral")
        m = n - vb
        if m <= 0:
            raise PrecisionLoss("no digits of precision remain after division")
        ua = (a // self.p ** vb) % self.p ** m
        ub = (b // self.p ** vb) % self.p ** m
        return PadicInt(ua * pow(ub, -1, self.p ** m), self.p, m)

    def digits(self) -> list[int]:
        """Ordinary base-p digits, least significant first, exactly N of them."""
        return base_digits(self.value, self.p, self.N)

    def __int__(self):
        return self.value

    def __str__(self):
        return f"{self.value} mod {self.p}^{self.N}"


def _val_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def base_digits(value: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        value, r = divmod(value, p)
        out.append(r)
    return out


def padic_arith(a: PadicInt, b: PadicInt, op: str) -> PadicInt:
    """``add``, ``sub``, ``mul`` or ``divexact`` on two p-adic integers."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "divexact":
        return a.divexact(b)
    raise ValueError(f"unknown p-adic op {op!r}")


def padic_valuation(a: PadicInt) -> Exponent:
    """Number of factors p in ``a``; INF when ``a`` is zero at its precision."""
    if a.value == 0:
        return INF
    return _val_int(a.value, a.p)


@lru_cache(maxsize=4096)
def teichmuller_lift(a: int, p: int, N: int) -> int:
    """Residue mod ``p**N`` of the Teichmüller lift of ``a mod p``."""
    mod = p ** N
    x = a % p
    while True:
        y = pow(x, p, mod)
        if y == x:
            return x
        x = y


def teichmuller(a: int, p: int, N: int) -> PadicInt:
    """The unique ``w = a (mod p)`` with ``w**p = w (mod p**N)``.

    Iterates ``x -> x**p``; each step fixes one more digit, so at most N
    steps are needed.
    """
    if not 0 <= a < p:
        raise ValueError(f"residue {a} outside [0, {p})")
    return PadicInt(teichmuller_lift(a, p, N), p, N)


def teich_digits(a: PadicInt) -> list[int]:
    """Residues ``d_0..d_{N-1}`` with ``a = sum(omega(d_i) p**i) mod p**N``."""
    p, N = a.p, a.N
    x = a.value
    out = []
    for i in range(N):
        n = N - i
        d = x % p
        out.append(d)
        x = (x - teichmuller_lift(d, p, n)) % p ** n // p
    return out


def teich_reassemble(digits, p: int, N: int) -> PadicInt:
    mod = p ** N
    total = 0
    for i, d in enumerate(digits[:N]):
        total += teichmuller_lift(d, p, N) * p ** i
    return PadicInt(total % mod, p, N)
