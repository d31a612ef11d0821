"""Arithmetic in the prime field F_q.

Two layers live here.  `FieldCtx` carries the modulus and exposes fast
helpers on plain ints (used by the linear algebra in :mod:`qrss.codec`),
while `FieldElement` is a context-tagged scalar with operator overloads
for code that wants to stay explicit about which field it is in.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "FieldError",
    "ContextMismatchError",
    "FieldZeroDivisionError",
    "FieldCtx",
    "FieldElement",
    "is_prime",
    "add",
    "sub",
    "neg",
    "mul",
    "inv",
    "power",
]

MAX_MODULUS = 2**31


class FieldError(ValueError):
    """Base class for field arithmetic errors."""


class ContextMismatchError(FieldError):
    """Raised when combining elements of different fields."""


class FieldZeroDivisionError(FieldError, ZeroDivisionError):
    """Raised when inverting zero."""


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldCtx:
    """The prime field with ``q`` elements."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or isinstance(self.q, bool):
            raise FieldError(f"modulus must be an int, got {self.q!r}")
        if self.q > MAX_MODULUS:
            raise FieldError(f"modulus {self.q} exceeds supported range 2^31")
        if not is_prime(self.q):
            raise FieldError(f"modulus {self.q} is not prime")

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(value % self.q, self)

    def elements(self):
        return [FieldElement(v, self) for v in range(self.q)]

    # int-level helpers; inputs may be any ints, outputs are reduced

    def reduce(self, a: int) -> int:
        return a % self.q

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def neg(self, a: int) -> int:
        return -a % self.q

    def mul(self, a: int, b: int) -> int:
        return a * b % self.q

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise FieldZeroDivisionError(f"0 has no inverse in F_{self.q}")
        return pow(a, -1, self.q)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise FieldError("negative exponent")
        # builtin pow gives 0**0 == 1, which the Vandermonde rows rely on
        return pow(a % self.q, e, self.q)


@dataclass(frozen=True)
class FieldElement:
    value: int
    ctx: FieldCtx

    def __post_init__(self):
        if not 0 <= self.value < self.ctx.q:
            raise FieldError(f"{self.value} is not reduced modulo {self.ctx.q}")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise ContextMismatchError(
                    f"F_{self.ctx.q} element combined with F_{other.ctx.q} element"
                )
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return other % self.ctx.q
        return NotImplemented

    def _wrap(self, v: int) -> FieldElement:
        return FieldElement(v, self.ctx)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.ctx.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.ctx.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.ctx.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.ctx.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.ctx.mul(self.value, self.ctx.inv(o)))

    def __neg__(self):
        return self._wrap(self.ctx.neg(self.value))

    def __pow__(self, e: int):
        return self._wrap(self.ctx.pow(self.value, e))

    def inverse(self) -> FieldElement:
        return self._wrap(self.ctx.inv(self.value))

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other % self.ctx.q
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.ctx.q))

    def __repr__(self):
        return f"{self.value} (mod {self.ctx.q})"


def _check(a: FieldElement, b: FieldElement) -> None:
    if a.ctx != b.ctx:
        raise ContextMismatchError(f"F_{a.ctx.q} element combined with F_{b.ctx.q} element")


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check(a, b)
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    _check(a, b)
    return a - b


def neg(a: FieldElement) -> FieldElement:
    return -a


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check(a, b)
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def power(a: FieldElement, e: int) -> FieldElement:
    return a**e
