"""Decimal-scaled complex scalars.

A ScaledComplex stores value = mantissa * 10**exp10 with |mantissa| in
[1, 10) (or exactly 0).  Solution coefficients grow like Gamma(1+sigma*j)
and leave double range near j ~ 85 for sigma = 2; this representation keeps
truncation orders of several hundred feasible without arbitrary precision.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

_MAX_SHIFT = 400


def _norm(m: complex, e: int) -> tuple[complex, int]:
    a = abs(m)
    if a == 0.0:
        return 0j, 0
    if not math.isfinite(a):
        return m, e
    d = int(math.floor(math.log10(a)))
    if abs(d) > 300:
        # one-step rescale of subnormal or huge mantissas would overflow
        half = d // 2
        m = (m * 10.0 ** (-half)) * 10.0 ** (half - d)
    else:
        m = m * 10.0 ** (-d)
    e = e + d
    a = abs(m)
    if a >= 10.0:
        m /= 10.0
        e += 1
    elif a < 1.0:
        m *= 10.0
        e -= 1
    return m, e


@dataclass(frozen=True)
class ScaledComplex:
    mantissa: complex
    exp10: int

    @staticmethod
    def from_complex(z: complex) -> "ScaledComplex":
        m, e = _norm(complex(z), 0)
        return ScaledComplex(m, e)

    @staticmethod
    def from_log10(log10_mag: float, phase: float = 0.0) -> "ScaledComplex":
        """Build from a decimal log-magnitude and a phase angle."""
        e = int(math.floor(log10_mag))
        m = 10.0 ** (log10_mag - e) * cmath.exp(1j * phase)
        m, e = _norm(m, e)
        return ScaledComplex(m, e)

    @staticmethod
    def zero() -> "ScaledComplex":
        return ScaledComplex(0j, 0)

    def __bool__(self) -> bool:
        return self.mantissa != 0

    def __add__(self, other: "ScaledComplex") -> "ScaledComplex":
        if self.mantissa == 0:
            return other
        if other.mantissa == 0:
            return self
        if self.exp10 >= other.exp10:
            hi, lo = self, other
        else:
            hi, lo = other, self
        d = lo.exp10 - hi.exp10
        m = hi.mantissa + (lo.mantissa * 10.0**d if d > -_MAX_SHIFT else 0.0)
        return ScaledComplex(*_norm(m, hi.exp10))

    def __neg__(self) -> "ScaledComplex":
        return ScaledComplex(-self.mantissa, self.exp10 if self.mantissa != 0 else 0)

    def __sub__(self, other: "ScaledComplex") -> "ScaledComplex":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ScaledComplex):
            return ScaledComplex(*_norm(self.mantissa * other.mantissa,
                                        self.exp10 + other.exp10))
        return ScaledComplex(*_norm(self.mantissa * complex(other), self.exp10))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ScaledComplex):
            return ScaledComplex(*_norm(self.mantissa / other.mantissa,
                                        self.exp10 - other.exp10))
        return ScaledComplex(*_norm(self.mantissa / complex(other), self.exp10))

    def conjugate(self) -> "ScaledComplex":
        return ScaledComplex(self.mantissa.conjugate(), self.exp10)

    def abs(self) -> "ScaledComplex":
        return ScaledComplex(abs(self.mantissa), self.exp10)

    def log10_abs(self) -> float:
        """Decimal log of the magnitude; -inf for zero."""
        if self.mantissa == 0:
            return float("-inf")
        return math.log10(abs(self.mantissa)) + self.exp10

    def phase(self) -> float:
        return cmath.phase(self.mantissa)

    def to_complex(self) -> complex:
        """Convert to a plain complex; overflows to inf past ~1e308."""
        if self.mantissa == 0:
            return 0j
        if self.exp10 > 307:
            return cmath.rect(math.inf, cmath.phase(self.mantissa))
        if self.exp10 < -320:
            return 0j
        return self.mantissa * 10.0**self.exp10

    def is_finite(self) -> bool:
        return math.isfinite(abs(self.mantissa))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"ScaledComplex({self.mantissa!r}e{self.exp10:+d})"
