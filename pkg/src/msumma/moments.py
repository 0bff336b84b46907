"""Moment functions of real order and their kernel pairs.

A moment function here is a finite product of factors Gamma_s(u)^(+-1)
with rational s, where

    Gamma_s(u) = Gamma(1 + s*u)     for s >= 0
    Gamma_s(u) = 1 / Gamma(1 - s*u) for s < 0,

optionally generalised (single-factor case) to a * Gamma(b + u/k).  The
order of the product is the exact rational sum of the signed s values.
Evaluation runs in log-space so values like Gamma(1+2u) at u = 300 never
overflow; callers get either the natural log or a ScaledComplex.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import MomentPoleError, UnsupportedKernelError, UnsupportedRangeError
from .scaled import ScaledComplex

LOG10_E = math.log10(math.e)


def _as_fraction(s) -> Fraction:
    return s if isinstance(s, Fraction) else Fraction(s)


def gamma_s(s, u: float, log: bool = False) -> float:
    """Gamma_s(u); with log=True the natural log is returned instead."""
    s = float(s)
    if s >= 0.0:
        x = 1.0 + s * u
        if x <= 0.0 and x == math.floor(x):
            raise MomentPoleError(f"Gamma_s pole: 1+s*u = {x} for s={s}, u={u}")
        lg = math.lgamma(x)
    else:
        x = 1.0 - s * u
        if x <= 0.0 and x == math.floor(x):
            # 1/Gamma at a pole is an exact zero
            return float("-inf") if log else 0.0
        lg = -math.lgamma(x)
    return lg if log else math.exp(lg)


@dataclass(frozen=True)
class MomentFunction:
    """Product of Gamma_s^(+-1) factors, optionally a*Gamma(b + s*u)."""

    factors: tuple = field(default_factory=tuple)  # ((Fraction s, int sign), ...)
    scale_a: float = 1.0
    shift_b: float = 1.0

    def __post_init__(self):
        facs = tuple((_as_fraction(s), int(sign)) for s, sign in self.factors)
        object.__setattr__(self, "factors", facs)
        if (self.scale_a != 1.0 or self.shift_b != 1.0) and len(facs) != 1:
            raise UnsupportedKernelError(
                "generalised (a, b) parameters require a single Gamma_s factor")
        if self.scale_a <= 0 or self.shift_b < 1.0:
            raise ValueError("require a > 0 and b >= 1")

    @staticmethod
    def gamma(s, *, a: float = 1.0, b: float = 1.0) -> "MomentFunction":
        return MomentFunction(((Fraction(_as_fraction(s)), +1),), a, b)

    @staticmethod
    def one() -> "MomentFunction":
        """The constant moment function m == 1 (Gamma_0)."""
        return MomentFunction(((Fraction(0), +1),))

    def order(self) -> Fraction:
        return sum((s * sign for s, sign in self.factors), Fraction(0))

    def __mul__(self, other: "MomentFunction") -> "MomentFunction":
        if self.scale_a != 1.0 or self.shift_b != 1.0 or \
                other.scale_a != 1.0 or other.shift_b != 1.0:
            raise UnsupportedKernelError("cannot compose generalised moment functions")
        return MomentFunction(self.factors + other.factors)

    def __truediv__(self, other: "MomentFunction") -> "MomentFunction":
        if self.scale_a != 1.0 or self.shift_b != 1.0 or \
                other.scale_a != 1.0 or other.shift_b != 1.0:
            raise UnsupportedKernelError("cannot compose generalised moment functions")
        inv = tuple((s, -sign) for s, sign in other.factors)
        return MomentFunction(self.factors + inv)

    def log_eval(self, u: float) -> float:
        """Natural log of m(u); raises MomentPoleError at gamma poles."""
        if u < 0:
            raise ValueError("moment functions are evaluated for u >= 0")
        total = 0.0
        for s, sign in self.factors:
            sf = float(s)
            if sf >= 0:
                x = self.shift_b + sf * u
                if x <= 0.0 and x == math.floor(x):
                    raise MomentPoleError(
                        f"pole of Gamma at {x} (factor s={s}, u={u})")
                term = math.lgamma(x)
            else:
                x = self.shift_b - sf * u
                if x <= 0.0 and x == math.floor(x):
                    raise MomentPoleError(
                        f"zero of 1/Gamma at {x} makes log diverge (s={s}, u={u})")
                term = -math.lgamma(x)
            total += sign * term
        return total + math.log(self.scale_a)

    def eval_scaled(self, u: float) -> ScaledComplex:
        return ScaledComplex.from_log10(self.log_eval(u) * LOG10_E)

    def __call__(self, u: float) -> float:
        """Plain-float value; overflows raise OverflowError (use eval_scaled)."""
        return math.exp(self.log_eval(u))

    def ratio_scaled(self, u_num: float, u_den: float) -> ScaledComplex:
        """m(u_num)/m(u_den) as a ScaledComplex (single log-space subtraction)."""
        return ScaledComplex.from_log10(
            (self.log_eval(u_num) - self.log_eval(u_den)) * LOG10_E)


GAMMA_1 = MomentFunction.gamma(1)
GAMMA_0 = MomentFunction.one()


def mittag_leffler(alpha: float, z: complex, beta: float = 1.0) -> complex:
    """E_{alpha,beta}(z) = sum z^n / Gamma(beta + alpha*n), alpha in (0, 2].

    Compensated (Kahan) series below |z| = 40**alpha; beyond that the
    exponential asymptotics are used inside the sector |arg z| <= alpha*pi/2
    and an UnsupportedRangeError is raised elsewhere (never a silent wrong
    value).
    """
    if not 0.0 < alpha <= 2.0:
        raise UnsupportedRangeError(f"alpha={alpha} outside (0, 2]")
    z = complex(z)
    if alpha == 1.0 and beta == 1.0:
        return cmath.exp(z)
    r_switch = 40.0 ** alpha
    if abs(z) <= r_switch:
        total = 0j
        comp = 0j
        zn = 1.0 + 0j
        n = 0
        while True:
            t = zn * math.exp(-math.lgamma(beta + alpha * n))
            y = t - comp
            s = total + y
            comp = (s - total) - y
            total = s
            n += 1
            zn *= z
            if n > 10 and abs(t) < 1e-18 * max(1.0, abs(total)):
                break
            if n > 200000:  # pragma: no cover
                break
        return total
    if abs(cmath.phase(z)) <= alpha * math.pi / 2 + 1e-12:
        w = z ** (1.0 / alpha)
        lead = (1.0 / alpha) * w ** (1.0 - beta) * cmath.exp(w)
        corr = 0j
        for k in range(1, 11):
            x = beta - alpha * k
            if x <= 0.0 and x == math.floor(x):
                continue  # 1/Gamma vanishes
            corr += z ** (-k) * math.exp(-math.lgamma(x)) * _gamma_sign(x)
        return lead - corr
    raise UnsupportedRangeError(
        f"|z|={abs(z):.3g} exceeds validated radius {r_switch:.3g} outside "
        f"the sector |arg z| <= alpha*pi/2")


def _gamma_sign(x: float) -> float:
    """Sign of Gamma(x) for non-pole real x."""
    if x > 0:
        return 1.0
    return 1.0 if int(math.floor(x)) % 2 == 0 else -1.0


@dataclass(frozen=True)
class KernelPair:
    """Kernel functions (e_m, E_m) attached to a moment function of order 1/k."""

    k: float
    p: int
    em: Callable[[complex], complex]
    Em: Callable[[complex], complex]
    moment: MomentFunction

    def flatness_sector(self) -> float:
        """Half-opening pi/(2k) of the sector where e_m is exponentially flat."""
        return math.pi / (2.0 * self.k)


def kernel_pair_for(m: MomentFunction) -> KernelPair:
    """Closed-form kernel pair for a single-factor a*Gamma(b + u/k) moment.

    For kernel order k <= 1/2 the minimal root-lift p with p*k > 1/2 is
    recorded; the closed form of e_m is unchanged by the lift (the lifted
    kernel satisfies e_m(z) = e_mtilde(z^(1/p))/p with the same expression),
    so only p and the validity sector differ.
    """
    if len(m.factors) != 1 or m.factors[0][1] != +1 or m.factors[0][0] <= 0:
        raise UnsupportedKernelError(
            "kernel pairs exist only for single-factor Gamma_s moments with "
            "s > 0; rewrite composite moment functions in Gamma_s form")
    s = m.factors[0][0]
    k = 1.0 / float(s)  # order s = 1/k
    a, b = m.scale_a, m.shift_b
    p = 1
    while p * k <= 0.5:
        p += 1

    def em(x: complex) -> complex:
        x = complex(x)
        if x == 0:
            return 0j
        return a * k * x ** (b * k) * cmath.exp(-(x ** k))

    def Em(z: complex) -> complex:
        return mittag_leffler(float(s), z, beta=b) / a

    return KernelPair(k=k, p=p, em=em, Em=Em, moment=m)
