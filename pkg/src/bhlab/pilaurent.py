"""Laurent polynomials in the formal symbol pi over exact rationals.

These are the coefficients of every chain-level computation: pi stays
formal until the p-adic stage, where pi^(p-1) = -p is imposed.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


class PiLaurent:
    """Finite sum  sum_k  c_k * pi^k  with exact rational c_k.

    Immutable; zero coefficients are never stored.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None):
        clean = {}
        if coeffs:
            for k, c in coeffs.items():
                c = Fraction(c)
                if c != 0:
                    clean[int(k)] = c
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("PiLaurent is immutable")

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero() -> "PiLaurent":
        return PiLaurent()

    @staticmethod
    def one() -> "PiLaurent":
        return PiLaurent({0: 1})

    @staticmethod
    def const(c: Scalar) -> "PiLaurent":
        return PiLaurent({0: c})

    @staticmethod
    def pi_power(k: int, c: Scalar = 1) -> "PiLaurent":
        return PiLaurent({k: c})

    # -- queries -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def degrees(self) -> Iterable[int]:
        return self.coeffs.keys()

    def min_degree(self) -> int:
        return min(self.coeffs)

    def max_degree(self) -> int:
        return max(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs.get(k, Fraction(0))

    def eval_at(self, pi_value: Scalar) -> Fraction:
        """Evaluate at a nonzero rational value of pi."""
        v = Fraction(pi_value)
        if v == 0:
            raise ZeroDivisionError("pi must be a unit")
        return sum((c * v ** k for k, c in self.coeffs.items()), Fraction(0))

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: "PiLaurent") -> "PiLaurent":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c
        return PiLaurent(out)

    def __sub__(self, other: "PiLaurent") -> "PiLaurent":
        return self + (-other)

    def __neg__(self) -> "PiLaurent":
        return PiLaurent({k: -c for k, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out: dict[int, Fraction] = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return PiLaurent(out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "PiLaurent":
        c = Fraction(c)
        if c == 0:
            return PiLaurent()
        return PiLaurent({k: v * c for k, v in self.coeffs.items()})

    def shift(self, k: int) -> "PiLaurent":
        """Multiply by pi^k."""
        return PiLaurent({d + k: c for d, c in self.coeffs.items()})

    # -- protocol ------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PiLaurent.const(other)
        return isinstance(other, PiLaurent) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*pi")
            else:
                parts.append(f"{c}*pi^{k}")
        return " + ".join(parts)

    def to_json(self) -> list:
        """[[pi_power, "num/den"], ...] sorted by power."""
        return [[k, f"{c.numerator}/{c.denominator}"]
                for k, c in sorted(self.coeffs.items())]

    @staticmethod
    def from_json(data) -> "PiLaurent":
        return PiLaurent({int(k): Fraction(s) for k, s in data})


ZERO = PiLaurent.zero()
ONE = PiLaurent.one()
