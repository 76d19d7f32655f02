"""Arithmetic of framing classes in pi_1(SO(3)) = Z/2 and the extension criterion.

A framing class is tracked symbolically: nothing here computes the class
of an actual framing from geometry, which would need a parallelization
of the tangent bundle. The functions implement the relations the
decision procedure relies on.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .homology import HomologyClass, Ring
from .linalg import Gf2Matrix, solve_gf2

__all__ = [
    "SigmaClass",
    "Gf2Functional",
    "twist",
    "cable_class",
    "extension_exists",
    "construct_extension",
    "brute_force_extension_exists",
]


@dataclass(frozen=True)
class SigmaClass:
    """Element of pi_1(SO(3)) = Z/2."""

    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError("a framing class is 0 or 1")

    @classmethod
    def of(cls, n: int | "SigmaClass") -> "SigmaClass":
        return n if isinstance(n, SigmaClass) else cls(int(n) % 2)

    def __add__(self, other: "SigmaClass | int") -> "SigmaClass":
        return SigmaClass((self.value + SigmaClass.of(other).value) % 2)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return bool(self.value)


@dataclass(frozen=True)
class Gf2Functional:
    """Linear map H_1(M; Z/2) -> Z/2, given by its values on the basis."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(c) % 2 for c in self.coefficients))

    @property
    def dim(self) -> int:
        return len(self.coefficients)

    def __call__(self, x: HomologyClass | tuple[int, ...]) -> int:
        coords = x.coords if isinstance(x, HomologyClass) else tuple(x)
        if len(coords) != self.dim:
            raise ValueError("functional and vector have different lengths")
        return sum(a * b for a, b in zip(self.coefficients, coords)) % 2


def twist(c: SigmaClass | int, n: int) -> SigmaClass:
    """Class after n full meridional twists; each twist is the generator."""
    return SigmaClass.of(c) + n


def cable_class(c: SigmaClass | int) -> SigmaClass:
    """Class of the revolution framing of the (2,1)-cable of a knot framed with class c.

    The cable runs twice along the knot and once around it, so its class
    is 2c + 1, which is always the generator.
    """
    return SigmaClass((2 * SigmaClass.of(c).value + 1) % 2)


def _coords(kappa2: HomologyClass | tuple[int, ...]) -> tuple[int, ...]:
    if isinstance(kappa2, HomologyClass):
        if kappa2.ring is not Ring.Z2:
            raise ValueError("expected a class in homology with Z/2 coefficients")
        return kappa2.coords
    return tuple(int(x) % 2 for x in kappa2)


def extension_exists(kappa2: HomologyClass | tuple[int, ...], c: SigmaClass | int) -> bool:
    """Is there a functional phi on H_1(M; Z/2) with phi(kappa2) = c?

    Decided by solving the single GF(2) equation sum_i phi_i * kappa_i = c.
    """
    x = _coords(kappa2)
    target = SigmaClass.of(c).value
    if not x:
        return target == 0
    A = Gf2Matrix.from_dense([list(x)])
    return solve_gf2(A, [target]) is not None


def construct_extension(kappa2: HomologyClass | tuple[int, ...]) -> Gf2Functional:
    """A functional taking the value 1 on the nonzero class kappa2."""
    x = _coords(kappa2)
    if not any(x):
        raise ValueError("the class is zero; no functional takes the value 1 on it")
    sol = solve_gf2(Gf2Matrix.from_dense([list(x)]), [1])
    if sol is None:  # cannot happen for a nonzero row
        raise ArithmeticError("GF(2) solver failed on a nonzero equation")
    phi = Gf2Functional(tuple(sol))
    if phi(x) != 1:
        raise ArithmeticError("constructed functional does not satisfy phi(kappa) = 1")
    return phi


def brute_force_extension_exists(kappa2: HomologyClass | tuple[int, ...], c: SigmaClass | int) -> bool:
    """Oracle: try all 2^d functionals."""
    x = _coords(kappa2)
    target = SigmaClass.of(c).value
    return any(Gf2Functional(phi)(x) == target for phi in product((0, 1), repeat=len(x)))
