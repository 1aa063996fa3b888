"""Inverse-square-root functional calculus and the quasi-polar retraction.

The model map is x -> (1+x)^{-1/2} - 1 applied to self-adjoint elements a
with |a| < 1/2, through eigenvalues for matrix instances and pointwise for
function instances.  Its defining properties (commutation with the argument,
a . (m(a) . m(a)) = 0, quasi-invertibility of the argument, fixing 0) make

    u = a . inv_sqrt(a* . a)

a quasi-unitary whenever a* . a and a . a* lie in the admissible domain; this
is the quasi-analogue of taking the unitary part of a polar decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    Algebra,
    Element,
    QuasikitError,
    quasi_inverse,
    quasi_product,
)


class DomainError(QuasikitError):
    """Argument outside the admissible self-adjoint neighbourhood of 0."""


@dataclass(frozen=True)
class SqrtDomain:
    """Admissible arguments: self-adjoint elements with |a|_level < radius.

    ``norm_level`` of None selects the owner's spectral level, i.e. the
    lowest level whose bound controls eigenvalues / pointwise values, which
    keeps 1 + a positive on the whole domain when radius <= 1/2.
    """

    algebra: Algebra
    norm_level: int | None = None
    radius: float = 0.5
    sa_tol: float = 1e-10

    @property
    def level(self) -> int:
        if self.norm_level is not None:
            return self.norm_level
        return self.algebra.spectral_level


def in_domain(a: Element, dom: SqrtDomain) -> bool:
    if a.algebra is not dom.algebra:
        return False
    if (a - a.star()).top_norm() > dom.sa_tol:
        return False
    return a.seminorm(dom.level) < dom.radius


def inv_sqrt(a: Element, dom: SqrtDomain) -> Element:
    """(1+a)^{-1/2} - 1 on the admissible domain; output is self-adjoint."""
    if not in_domain(a, dom):
        raise DomainError(
            f"element outside the radius-{dom.radius} self-adjoint domain "
            f"of {dom.algebra.instance_id!r}"
        )
    sym = 0.5 * (a + a.star())

    def fn(x):
        base = 1.0 + x
        if np.any(base <= 0.0):
            raise DomainError("spectrum of 1 + a is not positive")
        return 1.0 / np.sqrt(base) - 1.0

    return a.algebra._wrap(a.algebra.apply_selfadjoint(fn, sym.payload))


@dataclass(frozen=True)
class SeriesResult:
    value: Element
    remainder_bound: float


def inv_sqrt_series(a: Element, terms: int) -> SeriesResult:
    """Binomial series sum_{k>=1} C(-1/2, k) a^k with a tail bound.

    The series has no constant term, so it stays inside the (non-unital)
    algebra.  The reported remainder bounds the tail in the norm used for
    r = |a|_top, valid whenever that norm is submultiplicative (matrix
    instances) or the product is pointwise (function instances at level 0).
    """
    r = a.top_norm()
    if r >= 1.0:
        raise DomainError(f"series diverges at |a|_top = {r}")
    acc = a.algebra.zero()
    power = a
    coeff = 1.0
    for k in range(1, terms + 1):
        coeff = coeff * (-0.5 - (k - 1)) / k
        acc = acc + coeff * power
        if k < terms:
            power = power * a
    # |C(-1/2, k)| decreases, so the tail is dominated by a geometric series
    next_coeff = abs(coeff * (-0.5 - terms) / (terms + 1))
    remainder = next_coeff * r ** (terms + 1) / (1.0 - r)
    return SeriesResult(acc, remainder)


@dataclass(frozen=True)
class InvSqrtCheck:
    """Defect magnitudes for the four defining properties."""

    commute: float
    annihilate: float
    invertible: float
    zero: float
    tol: float = 1e-9
    passed: dict = field(init=False, default=None)

    def __post_init__(self):
        object.__setattr__(
            self,
            "passed",
            {
                "commute": self.commute <= self.tol,
                "annihilate": self.annihilate <= self.tol,
                "invertible": self.invertible <= self.tol,
                "zero": self.zero <= self.tol,
            },
        )

    @property
    def all_ok(self) -> bool:
        return all(self.passed.values())


def verify_inv_sqrt_properties(
    a: Element, dom: SqrtDomain, tol: float = 1e-9
) -> InvSqrtCheck:
    """Check the four defining properties of the inverse square root at a.

    (1) a . m(a) = m(a) . a, (2) a . (m(a) . m(a)) = 0, (3) a is
    quasi-invertible (verified constructively), (4) m(0) = 0.
    """
    m = inv_sqrt(a, dom)
    commute = (quasi_product(a, m) - quasi_product(m, a)).top_norm()
    annihilate = quasi_product(a, quasi_product(m, m)).top_norm()
    qi = quasi_inverse(a)
    invertible = max(
        quasi_product(a, qi).top_norm(), quasi_product(qi, a).top_norm()
    )
    zero = inv_sqrt(a.algebra.zero(), dom).top_norm()
    return InvSqrtCheck(commute, annihilate, invertible, zero, tol)


def quasi_polar(a: Element, dom: SqrtDomain) -> Element:
    """Quasi-unitary part u = a . inv_sqrt(a* . a) of a.

    Requires a* . a and a . a* inside the domain; computing the quasi-inverse
    of a along the way certifies that a is quasi-invertible.
    """
    right = quasi_product(a.star(), a)
    left = quasi_product(a, a.star())
    if not in_domain(right, dom):
        raise DomainError("a* . a outside the inverse-square-root domain")
    if not in_domain(left, dom):
        raise DomainError("a . a* outside the inverse-square-root domain")
    quasi_inverse(a)  # raises if 1 + a is singular
    return quasi_product(a, inv_sqrt(right, dom))


def inv_sqrt_lipschitz_bound(radius: float) -> float:
    """Analytic Lipschitz constant of x -> (1+x)^{-1/2} - 1 on [-r, r].

    Equals the derivative bound 0.5 (1-r)^{-3/2}; because the series
    coefficients are alternating with |C(-1/2,k)| summing to the same
    profile, the bound also applies to matrix arguments with |a| <= r.
    """
    if not 0.0 <= radius < 1.0:
        raise ValueError("radius must be in [0, 1)")
    return 0.5 * (1.0 - radius) ** -1.5
