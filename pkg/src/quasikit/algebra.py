"""Concrete seminormed *-algebras and the quasi-group operations on them.

Three desk-scale models of metrisable locally convex *-algebras are provided:

* :class:`MatrixAlgebra` -- full complex matrix algebras with operator-norm
  seminorms (optionally a normalised trace norm at level 0),
* :class:`SmoothCircleAlgebra` -- trigonometric polynomials of bounded degree
  as a model of smooth functions on the circle, with weighted derivative
  sup-norms,
* :class:`PathAlgebra` -- paths valued in another algebra, sampled on a
  uniform grid of [0, 1], with supremum seminorms.

Every instance exposes a ladder of non-decreasing seminorms satisfying the
shifted compatibility contracts

    |a*|_n <= |a|_{n+1}        |a b|_n <= |a|_{n+1} |b|_{n+1}

and the derived translation-invariant metric

    d(a, b) = sum_{n < count} 2^{-n} min(1, |a - b|_n).

The quasi-product a . b = a + b + ab has two-sided identity 0 and corresponds
to (1+a)(1+b) = 1 + a . b in the unitisation; quasi-invertible and
quasi-unitary elements are the preimages of the invertibles and unitaries
there.  Elements are immutable values and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np


class QuasikitError(Exception):
    """Base class for all package errors."""


class OwnerMismatchError(QuasikitError):
    """Binary operation applied to elements of different algebras."""


class NotQuasiInvertibleError(QuasikitError):
    """1 + a is (numerically) singular, so a has no quasi-inverse."""


class LevelRangeError(QuasikitError):
    """Seminorm level outside the exposed ladder."""


class SeminormFamily:
    """Ladder of ``count`` non-decreasing seminorms on one algebra."""

    def __init__(self, count: int, eval_fn: Callable[[int, np.ndarray], float]):
        if count < 4:
            raise ValueError("a seminorm family must expose at least 4 levels")
        self.count = count
        self._eval = eval_fn

    def eval(self, n: int, a: "Element") -> float:
        if not 0 <= n < self.count:
            raise LevelRangeError(f"seminorm level {n} outside [0, {self.count})")
        return float(self._eval(n, a.payload))


@dataclass(frozen=True, eq=False)
class Element:
    """Immutable member of a concrete algebra; payload is a complex ndarray."""

    algebra: "Algebra"
    payload: np.ndarray

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        _check_owner(self, other)
        return self.algebra._wrap(self.payload + other.payload)

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        _check_owner(self, other)
        return self.algebra._wrap(self.payload - other.payload)

    def __neg__(self):
        return self.algebra._wrap(-self.payload)

    def __mul__(self, other):
        if isinstance(other, Element):
            _check_owner(self, other)
            return self.algebra._wrap(
                self.algebra.mul_payload(self.payload, other.payload)
            )
        if isinstance(other, (int, float, complex)):
            return self.algebra._wrap(complex(other) * self.payload)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.algebra._wrap(complex(other) * self.payload)
        return NotImplemented

    def star(self) -> "Element":
        return self.algebra._wrap(self.algebra.star_payload(self.payload))

    def seminorm(self, n: int) -> float:
        return self.algebra.seminorms.eval(n, self)

    def top_norm(self) -> float:
        return self.seminorm(self.algebra.seminorms.count - 1)

    def bit_equal(self, other: "Element") -> bool:
        return self.algebra is other.algebra and np.array_equal(
            self.payload, other.payload
        )


def _check_owner(a: Element, b: Element) -> None:
    if a.algebra is not b.algebra:
        raise OwnerMismatchError(
            f"elements of {a.algebra.instance_id!r} and {b.algebra.instance_id!r}"
        )


class Algebra:
    """Common machinery for the concrete instances.

    Subclasses provide the payload-level operations ``mul_payload``,
    ``star_payload``, ``quasi_inverse_payload``, ``apply_selfadjoint`` and a
    per-level seminorm ``_seminorm``.  Addition and scalar multiplication are
    plain ndarray arithmetic for all instances.
    """

    instance_id: str
    shape: tuple[int, ...]
    seminorms: SeminormFamily
    # lowest seminorm level that dominates the spectrum / pointwise values
    spectral_level: int = 0

    def element(self, payload) -> Element:
        arr = np.array(payload, dtype=complex)
        if arr.shape != self.shape:
            raise ValueError(
                f"payload shape {arr.shape} does not match {self.shape} "
                f"of algebra {self.instance_id!r}"
            )
        return self._wrap(arr)

    def _wrap(self, arr: np.ndarray) -> Element:
        arr = np.asarray(arr, dtype=complex)
        arr.flags.writeable = False
        return Element(self, arr)

    def zero(self) -> Element:
        return self._wrap(np.zeros(self.shape, dtype=complex))

    # payload-level operations -------------------------------------------

    def mul_payload(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def star_payload(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def quasi_inverse_payload(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def apply_selfadjoint(self, fn, x: np.ndarray) -> np.ndarray:
        """Apply a real scalar function through the spectral/pointwise data
        of a (numerically) self-adjoint payload."""
        raise NotImplementedError

    def _seminorm(self, n: int, x: np.ndarray) -> float:
        raise NotImplementedError

    # sampling -------------------------------------------------------------

    def random_element(self, rng: np.random.Generator, scale: float = 1.0) -> Element:
        raise NotImplementedError

    def random_selfadjoint(
        self, rng: np.random.Generator, scale: float = 1.0
    ) -> Element:
        a = self.random_element(rng, scale)
        h = 0.5 * (a + a.star())
        top = h.seminorm(self.spectral_level)
        if top > 0:
            h = (scale / top) * h
        return h


class MatrixAlgebra(Algebra):
    """M_k(C) with all seminorm levels equal to the operator norm.

    With ``tracial_level0`` the lowest level is instead the normalised trace
    norm tr|a| / k, which still sits below the operator norm, so the ladder
    stays non-decreasing and the shifted product/star contracts hold.
    """

    def __init__(
        self,
        size: int,
        levels: int = 6,
        *,
        tracial_level0: bool = False,
        instance_id: str | None = None,
    ):
        if size < 1:
            raise ValueError("matrix size must be >= 1")
        self.size = size
        self.shape = (size, size)
        self.tracial_level0 = tracial_level0
        self.instance_id = instance_id or (
            f"M{size}tr" if tracial_level0 else f"M{size}"
        )
        self.spectral_level = 1 if tracial_level0 else 0
        self.seminorms = SeminormFamily(levels, self._seminorm)

    def _seminorm(self, n: int, x: np.ndarray) -> float:
        if n == 0 and self.tracial_level0:
            return float(np.linalg.norm(x, "nuc")) / self.size
        return float(np.linalg.norm(x, 2))

    def mul_payload(self, x, y):
        return x @ y

    def star_payload(self, x):
        return x.conj().T

    def quasi_inverse_payload(self, x):
        # a' = (1+a)^{-1} - 1 = -(1+a)^{-1} a via a direct solve
        one = np.eye(self.size, dtype=complex)
        try:
            inv = np.linalg.solve(one + x, -x)
        except np.linalg.LinAlgError as exc:
            raise NotQuasiInvertibleError(str(exc)) from exc
        residual = np.linalg.norm((one + x) @ inv + x, 2)
        if not np.isfinite(residual) or residual > 1e-6 * max(
            1.0, float(np.linalg.norm(x, 2))
        ):
            raise NotQuasiInvertibleError("1 + a is numerically singular")
        return inv

    def apply_selfadjoint(self, fn, x):
        sym = 0.5 * (x + x.conj().T)
        w, v = np.linalg.eigh(sym)
        return (v * fn(w)) @ v.conj().T

    def random_element(self, rng, scale=1.0):
        g = rng.standard_normal(self.shape) + 1j * rng.standard_normal(self.shape)
        nrm = np.linalg.norm(g, 2)
        if nrm > 0:
            g = g * (scale * rng.uniform(0.5, 1.0) / nrm)
        return self._wrap(g)

    def random_unitary_payload(self, rng) -> np.ndarray:
        """Haar-ish unitary via QR with phase normalisation."""
        g = (
            rng.standard_normal(self.shape) + 1j * rng.standard_normal(self.shape)
        ) / np.sqrt(2.0)
        q, r = np.linalg.qr(g)
        d = np.diagonal(r)
        return q * (d / np.abs(d)).conj()


class SmoothCircleAlgebra(Algebra):
    """Trigonometric polynomials of degree <= ``degree_cap`` under pointwise
    operations, modelling smooth functions on the circle.

    The payload stores Fourier coefficients for frequencies -cap..cap.
    Products are convolutions projected back to the cap (exact whenever the
    factor degrees sum to at most the cap).  The level-n seminorm is

        |f|_n = 2^n * max_{j <= n} sup_grid |f^(j)|

    with derivatives computed spectrally and suprema estimated on a uniform
    grid of at least 8x the degree cap.  The 2^n weights strengthen the plain
    derivative sup-norms just enough that |fg|_n <= |f|_{n+1} |g|_{n+1} holds
    (Leibniz gives a 2^n factor per level, absorbed by the weight growth).
    """

    def __init__(
        self,
        degree_cap: int,
        levels: int = 6,
        *,
        grid_factor: int = 8,
        instance_id: str | None = None,
    ):
        if degree_cap < 1:
            raise ValueError("degree cap must be >= 1")
        self.degree_cap = degree_cap
        self.shape = (2 * degree_cap + 1,)
        self.instance_id = instance_id or f"circle{degree_cap}"
        self.grid_size = max(grid_factor * degree_cap, 64)
        self._freqs = np.arange(-degree_cap, degree_cap + 1)
        theta = 2.0 * np.pi * np.arange(self.grid_size) / self.grid_size
        self.theta_grid = theta
        self._emat = np.exp(1j * np.outer(theta, self._freqs))
        self.seminorms = SeminormFamily(levels, self._seminorm)

    def values(self, x: np.ndarray, order: int = 0) -> np.ndarray:
        """Grid values of the order-th derivative (spectral, exact)."""
        c = x if order == 0 else x * (1j * self._freqs) ** order
        return self._emat @ c

    def _project(self, values: np.ndarray) -> np.ndarray:
        # exact inverse of `values` for degree <= cap since grid_size > 2*cap
        return (self._emat.conj().T @ values) / self.grid_size

    def _seminorm(self, n, x):
        m = 0.0
        for j in range(n + 1):
            m = max(m, float(np.max(np.abs(self.values(x, j)))))
        return (2.0**n) * m

    def mul_payload(self, x, y):
        full = np.convolve(x, y)
        cap = self.degree_cap
        return full[cap : 3 * cap + 1]

    def star_payload(self, x):
        return np.conj(x[::-1])

    def quasi_inverse_payload(self, x):
        v = self.values(x)
        if np.min(np.abs(1.0 + v)) < 1e-12:
            raise NotQuasiInvertibleError("1 + f vanishes on the circle")
        return self._project(-v / (1.0 + v))

    def apply_selfadjoint(self, fn, x):
        v = self.values(x).real
        return self._project(fn(v).astype(complex))

    def random_element(self, rng, scale=1.0, degree: int | None = None):
        deg = min(degree if degree is not None else max(1, self.degree_cap // 4),
                  self.degree_cap)
        c = np.zeros(self.shape, dtype=complex)
        cap = self.degree_cap
        for m in range(-deg, deg + 1):
            decay = 2.0 ** (-abs(m))
            c[m + cap] = decay * (rng.standard_normal() + 1j * rng.standard_normal())
        e = self._wrap(c)
        sup = e.seminorm(0)
        if sup > 0:
            e = (scale * rng.uniform(0.5, 1.0) / sup) * e
        return e

    def random_selfadjoint(self, rng, scale=1.0):
        a = self.random_element(rng, scale)
        h = 0.5 * (a + a.star())
        sup = h.seminorm(0)
        if sup > 0:
            h = (scale / sup) * h
        return h


class PathAlgebra(Algebra):
    """Paths [0,1] -> inner algebra sampled on a uniform grid, with pointwise
    operations and supremum seminorms (one level per inner level)."""

    def __init__(self, inner: Algebra, grid_size: int, *, instance_id: str | None = None):
        if grid_size < 2:
            raise ValueError("path grid needs at least the two endpoints")
        self.inner = inner
        self.grid_size = grid_size
        self.p_values = np.linspace(0.0, 1.0, grid_size)
        self.shape = (grid_size, *inner.shape)
        self.instance_id = instance_id or f"path{grid_size}({inner.instance_id})"
        self.spectral_level = inner.spectral_level
        self.seminorms = SeminormFamily(inner.seminorms.count, self._seminorm)

    def _seminorm(self, n, x):
        return max(self.inner._seminorm(n, x[i]) for i in range(self.grid_size))

    def mul_payload(self, x, y):
        return np.stack(
            [self.inner.mul_payload(x[i], y[i]) for i in range(self.grid_size)]
        )

    def star_payload(self, x):
        return np.stack([self.inner.star_payload(x[i]) for i in range(self.grid_size)])

    def quasi_inverse_payload(self, x):
        return np.stack(
            [self.inner.quasi_inverse_payload(x[i]) for i in range(self.grid_size)]
        )

    def apply_selfadjoint(self, fn, x):
        return np.stack(
            [self.inner.apply_selfadjoint(fn, x[i]) for i in range(self.grid_size)]
        )

    def random_element(self, rng, scale=1.0):
        # linear interpolation between two inner samples keeps paths continuous
        a = self.inner.random_element(rng, scale).payload
        b = self.inner.random_element(rng, scale).payload
        ps = self.p_values.reshape((-1,) + (1,) * a.ndim)
        return self._wrap((1.0 - ps) * a + ps * b)

    def point(self, e: Element, index: int) -> Element:
        """Inner-algebra element at one grid point of the path."""
        if e.algebra is not self:
            raise OwnerMismatchError("path point of a foreign element")
        return self.inner._wrap(np.array(e.payload[index]))

    def from_points(self, points: Sequence[Element]) -> Element:
        if len(points) != self.grid_size:
            raise ValueError("need one inner element per path grid point")
        for p in points:
            if p.algebra is not self.inner:
                raise OwnerMismatchError("path point from a foreign algebra")
        return self._wrap(np.stack([p.payload for p in points]))


# constructors ------------------------------------------------------------


def matrix_algebra(
    size: int, levels: int = 6, *, tracial_level0: bool = False,
    instance_id: str | None = None,
) -> MatrixAlgebra:
    return MatrixAlgebra(
        size, levels, tracial_level0=tracial_level0, instance_id=instance_id
    )


def smooth_circle_algebra(
    degree_cap: int, levels: int = 6, *, grid_factor: int = 8,
    instance_id: str | None = None,
) -> SmoothCircleAlgebra:
    return SmoothCircleAlgebra(
        degree_cap, levels, grid_factor=grid_factor, instance_id=instance_id
    )


def path_algebra(
    inner: Algebra, grid_size: int, *, instance_id: str | None = None
) -> PathAlgebra:
    return PathAlgebra(inner, grid_size, instance_id=instance_id)


# quasi-group operations ---------------------------------------------------


def quasi_product(a: Element, b: Element) -> Element:
    """a . b = a + b + ab, the group operation with identity 0."""
    _check_owner(a, b)
    alg = a.algebra
    return alg._wrap(a.payload + b.payload + alg.mul_payload(a.payload, b.payload))


def quasi_inverse(a: Element) -> Element:
    """The two-sided inverse of a for the quasi-product.

    Exists iff 1 + a is invertible in the unitisation; raises
    :class:`NotQuasiInvertibleError` otherwise.
    """
    return a.algebra._wrap(a.algebra.quasi_inverse_payload(a.payload))


def quasi_inverse_neumann(a: Element, terms: int = 64) -> Element:
    """Series cross-check sum_{k>=1} (-a)^k; requires |a|_top < 1."""
    r = a.top_norm()
    if r >= 1.0:
        raise NotQuasiInvertibleError(f"series diverges at |a|_top = {r}")
    acc = a.algebra.zero()
    power = a
    sign = -1.0
    for _ in range(terms):
        acc = acc + sign * power
        power = power * a
        sign = -sign
    return acc


class QuasiUnitaryResult(NamedTuple):
    ok: bool
    defect: float


def is_quasi_unitary(u: Element, tol: float = 1e-9) -> QuasiUnitaryResult:
    """Check u . u* = u* . u = 0; the defect is the larger top seminorm.

    Levels are non-decreasing, so the top level dominates the whole ladder.
    """
    us = u.star()
    defect = max(quasi_product(us, u).top_norm(), quasi_product(u, us).top_norm())
    return QuasiUnitaryResult(defect <= tol, defect)


def star_product_margin(b: Element, c: Element, n: int) -> float:
    """Margin (rhs - lhs) of the two-level bound

        |b*.b - c*.c|_n <= 2 |b-c|_{n+2} (1 + |b|_{n+2} + |b-c|_{n+2}),

    which follows from the seminorm contracts and must be non-negative.
    """
    _check_owner(b, c)
    count = b.algebra.seminorms.count
    if n > count - 3:
        raise LevelRangeError(f"level {n} needs level {n + 2} < {count}")
    lhs = (quasi_product(b.star(), b) - quasi_product(c.star(), c)).seminorm(n)
    diff = (b - c).seminorm(n + 2)
    rhs = 2.0 * diff * (1.0 + b.seminorm(n + 2) + diff)
    return rhs - lhs


def canonical_distance(a: Element, b: Element) -> float:
    """Translation-invariant metric sum_n 2^{-n} min(1, |a - b|_n)."""
    _check_owner(a, b)
    diff = a - b
    return sum(
        2.0**-n * min(1.0, diff.seminorm(n))
        for n in range(a.algebra.seminorms.count)
    )


# serialization ------------------------------------------------------------


def element_to_json(e: Element) -> dict:
    """{"algebra": id, "payload": nested [re, im] pairs}."""
    stacked = np.stack([e.payload.real, e.payload.imag], axis=-1)
    return {"algebra": e.algebra.instance_id, "payload": stacked.tolist()}


def element_from_json(algebra: Algebra, doc: dict) -> Element:
    if doc.get("algebra") != algebra.instance_id:
        raise OwnerMismatchError(
            f"serialized element of {doc.get('algebra')!r}, "
            f"expected {algebra.instance_id!r}"
        )
    arr = np.asarray(doc["payload"], dtype=float)
    payload = arr[..., 0] + 1j * arr[..., 1]
    return algebra.element(payload)
