"""Asymptotic families f_t: A -> B and their defect diagnostics.

A family is a continuous map f: A x [0, inf) -> B that is expected to behave
more and more like a *-homomorphism as t grows.  The diagnostics here sample
the failure of each morphism condition on a finite grid:

* star defect        |f_t(a)* - f_t(a*)|_n
* scalar defect      |l f_t(a) - f_t(l a)|_n
* additive defect    |f_t(a) + f_t(a') - f_t(a + a')|_n
* product defect     |f_t(a) f_t(a') - f_t(a a')|_n
* boundedness        sup_t |f_t(a)|_n per level
* continuity modulus (eta, P) with d(x, x') < eta  =>  d(f_t x, f_t x') < eps
  for sampled t >= P.

Limits are not machine-checkable, so "defect -> 0" is reported as decay
evidence: the last-quarter maximum of each sampled defect curve must drop
below the tolerance or below the first-quarter maximum.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra import (
    Algebra,
    Element,
    MatrixAlgebra,
    PathAlgebra,
    QuasikitError,
    SmoothCircleAlgebra,
    canonical_distance,
    matrix_algebra,
    path_algebra,
)


DEFAULT_SCALARS: tuple[complex, ...] = (0.0, 1.0, 1.0j, 0.7 - 0.3j)


@dataclass(frozen=True, eq=False)
class AsymptoticFamily:
    """Evaluable family f_t: domain -> codomain with t in [0, inf)."""

    family_id: str
    domain: Algebra
    codomain: Algebra
    eval_fn: Callable[[Element, float], Element]
    continuous: bool = True

    def __call__(self, a: Element, t: float) -> Element:
        if a.algebra is not self.domain:
            raise QuasikitError(
                f"family {self.family_id!r} expects elements of "
                f"{self.domain.instance_id!r}"
            )
        if t < 0:
            raise ValueError("family parameter t must be >= 0")
        out = self.eval_fn(a, float(t))
        if out.algebra is not self.codomain:
            raise QuasikitError(f"family {self.family_id!r} left its codomain")
        return out


@dataclass(frozen=True)
class SamplingGrid:
    """Finite stand-in for "for all t": sample points, elements and levels."""

    t_values: tuple[float, ...]
    test_elements: tuple[Element, ...]
    seminorm_levels: tuple[int, ...]
    scalars: tuple[complex, ...] = DEFAULT_SCALARS

    def __post_init__(self):
        ts = tuple(float(t) for t in self.t_values)
        if not ts:
            raise ValueError("t grid must be non-empty")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("t grid must be strictly increasing")
        object.__setattr__(self, "t_values", ts)
        object.__setattr__(self, "test_elements", tuple(self.test_elements))
        object.__setattr__(self, "seminorm_levels", tuple(self.seminorm_levels))
        object.__setattr__(self, "scalars", tuple(complex(s) for s in self.scalars))


def uniform_grid(start: float, stop: float, num: int) -> tuple[float, ...]:
    return tuple(float(t) for t in np.linspace(start, stop, num))


@dataclass(frozen=True)
class Tolerances:
    """Default numeric gates: exact identities at 1e-12, derived at 1e-9."""

    identity: float = 1e-12
    defect: float = 1e-9
    quasi_unitary: float = 1e-9


# pointwise defects ---------------------------------------------------------


def defect_star(F: AsymptoticFamily, a: Element, t: float, n: int) -> float:
    return (F(a, t).star() - F(a.star(), t)).seminorm(n)


def defect_scalar(
    F: AsymptoticFamily, a: Element, lam: complex, t: float, n: int
) -> float:
    return (lam * F(a, t) - F(lam * a, t)).seminorm(n)


def defect_add(
    F: AsymptoticFamily, a: Element, a2: Element, t: float, n: int
) -> float:
    return (F(a, t) + F(a2, t) - F(a + a2, t)).seminorm(n)


def defect_mul(
    F: AsymptoticFamily, a: Element, a2: Element, t: float, n: int
) -> float:
    return (F(a, t) * F(a2, t) - F(a * a2, t)).seminorm(n)


def boundedness_profile(
    F: AsymptoticFamily, a: Element, grid: SamplingGrid
) -> dict[int, float]:
    """Per-level suprema of |f_t(a)|_n over the sampled t."""
    sup = {n: 0.0 for n in grid.seminorm_levels}
    for t in grid.t_values:
        img = F(a, t)
        for n in grid.seminorm_levels:
            sup[n] = max(sup[n], img.seminorm(n))
    return sup


# continuity moduli ---------------------------------------------------------


@dataclass(frozen=True)
class ModulusEntry:
    element_id: str
    epsilon: float
    eta: float
    start_time: float
    found: bool
    probes: int


@dataclass
class ModulusTable:
    entries: list[ModulusEntry] = field(default_factory=list)
    joint_deltas: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "entries": [e.__dict__ for e in self.entries],
            "joint_deltas": list(self.joint_deltas),
        }


def perturb_to_distance(
    x: Element, direction: Element, target: float, iters: int = 48
) -> Element:
    """Scale a direction so the canonical distance from x is just under
    target; the distance is non-decreasing in the scale, so bisect."""
    lo, hi = 0.0, 1.0
    while canonical_distance(x, x + hi * direction) < target and hi < 1e6:
        hi *= 2.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if canonical_distance(x, x + mid * direction) < target:
            lo = mid
        else:
            hi = mid
    return x + lo * direction


def asymptotic_continuity_modulus(
    F: AsymptoticFamily,
    x: Element,
    epsilon: float,
    grid: SamplingGrid,
    rng: np.random.Generator,
    *,
    element_id: str = "x",
    probe_count: int = 4,
    ladder: int = 10,
) -> ModulusEntry:
    """Search (eta, P) with d(x,x') < eta => d(F_t x, F_t x') < eps for all
    sampled t >= P.

    Candidates walk the ladder eta = eps * 2^{-k} against increasing P drawn
    from the t grid; the first success wins, which makes the search
    deterministic for a fixed generator state.  Probes are random directions
    rescaled to sit just inside eta.
    """
    directions = [
        F.domain.random_element(rng, scale=1.0) for _ in range(probe_count)
    ]
    for k in range(ladder):
        eta = epsilon * 2.0**-k
        probes = [
            perturb_to_distance(x, d, eta * frac)
            for d in directions
            for frac in (0.9, 0.4)
        ]
        for P in grid.t_values:
            ok = True
            for t in grid.t_values:
                if t < P:
                    continue
                fx = F(x, t)
                if any(
                    canonical_distance(fx, F(p, t)) >= epsilon for p in probes
                ):
                    ok = False
                    break
            if ok:
                return ModulusEntry(
                    element_id, epsilon, eta, P, True, len(probes)
                )
    return ModulusEntry(element_id, epsilon, 0.0, 0.0, False, 2 * probe_count)


def joint_modulus_delta(
    F: AsymptoticFamily,
    x: Element,
    epsilon: float,
    q: float,
    grid: SamplingGrid,
    rng: np.random.Generator,
    *,
    eta: float,
    ladder: int = 6,
) -> dict:
    """Half-width delta in t around q such that |t - q| < delta together
    with d(x, x') < eta forces d(F_q x, F_t x') < eps on probes."""
    directions = [F.domain.random_element(rng, scale=1.0) for _ in range(3)]
    probes = [perturb_to_distance(x, d, eta * 0.9) for d in directions]
    fq = F(x, q)
    for k in range(ladder):
        delta = 2.0**-k
        offsets = (-delta * 0.9, -delta * 0.5, delta * 0.5, delta * 0.9)
        ok = True
        for off in offsets:
            t = max(0.0, q + off)
            if any(canonical_distance(fq, F(p, t)) >= epsilon for p in probes):
                ok = False
                break
        if ok:
            return {"q": q, "epsilon": epsilon, "eta": eta, "delta": delta,
                    "found": True}
    return {"q": q, "epsilon": epsilon, "eta": eta, "delta": 0.0, "found": False}


# aggregated report ----------------------------------------------------------


CSV_COLUMNS = (
    "family_id",
    "element_id",
    "t",
    "level",
    "defect_star",
    "defect_scalar",
    "defect_add",
    "defect_mul",
    "bound",
)


@dataclass
class DefectRow:
    family_id: str
    element_id: str
    t: float
    level: int
    defect_star: float
    defect_scalar: float
    defect_add: float
    defect_mul: float
    bound: float


@dataclass
class DefectReport:
    family_id: str
    rows: list[DefectRow]
    summary: dict

    @property
    def passed(self) -> bool:
        return bool(self.summary.get("pass", False))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in self.rows:
                writer.writerow(
                    [
                        r.family_id,
                        r.element_id,
                        repr(r.t),
                        r.level,
                        repr(r.defect_star),
                        repr(r.defect_scalar),
                        repr(r.defect_add),
                        repr(r.defect_mul),
                        repr(r.bound),
                    ]
                )

    def to_json(self) -> dict:
        return {"schema_version": 1, "family_id": self.family_id,
                "summary": self.summary}


def _quarter_split(values: Sequence[float]) -> tuple[float, float]:
    n = len(values)
    q = max(1, n // 4)
    return max(values[:q]), max(values[n - q:])


def check_morphism(
    F: AsymptoticFamily,
    grid: SamplingGrid,
    tolerances: Tolerances | None = None,
    *,
    rng: np.random.Generator | None = None,
    modulus_epsilon: float | None = 0.1,
    jobs: int = 1,
) -> DefectReport:
    """Sample every morphism condition of F on the grid and aggregate.

    Binary defects pair each test element with its cyclic successor; the
    scalar defect is the worst case over the grid's scalar set.  The summary
    carries head/tail maxima of each defect curve, a decay verdict per kind,
    the per-level boundedness suprema, the image of 0 and (optionally)
    continuity-modulus estimates.
    """
    tol = tolerances or Tolerances()
    elements = list(grid.test_elements)
    if not elements:
        rows: list[DefectRow] = []
        summary = {
            "pass": True, "empty": True, "decay_ok": {}, "tail_defects": {},
            "head_defects": {}, "bound_max": {}, "zero_image_max": 0.0,
        }
        return DefectReport(F.family_id, rows, summary)

    partners = elements[1:] + elements[:1]

    def rows_for(idx_a_t):
        idx, a, t = idx_a_t
        a2 = partners[idx]
        fa = F(a, t)
        star_el = fa.star() - F(a.star(), t)
        add_el = fa + F(a2, t) - F(a + a2, t)
        mul_el = fa * F(a2, t) - F(a * a2, t)
        scal_els = [lam * fa - F(lam * a, t) for lam in grid.scalars]
        out = []
        for n in grid.seminorm_levels:
            out.append(
                DefectRow(
                    F.family_id,
                    f"e{idx}",
                    t,
                    n,
                    star_el.seminorm(n),
                    max(s.seminorm(n) for s in scal_els) if scal_els else 0.0,
                    add_el.seminorm(n),
                    mul_el.seminorm(n),
                    fa.seminorm(n),
                )
            )
        return out

    tasks = [(i, a, t) for i, a in enumerate(elements) for t in grid.t_values]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(rows_for, tasks))
    else:
        chunks = [rows_for(task) for task in tasks]
    rows = [r for chunk in chunks for r in chunk]

    kinds = ("star", "scalar", "add", "mul")
    head, tail, decay_ok = {}, {}, {}
    for kind in kinds:
        curve = []
        for t in grid.t_values:
            vals = [getattr(r, f"defect_{kind}") for r in rows if r.t == t]
            curve.append(max(vals))
        h, tl = _quarter_split(curve)
        head[kind], tail[kind] = h, tl
        decay_ok[kind] = tl <= tol.defect or tl < h

    bound_max = {
        int(n): max(r.bound for r in rows if r.level == n)
        for n in grid.seminorm_levels
    }
    bounded = all(np.isfinite(v) for v in bound_max.values())

    zero = F.domain.zero()
    zero_image_max = max(F(zero, t).top_norm() for t in grid.t_values)

    moduli = ModulusTable()
    if modulus_epsilon is not None and rng is not None and F.continuous:
        for i, a in enumerate(elements):
            moduli.entries.append(
                asymptotic_continuity_modulus(
                    F, a, modulus_epsilon, grid, rng, element_id=f"e{i}"
                )
            )

    summary = {
        "pass": bool(all(decay_ok.values()) and bounded),
        "decay_ok": decay_ok,
        "head_defects": head,
        "tail_defects": tail,
        "bound_max": bound_max,
        "bounded": bounded,
        "zero_image_max": zero_image_max,
        "moduli": moduli.to_json(),
        "evidence_caveat": "moduli and decay verdicts are sampled on finite "
        "grids and probe sets; they are evidence, not proof",
    }
    return DefectReport(F.family_id, rows, summary)


# built-in families ----------------------------------------------------------


def exact_hom(algebra: Algebra, *, family_id: str | None = None) -> AsymptoticFamily:
    """Identity embedding; every defect vanishes identically."""
    return AsymptoticFamily(
        family_id or f"exact({algebra.instance_id})",
        algebra,
        algebra,
        lambda a, t: a,
    )


def _ramp_weights(size: int, t: float, speed: float) -> np.ndarray:
    j = np.arange(1, size + 1, dtype=float)
    return np.clip(speed * t - j + 1.0, 0.0, 1.0)


def compression_family(
    algebra_or_size: Algebra | int,
    speed: float = 1.0,
    *,
    levels: int = 6,
    family_id: str | None = None,
) -> AsymptoticFamily:
    """f_t(a) = D_t a D_t with diagonal ramp weights clamp(speed*t - j + 1).

    The weights reach 1 on row j at t = j / speed, so the family is exactly
    the identity once speed*t >= size, and |D_t| <= 1 makes it metrically
    contractive at every t.
    """
    alg = (
        algebra_or_size
        if isinstance(algebra_or_size, Algebra)
        else matrix_algebra(int(algebra_or_size), levels)
    )
    if not isinstance(alg, MatrixAlgebra):
        raise ValueError("compression families act on matrix algebras")
    size = alg.size

    def ev(a: Element, t: float) -> Element:
        w = _ramp_weights(size, t, speed)
        if np.all(w == 1.0):
            return a  # identity regime: keep payload bits untouched
        d = w[:, None] * w[None, :]
        return alg._wrap(d * a.payload)

    return AsymptoticFamily(
        family_id or f"compression{size}x{speed:g}", alg, alg, ev
    )


def perturbed_hom(
    algebra: Algebra, rate: float = 1.0, *, family_id: str | None = None
) -> AsymptoticFamily:
    """f_t(a) = a + exp(-rate t) a^2; defects decay at the rate of the
    exponential weight."""

    def ev(a: Element, t: float) -> Element:
        return a + float(np.exp(-rate * t)) * (a * a)

    return AsymptoticFamily(
        family_id or f"perturbed({algebra.instance_id},{rate:g})",
        algebra,
        algebra,
        ev,
    )


def toeplitz_family(
    circle: SmoothCircleAlgebra,
    order: int,
    *,
    levels: int = 6,
    family_id: str | None = None,
) -> AsymptoticFamily:
    """Corner-damped Toeplitz quantisation of circle functions.

    f_t maps a function to the order x order matrix of its Fourier
    coefficients T[j, k] = c(j - k), conjugated by the ramp D_t so the
    matrix grows continuously with t and equals the full Toeplitz matrix for
    t >= order.  The codomain carries the normalised trace norm at level 0,
    where the product defect of band symbols shrinks as 1/order.
    """
    codomain = matrix_algebra(order, levels, tracial_level0=True,
                              instance_id=f"M{order}toeplitz")
    cap = circle.degree_cap
    offsets = np.subtract.outer(np.arange(order), np.arange(order))

    def ev(a: Element, t: float) -> Element:
        coeffs = np.zeros(2 * order + 1, dtype=complex)
        lo = max(-cap, -(order - 1))
        hi = min(cap, order - 1)
        coeffs[lo + order : hi + order + 1] = a.payload[lo + cap : hi + cap + 1]
        full = coeffs[offsets + order]
        w = _ramp_weights(order, t, 1.0)
        if np.all(w == 1.0):
            return codomain._wrap(full)
        return codomain._wrap((w[:, None] * w[None, :]) * full)

    return AsymptoticFamily(
        family_id or f"toeplitz{order}", circle, codomain, ev
    )


def homotopy_family(
    F: AsymptoticFamily,
    G: AsymptoticFamily,
    blend: Callable[[float], float] | None = None,
    *,
    grid_size: int = 11,
    family_id: str | None = None,
) -> AsymptoticFamily:
    """Path-valued family h_t(a)(p) interpolating F at p=0 and G at p=1.

    Endpoint payloads are taken verbatim from F and G so the p=0 and p=1
    slices reproduce them bit for bit.
    """
    if F.domain is not G.domain or F.codomain is not G.codomain:
        raise QuasikitError("homotopy endpoints must share domain and codomain")
    codomain = path_algebra(F.codomain, grid_size)
    weight = blend or (lambda p: p)

    def ev(a: Element, t: float) -> Element:
        xf = F(a, t).payload
        xg = G(a, t).payload
        slices = []
        for p in codomain.p_values:
            if p == 0.0:
                slices.append(xf)
            elif p == 1.0:
                slices.append(xg)
            else:
                w = float(weight(float(p)))
                slices.append((1.0 - w) * xf + w * xg)
        return codomain._wrap(np.stack(slices))

    return AsymptoticFamily(
        family_id or f"blend({F.family_id},{G.family_id})",
        F.domain,
        codomain,
        ev,
    )
