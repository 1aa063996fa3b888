"""Quasi-unitary nets, threshold functions and homotopy-class representatives.

For a family f_t: A -> B and a quasi-unitary u, the products f_t(u) . f_t(u)*
and f_t(u)* . f_t(u) eventually enter the inverse-square-root domain of B.
Scanning the sampled t axis for the first stable entry time T(u) over a
finite net of quasi-unitaries, and interpolating those thresholds, yields a
threshold function alpha.  The representative

    retract(v) = f_{alpha(v)}(v) . inv_sqrt(f_{alpha(v)}(v)* . f_{alpha(v)}(v))

is then quasi-unitary valued, and sliding between two threshold functions
gives explicit connecting paths whose quasi-unitary defect can be swept.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    Algebra,
    Element,
    MatrixAlgebra,
    PathAlgebra,
    QuasikitError,
    canonical_distance,
    is_quasi_unitary,
    quasi_product,
)
from .families import AsymptoticFamily, SamplingGrid, Tolerances
from .funcalc import DomainError, SqrtDomain, in_domain, inv_sqrt, quasi_polar


class ThresholdNotFoundError(QuasikitError):
    """No sampled time from which the scanned memberships hold onwards."""


class RetractionDomainError(QuasikitError):
    """Retraction attempted below the admissible threshold; the threshold
    function is insufficient or the horizon too small."""


class HomotopyEndpointError(QuasikitError):
    """A path-valued family does not reproduce the claimed endpoints."""


@dataclass(frozen=True)
class QuasiUnitaryNet:
    """Finite net of quasi-unitaries with its pairwise-distance matrix."""

    points: tuple[Element, ...]
    point_ids: tuple[str, ...]
    tolerance: float
    distances: np.ndarray

    def __len__(self) -> int:
        return len(self.points)

    def covering_radius(self) -> float:
        if len(self.points) < 2:
            return 0.0
        d = self.distances + np.diag([np.inf] * len(self.points))
        return float(np.max(np.min(d, axis=1)))

    def to_json(self) -> dict:
        return {
            "point_ids": list(self.point_ids),
            "tolerance": self.tolerance,
            "defects": [is_quasi_unitary(p).defect for p in self.points],
        }


def quasi_unitary_net(
    points, tolerance: float = 1e-9, ids=None
) -> QuasiUnitaryNet:
    points = tuple(points)
    if not points:
        raise ValueError("a net needs at least one point")
    for p in points:
        check = is_quasi_unitary(p, tolerance)
        if not check.ok:
            raise ValueError(
                f"net point has quasi-unitary defect {check.defect:.3e} "
                f"above tolerance {tolerance:.3e}"
            )
    ids = tuple(ids) if ids else tuple(f"u{i}" for i in range(len(points)))
    n = len(points)
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            dist[i, j] = dist[j, i] = canonical_distance(points[i], points[j])
    return QuasiUnitaryNet(points, ids, tolerance, dist)


def random_quasi_unitary_net(
    algebra: MatrixAlgebra,
    size: int,
    rng: np.random.Generator,
    *,
    support: int | None = None,
    perturbation: float = 0.0,
    tolerance: float = 1e-9,
) -> QuasiUnitaryNet:
    """Net points u = W - 1 for random unitaries W, optionally supported in
    the leading block and/or re-retracted after a small perturbation."""
    if not isinstance(algebra, MatrixAlgebra):
        raise ValueError("random nets are generated on matrix algebras")
    k = algebra.size
    block = support or k
    if not 1 <= block <= k:
        raise ValueError("support block must fit inside the matrix size")
    dom = SqrtDomain(algebra)
    points = []
    for _ in range(size):
        w = MatrixAlgebra(block).random_unitary_payload(rng)
        payload = np.zeros((k, k), dtype=complex)
        payload[:block, :block] = w - np.eye(block)
        u = algebra._wrap(payload)
        if perturbation > 0.0:
            u = quasi_polar(u + algebra.random_element(rng, perturbation), dom)
        points.append(u)
    return quasi_unitary_net(points, tolerance)


@dataclass(frozen=True)
class ThresholdFunction:
    """Per-point thresholds extended to nearby elements.

    Evaluation takes the nearest net point and maxes its stored value with
    every neighbour within ``radius``; any v within the smoothing radius of a
    net point u therefore gets a value >= the threshold stored at u.
    ``scan_values`` keeps the raw scan results before the safety margin.
    """

    net: QuasiUnitaryNet
    values: tuple[float, ...]
    radius: float
    scan_values: tuple[float, ...] | None = None

    def __post_init__(self):
        if len(self.values) != len(self.net):
            raise ValueError("one threshold value per net point")

    def __call__(self, v: Element) -> float:
        d = np.array([canonical_distance(v, u) for u in self.net.points])
        nearest = int(np.argmin(d))
        picks = {nearest} | {i for i in range(len(d)) if d[i] <= self.radius}
        return max(self.values[i] for i in picks)

    def pointwise_max(self, other: "ThresholdFunction") -> "ThresholdFunction":
        if other.net is not self.net:
            raise ValueError("threshold functions live on different nets")
        return ThresholdFunction(
            self.net,
            tuple(max(a, b) for a, b in zip(self.values, other.values)),
            max(self.radius, other.radius),
        )

    def to_json(self) -> dict:
        scans = self.scan_values or self.values
        return {
            "radius": self.radius,
            "points": [
                {"point": pid, "T": raw, "margin": val - raw}
                for pid, val, raw in zip(self.net.point_ids, self.values, scans)
            ],
        }


def _membership(F: AsymptoticFamily, u: Element, t: float, dom: SqrtDomain) -> bool:
    b = F(u, t)
    return in_domain(quasi_product(b, b.star()), dom) and in_domain(
        quasi_product(b.star(), b), dom
    )


def scan_threshold(
    F: AsymptoticFamily, u: Element, dom: SqrtDomain, t_values
) -> float:
    """Smallest sampled t0 such that f_t(u) . f_t(u)* and f_t(u)* . f_t(u)
    lie in the domain for every sampled t >= t0."""
    if dom.algebra is not F.codomain:
        raise ValueError("domain must live in the family codomain")
    ok = [_membership(F, u, t, dom) for t in t_values]
    idx = None
    for i in range(len(ok) - 1, -1, -1):
        if not ok[i]:
            break
        idx = i
    if idx is None:
        raise ThresholdNotFoundError(
            f"memberships for {F.family_id!r} never stabilise within the horizon"
        )
    return float(t_values[idx])


def build_threshold_function(
    F: AsymptoticFamily,
    net: QuasiUnitaryNet,
    dom: SqrtDomain,
    t_values,
    *,
    radius: float | None = None,
) -> ThresholdFunction:
    """Scan each net point and store its threshold plus one grid step of
    safety margin (memberships hold for all larger sampled t, and the margin
    absorbs interpolation between net points)."""
    ts = [float(t) for t in t_values]
    horizon = ts[-1]
    values = []
    scans = []
    for u in net.points:
        t0 = scan_threshold(F, u, dom, ts)
        i = ts.index(t0)
        scans.append(t0)
        values.append(ts[i + 1] if i + 1 < len(ts) else horizon)
    return ThresholdFunction(
        net,
        tuple(values),
        net.covering_radius() if radius is None else radius,
        tuple(scans),
    )


def retract_at(
    F: AsymptoticFamily, v: Element, t: float, dom: SqrtDomain
) -> Element:
    """Quasi-unitary retraction of f_t(v); raises if the memberships fail."""
    b = F(v, t)
    right = quasi_product(b.star(), b)
    left = quasi_product(b, b.star())
    if not (in_domain(right, dom) and in_domain(left, dom)):
        raise RetractionDomainError(
            f"retraction of {F.family_id!r} at t={t:g} leaves the domain; "
            "threshold function insufficient or horizon too small"
        )
    return quasi_product(b, inv_sqrt(right, dom))


def retract_representative(
    F: AsymptoticFamily,
    threshold: ThresholdFunction,
    v: Element,
    dom: SqrtDomain,
) -> Element:
    """Representative value at v, evaluated at the interpolated threshold."""
    return retract_at(F, v, threshold(v), dom)


def retraction_homotopy(
    F: AsymptoticFamily,
    low: ThresholdFunction,
    high: ThresholdFunction,
    v: Element,
    p: float,
    dom: SqrtDomain,
) -> Element:
    """Path value at p of the retraction slide between two threshold
    functions: time p*low(v) + (1-p)*high(v), so p=1 is the lower one."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("path parameter p must be in [0, 1]")
    t = p * low(v) + (1.0 - p) * high(v)
    return retract_at(F, v, t, dom)


def homotopy_sweep(
    F: AsymptoticFamily,
    low: ThresholdFunction,
    high: ThresholdFunction,
    net: QuasiUnitaryNet,
    p_values,
    dom: SqrtDomain,
) -> list[dict]:
    """Defect rows (v_id, p, defect) for the retraction slide over the net.

    Requires high >= low pointwise on the net so every intermediate time
    stays above the scanned thresholds.
    """
    bad = [
        pid
        for pid, lo, hi in zip(net.point_ids, low.values, high.values)
        if hi < lo
    ]
    if bad:
        raise ValueError(f"upper threshold below lower at net points {bad}")
    rows = []
    for pid, v in zip(net.point_ids, net.points):
        for p in p_values:
            try:
                val = retraction_homotopy(F, low, high, v, float(p), dom)
                defect = is_quasi_unitary(val).defect
                rows.append({"v_id": pid, "p": float(p), "defect": defect,
                             "break": False})
            except DomainError:
                rows.append({"v_id": pid, "p": float(p), "defect": np.inf,
                             "break": True})
    return rows


@dataclass
class PathHomotopyReport:
    family_id: str
    endpoints_exact: bool
    interior_max_defect: float
    endpoint_max_defect: float
    connects: bool
    rows: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.endpoints_exact and self.connects

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "family_id": self.family_id,
            "endpoints_exact": self.endpoints_exact,
            "interior_max_defect": self.interior_max_defect,
            "endpoint_max_defect": self.endpoint_max_defect,
            "pass": self.passed,
        }


def path_homotopy_check(
    h: AsymptoticFamily,
    F: AsymptoticFamily,
    G: AsymptoticFamily,
    net: QuasiUnitaryNet,
    grid: SamplingGrid,
    *,
    tolerances: Tolerances | None = None,
) -> PathHomotopyReport:
    """Verify that a path-valued family h connecting F and G induces a
    quasi-unitary path between their representatives.

    The p=0 / p=1 slices of h must reproduce F and G bit for bit on the
    sampled grid (a failing slice raises).  A shared threshold function
    eta = max(alpha_F, alpha_G, alpha_h) is built from the three scans; the
    induced path is the retraction of h at eta, evaluated slice by slice, so
    its endpoints follow the exact same code path as the standalone
    representatives of F and G.
    """
    tol = tolerances or Tolerances()
    codomain = h.codomain
    if not isinstance(codomain, PathAlgebra) or codomain.inner is not F.codomain:
        raise QuasikitError("h must take values in paths over the codomain of F")
    if F.codomain is not G.codomain or F.domain is not G.domain:
        raise QuasikitError("F and G must share domain and codomain")

    for a in list(grid.test_elements) + list(net.points):
        for t in grid.t_values:
            x = h(a, t)
            if not codomain.point(x, 0).bit_equal(F(a, t)):
                raise HomotopyEndpointError("h(., .)(0) does not reproduce F")
            if not codomain.point(x, codomain.grid_size - 1).bit_equal(G(a, t)):
                raise HomotopyEndpointError("h(., .)(1) does not reproduce G")

    dom_inner = SqrtDomain(F.codomain)
    dom_path = SqrtDomain(codomain)
    alpha = build_threshold_function(F, net, dom_inner, grid.t_values)
    beta = build_threshold_function(G, net, dom_inner, grid.t_values)
    gamma = build_threshold_function(h, net, dom_path, grid.t_values)
    eta = alpha.pointwise_max(beta).pointwise_max(gamma)

    rows = []
    interior = 0.0
    endmax = 0.0
    connects = True
    for pid, v in zip(net.point_ids, net.points):
        path_val = retract_at(h, v, eta(v), dom_path)
        f_rep = retract_at(F, v, eta(v), dom_inner)
        g_rep = retract_at(G, v, eta(v), dom_inner)
        for i, p in enumerate(codomain.p_values):
            slice_el = codomain.point(path_val, i)
            defect = is_quasi_unitary(slice_el).defect
            rows.append({"v_id": pid, "p": float(p), "defect": defect})
            if i in (0, codomain.grid_size - 1):
                endmax = max(endmax, defect)
            else:
                interior = max(interior, defect)
        if not codomain.point(path_val, 0).bit_equal(f_rep):
            connects = False
        if not codomain.point(path_val, codomain.grid_size - 1).bit_equal(g_rep):
            connects = False
    ok = interior <= 10.0 * tol.quasi_unitary and endmax <= tol.quasi_unitary
    return PathHomotopyReport(
        h.family_id, True, interior, endmax, connects and ok, rows
    )
