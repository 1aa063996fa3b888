"""Reparameterized composition of asymptotic families and functoriality.

Two families f: A -> B and g: B -> C compose through a non-decreasing time
change phi as (g o_phi f)_t(a) = g_{phi(t)}(f_t(a)).  The search for phi
scans, for each sampled t, the smallest s from which g's own defects on the
image elements f_t(a) stay below a tolerance and the composite values stay
bounded; joining those dots with straight lines (after a running maximum)
yields a piecewise-linear monotone phi.

The functoriality check drives three concatenated retraction homotopies that
connect the representative of the composite to the composition of the
representatives, verifying quasi-unitarity along the way, exact agreement at
the junctions and agreement with the standalone representatives at the ends.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra import (
    Element,
    LevelRangeError,
    QuasikitError,
    canonical_distance,
    is_quasi_unitary,
    quasi_product,
)
from .families import (
    AsymptoticFamily,
    SamplingGrid,
    Tolerances,
    check_morphism,
    perturb_to_distance,
)
from .funcalc import DomainError, SqrtDomain, in_domain, inv_sqrt
from .retract import (
    QuasiUnitaryNet,
    ThresholdFunction,
    build_threshold_function,
    retract_at,
)


class SearchFailedError(QuasikitError):
    """No admissible reparameterization value within the horizon."""


@dataclass(frozen=True)
class Reparameterization:
    """Piecewise-linear non-decreasing time change given by dots (t_i, s_i).

    Between dots the value is linear; left of the first dot it is constant;
    right of the last dot the final slope is extrapolated.
    """

    dots: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.dots:
            raise ValueError("a reparameterization needs at least one dot")
        ts = [d[0] for d in self.dots]
        ss = [d[1] for d in self.dots]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("dot abscissae must be strictly increasing")
        if any(b < a for a, b in zip(ss, ss[1:])):
            raise ValueError("dot ordinates must be non-decreasing")
        object.__setattr__(
            self, "dots", tuple((float(t), float(s)) for t, s in self.dots)
        )

    def __call__(self, t: float) -> float:
        ts = np.array([d[0] for d in self.dots])
        ss = np.array([d[1] for d in self.dots])
        t = float(t)
        if t <= ts[0]:
            return float(ss[0])
        if t >= ts[-1]:
            if len(ts) == 1:
                return float(ss[-1])
            slope = (ss[-1] - ss[-2]) / (ts[-1] - ts[-2])
            return float(ss[-1] + slope * (t - ts[-1]))
        return float(np.interp(t, ts, ss))

    def shifted(self, delta: float) -> "Reparameterization":
        return Reparameterization(tuple((t, s + delta) for t, s in self.dots))

    def to_json(self) -> dict:
        return {"dots": [[t, s] for t, s in self.dots]}


def reparam_from_constraints(constraints: Sequence[tuple[float, float]]) -> Reparameterization:
    """Join per-t minimal requirements into a monotone interpolant.

    A running maximum is applied first, so non-monotone constraints are
    dominated rather than violated.
    """
    if not constraints:
        raise ValueError("no constraints to join")
    ordered = sorted((float(t), float(s)) for t, s in constraints)
    dots = []
    running = -np.inf
    for t, s in ordered:
        running = max(running, s)
        dots.append((t, running))
    return Reparameterization(tuple(dots))


@dataclass(frozen=True, eq=False)
class CompositeFamily(AsymptoticFamily):
    """g o_phi f; an asymptotic family in its own right."""

    f: AsymptoticFamily = None
    g: AsymptoticFamily = None
    phi: Reparameterization = None


def compose_with(
    f: AsymptoticFamily, g: AsymptoticFamily, phi: Reparameterization
) -> CompositeFamily:
    if f.codomain is not g.domain:
        raise QuasikitError(
            f"codomain of {f.family_id!r} is not the domain of {g.family_id!r}"
        )
    return CompositeFamily(
        family_id=f"{g.family_id}o{f.family_id}",
        domain=f.domain,
        codomain=g.codomain,
        eval_fn=lambda a, t: g(f(a, t), phi(t)),
        f=f,
        g=g,
        phi=phi,
    )


# compatibility certificates --------------------------------------------------


@dataclass(frozen=True)
class EquicontinuityEntry:
    """Per (element, nu): a probe radius xi and per-t start times s such
    that d(f_t(a), b) < xi forces d(g_s f_t(a), g_s b) < nu from s onwards."""

    element_id: str
    nu: float
    xi: float
    q_start: float
    s_required: tuple[tuple[float, float], ...]
    found: bool


@dataclass(frozen=True)
class BoundednessEntry:
    """Per (element, level): bound M with |g_s(f_t(a))|_n <= M on the grid."""

    element_id: str
    level: int
    q_start: float
    bound: float
    s_required: tuple[tuple[float, float], ...]
    found: bool


@dataclass
class CompositionCertificate:
    equicontinuity: list[EquicontinuityEntry] = field(default_factory=list)
    boundedness: list[BoundednessEntry] = field(default_factory=list)

    def bound_for(self, element_id: str, level: int) -> float:
        for e in self.boundedness:
            if e.element_id == element_id and e.level == level:
                return e.bound
        raise KeyError((element_id, level))

    @property
    def all_found(self) -> bool:
        return all(e.found for e in self.equicontinuity) and all(
            e.found for e in self.boundedness
        )

    def to_json(self) -> dict:
        return {
            "equicontinuity": [
                {**e.__dict__, "s_required": [list(x) for x in e.s_required]}
                for e in self.equicontinuity
            ],
            "boundedness": [
                {**e.__dict__, "s_required": [list(x) for x in e.s_required]}
                for e in self.boundedness
            ],
        }


def check_image_equicontinuity(
    f: AsymptoticFamily,
    g: AsymptoticFamily,
    a: Element,
    nu: float,
    t_values,
    s_values,
    rng: np.random.Generator,
    *,
    element_id: str = "a",
    ladder: int = 8,
    probe_count: int = 3,
) -> EquicontinuityEntry:
    """Scan for the equicontinuity data of g along the image of a under f.

    Probe witnesses combine random perturbations of f_t(a) at radii just
    inside xi with images f_t(a') of nearby a', both of which occur in the
    downstream membership arguments.
    """
    ts = [float(t) for t in t_values]
    ss = [float(s) for s in s_values]
    dirs_b = [g.domain.random_element(rng, 1.0) for _ in range(probe_count)]
    dirs_a = [f.domain.random_element(rng, 1.0) for _ in range(probe_count)]
    for k in range(ladder):
        xi = nu * 2.0**-k
        s_req = []
        ok_all = True
        for t in ts:
            base = f(a, t)
            probes = [perturb_to_distance(base, d, xi * r)
                      for d in dirs_b for r in (0.5, 0.9)]
            for d in dirs_a:
                a2 = perturb_to_distance(a, d, xi * 0.5)
                img = f(a2, t)
                if canonical_distance(base, img) < xi:
                    probes.append(img)
            # worst probe spread of g at each sampled s, then take the first
            # index from which every later spread stays below nu
            spread = []
            for s in ss:
                gb = g(base, s)
                spread.append(
                    max(canonical_distance(gb, g(b, s)) for b in probes)
                )
            s_t = None
            tail_ok = [False] * len(ss)
            worst = 0.0
            for i in range(len(ss) - 1, -1, -1):
                worst = max(worst, spread[i])
                tail_ok[i] = worst < nu
            for i, s in enumerate(ss):
                if tail_ok[i]:
                    s_t = s
                    break
            if s_t is None:
                ok_all = False
                break
            s_req.append((t, s_t))
        if ok_all:
            return EquicontinuityEntry(
                element_id, nu, xi, ts[0], tuple(s_req), True
            )
    return EquicontinuityEntry(element_id, nu, 0.0, ts[0], (), False)


def check_composite_boundedness(
    f: AsymptoticFamily,
    g: AsymptoticFamily,
    a: Element,
    level: int,
    t_values,
    s_values,
    *,
    element_id: str = "a",
) -> BoundednessEntry:
    """Record the observed supremum of |g_s(f_t(a))|_level over the grid."""
    ts = [float(t) for t in t_values]
    ss = [float(s) for s in s_values]
    bound = 0.0
    s_req = []
    for t in ts:
        img = f(a, t)
        for s in ss:
            bound = max(bound, g(img, s).seminorm(level))
        s_req.append((t, ss[0]))
    return BoundednessEntry(element_id, level, ts[0], bound, tuple(s_req), True)


def certify_composition(
    f: AsymptoticFamily,
    g: AsymptoticFamily,
    test_elements,
    t_values,
    s_values,
    levels,
    rng: np.random.Generator,
    *,
    nu: float = 0.25,
) -> CompositionCertificate:
    cert = CompositionCertificate()
    for i, a in enumerate(test_elements):
        cert.equicontinuity.append(
            check_image_equicontinuity(
                f, g, a, nu, t_values, s_values, rng, element_id=f"e{i}"
            )
        )
        for n in levels:
            cert.boundedness.append(
                check_composite_boundedness(
                    f, g, a, n, t_values, s_values, element_id=f"e{i}"
                )
            )
    return cert


# reparameterization search ---------------------------------------------------


@dataclass
class ReparamSearchResult:
    phi: Reparameterization
    dots: tuple[tuple[float, float], ...]
    table: list[dict]

    def to_json(self) -> dict:
        return {"phi": self.phi.to_json(), "table": self.table}


def _g_image_defects(
    g: AsymptoticFamily,
    images: list[Element],
    s: float,
    levels,
    scalars,
) -> float:
    """Worst defect of g at time s over the image probe set."""
    worst = 0.0
    pairs = list(zip(images, images[1:] + images[:1]))
    for b, b2 in pairs:
        gb = g(b, s)
        star = gb.star() - g(b.star(), s)
        add = gb + g(b2, s) - g(b + b2, s)
        mul = gb * g(b2, s) - g(b * b2, s)
        scals = [lam * gb - g(lam * b, s) for lam in scalars]
        for n in levels:
            worst = max(
                worst,
                star.seminorm(n),
                add.seminorm(n),
                mul.seminorm(n),
                max((x.seminorm(n) for x in scals), default=0.0),
            )
    return worst


def search_reparam(
    f: AsymptoticFamily,
    g: AsymptoticFamily,
    grid: SamplingGrid,
    s_values,
    tol_schedule,
    *,
    certificate: CompositionCertificate | None = None,
    bound_headroom: float = 1.0,
) -> ReparamSearchResult:
    """Find, per sampled t, the minimal s from which g's defects on the
    image elements stay below the tolerance and the composite values stay
    below the certified bounds plus headroom; join the dots monotonically.

    ``tol_schedule`` is a constant or a callable of t.  Failure at any t
    raises :class:`SearchFailedError` with the witnessing values.
    """
    if f.codomain is not g.domain:
        raise QuasikitError("families do not chain")
    tol_fn = tol_schedule if callable(tol_schedule) else (lambda _t: float(tol_schedule))
    ts = list(grid.t_values)
    ss = [float(s) for s in s_values]
    elements = list(grid.test_elements)
    levels = list(grid.seminorm_levels)

    bounds = {}
    if certificate is not None:
        for i in range(len(elements)):
            for n in levels:
                bounds[(i, n)] = certificate.bound_for(f"e{i}", n)

    table = []
    dots = []
    for t in ts:
        tol_t = float(tol_fn(t))
        images = [f(a, t) for a in elements]
        worst_by_s = []
        for s in ss:
            worst = _g_image_defects(g, images, s, levels, grid.scalars)
            if bounds:
                for i, b in enumerate(images):
                    gb = g(b, s)
                    for n in levels:
                        if gb.seminorm(n) > bounds[(i, n)] + bound_headroom:
                            worst = np.inf
            worst_by_s.append(worst)
        chosen = None
        for i in range(len(ss)):
            if all(w <= tol_t for w in worst_by_s[i:]):
                chosen = ss[i]
                break
        if chosen is None:
            raise SearchFailedError(
                f"no admissible s at t={t:g}: best tail defect "
                f"{min(max(worst_by_s[i:]) for i in range(len(ss))):.3e} "
                f"above tolerance {tol_t:.3e}"
            )
        dots.append((t, chosen))
        table.append({"t": t, "s": chosen, "tolerance": tol_t})
    phi = reparam_from_constraints(dots)
    return ReparamSearchResult(phi, tuple(dots), table)


def reparam_blend_family(
    f: AsymptoticFamily,
    g: AsymptoticFamily,
    phi: Reparameterization,
    theta: Reparameterization,
    grid_size: int = 11,
) -> AsymptoticFamily:
    """Path-valued family h_t(a)(p) = g at time p*phi(t) + (1-p)*theta(t) of
    f_t(a); p=1 follows phi and p=0 follows theta, so the endpoints coincide
    with the two composites."""
    from .algebra import path_algebra

    codomain = path_algebra(g.codomain, grid_size)

    def ev(a: Element, t: float) -> Element:
        fa = f(a, t)
        pt, tt = phi(t), theta(t)
        slices = []
        for p in codomain.p_values:
            if p == 0.0:
                time = tt
            elif p == 1.0:
                time = pt
            else:
                time = float(p) * pt + (1.0 - float(p)) * tt
            slices.append(g(fa, time).payload)
        return codomain._wrap(np.stack(slices))

    return AsymptoticFamily(
        f"blend({g.family_id}o{f.family_id})", f.domain, codomain, ev
    )


def reparam_validity_evidence(
    f: AsymptoticFamily,
    g: AsymptoticFamily,
    phi: Reparameterization,
    grid: SamplingGrid,
    tolerances: Tolerances | None = None,
    *,
    step: float | None = None,
    path_grid: int = 11,
) -> dict:
    """Desk-scale evidence that phi is a valid reparameterization.

    The composite under phi and under a dominating shift theta = phi + step
    must both pass the morphism check, and the blend family between them
    must reproduce the two composites bit for bit at its endpoints.  Only a
    one-parameter family of dominations is tested; the full quantifier over
    all dominating time changes has no finite criterion.
    """
    delta = step if step is not None else max(
        1.0, (grid.t_values[-1] - grid.t_values[0]) / max(1, len(grid.t_values) - 1)
    )
    theta = phi.shifted(delta)
    comp_phi = compose_with(f, g, phi)
    comp_theta = compose_with(f, g, theta)
    rep_phi = check_morphism(comp_phi, grid, tolerances)
    rep_theta = check_morphism(comp_theta, grid, tolerances)
    blend = reparam_blend_family(f, g, phi, theta, path_grid)
    endpoints_ok = True
    for a in grid.test_elements:
        for t in grid.t_values:
            x = blend(a, t)
            pa = blend.codomain
            if not pa.point(x, 0).bit_equal(comp_theta(a, t)):
                endpoints_ok = False
            if not pa.point(x, pa.grid_size - 1).bit_equal(comp_phi(a, t)):
                endpoints_ok = False
    return {
        "composite_pass": rep_phi.passed,
        "dominated_pass": rep_theta.passed,
        "blend_endpoints_exact": endpoints_ok,
        "domination_step": delta,
        "pass": rep_phi.passed and rep_theta.passed and endpoints_ok,
    }


# seminorm inequality margins --------------------------------------------------


def _need_level(e: Element, n: int) -> None:
    if n + 1 >= e.algebra.seminorms.count:
        raise LevelRangeError(f"level {n} needs level {n + 1} exposed")


def star_difference_margin(u: Element, v: Element, n: int) -> float:
    """rhs - lhs of |u* - v*|_n <= |u - v|_{n+1}."""
    _need_level(u, n)
    return (u - v).seminorm(n + 1) - (u.star() - v.star()).seminorm(n)


def scalar_mix_margin(
    u: Element, v: Element, lam: complex, mu: complex, n: int
) -> float:
    """rhs - lhs of
    |lam u - mu v|_n <= |lam-mu| |u|_n + (|lam|+|lam-mu|) |u - v|_n."""
    lhs = (lam * u - mu * v).seminorm(n)
    rhs = abs(lam - mu) * u.seminorm(n) + (abs(lam) + abs(lam - mu)) * (
        u - v
    ).seminorm(n)
    return rhs - lhs


def sum_difference_margin(
    u: Element, u2: Element, v: Element, v2: Element, n: int
) -> float:
    """rhs - lhs of |u + u' - v - v'|_n <= |u - v|_n + |u' - v'|_n."""
    lhs = (u + u2 - v - v2).seminorm(n)
    return (u - v).seminorm(n) + (u2 - v2).seminorm(n) - lhs


def product_difference_margin(
    u: Element, u2: Element, v: Element, v2: Element, n: int
) -> float:
    """rhs - lhs of |u u' - v v'|_n <=
    |u|_{n+1} |u'-v'|_{n+1} + |u-v|_{n+1} (|u'|_{n+1} + |u'-v'|_{n+1})."""
    _need_level(u, n)
    lhs = (u * u2 - v * v2).seminorm(n)
    d2 = (u2 - v2).seminorm(n + 1)
    rhs = u.seminorm(n + 1) * d2 + (u - v).seminorm(n + 1) * (
        u2.seminorm(n + 1) + d2
    )
    return rhs - lhs


def quasi_shift_margin(w: Element, b: Element, z: Element, n: int) -> float:
    """rhs - lhs of the retraction-factor bound
    |w . b - z|_n <= |w - z|_{n+1} + |b|_{n+1} (1 + |z|_{n+1} + |w - z|_{n+1})."""
    _need_level(w, n)
    lhs = (quasi_product(w, b) - z).seminorm(n)
    dwz = (w - z).seminorm(n + 1)
    rhs = dwz + b.seminorm(n + 1) * (1.0 + z.seminorm(n + 1) + dwz)
    return rhs - lhs


# partial and composite retractions -------------------------------------------


def partial_retract(
    f: AsymptoticFamily,
    u: Element,
    t: float,
    p: float,
    dom_b: SqrtDomain,
) -> Element:
    """f_t(u) . inv_sqrt(p * (f_t(u)* . f_t(u))): f_t(u) itself at p=0 and
    the full retraction integrand at p=1."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("retraction weight p must be in [0, 1]")
    b = f(u, t)
    right = quasi_product(b.star(), b)
    left = quasi_product(b, b.star())
    if not in_domain(right, dom_b):
        raise DomainError(f"f_t(u)* . f_t(u) outside the domain at t={t:g}")
    if not in_domain(left, dom_b):
        raise DomainError(f"f_t(u) . f_t(u)* outside the domain at t={t:g}")
    return quasi_product(b, inv_sqrt(p * right, dom_b))


def composite_retract(
    f: AsymptoticFamily,
    g: AsymptoticFamily,
    u: Element,
    s: float,
    t: float,
    p: float,
    dom_b: SqrtDomain,
    dom_c: SqrtDomain,
) -> Element:
    """Quasi-unitary retraction of g_s applied to the partial retraction of
    f at (t, p); at p=0 this is the plain retraction of g_s(f_t(u))."""
    y = partial_retract(f, u, t, p, dom_b)
    c = g(y, s)
    right = quasi_product(c.star(), c)
    left = quasi_product(c, c.star())
    if not in_domain(right, dom_c):
        raise DomainError(
            f"g_s(y)* . g_s(y) outside the target domain at (s={s:g}, t={t:g}, p={p:g})"
        )
    if not in_domain(left, dom_c):
        raise DomainError(
            f"g_s(y) . g_s(y)* outside the target domain at (s={s:g}, t={t:g}, p={p:g})"
        )
    return quasi_product(c, inv_sqrt(right, dom_c))


# functoriality ----------------------------------------------------------------


@dataclass
class FunctorialityReport:
    phi: Reparameterization
    psi_dots: tuple[tuple[float, float], ...]
    per_point: list[dict]
    stage_rows: list[dict]
    junctions_exact: bool
    start_diff_max: float
    end_diff_max: float
    defect_max: float
    failures: list[str]
    passed: bool

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "phi": self.phi.to_json(),
            "psi_dots": [list(d) for d in self.psi_dots],
            "per_point": self.per_point,
            "junctions_exact": self.junctions_exact,
            "start_diff_max": self.start_diff_max,
            "end_diff_max": self.end_diff_max,
            "defect_max": self.defect_max,
            "failures": self.failures,
            "pass": self.passed,
        }

    def stage_csv_rows(self) -> list[list]:
        return [
            [r["u_id"], r["stage"], repr(r["p"]), repr(r["defect"])]
            for r in self.stage_rows
        ]


def _scan_precondition_times(
    f: AsymptoticFamily,
    g: AsymptoticFamily,
    net: QuasiUnitaryNet,
    t_values,
    s_values,
    p_values,
    dom_b: SqrtDomain,
    dom_c: SqrtDomain,
) -> tuple[ThresholdFunction, Reparameterization]:
    """Per net point, find when the composite retraction becomes admissible.

    For each (u, t) the scan records the minimal sampled s from which the
    memberships behind the composite retraction hold for every p probe and
    every larger sampled s.  The per-point start time (plus one grid step of
    margin) gives a threshold function; the per-t maxima of the s values,
    joined monotonically, give the accompanying time change.
    """
    ts = [float(t) for t in t_values]
    ss = [float(s) for s in s_values]
    ps = [float(p) for p in p_values]

    def admissible(u, t):
        try:
            hats = [partial_retract(f, u, t, p, dom_b) for p in ps]
        except DomainError:
            return None
        ok_by_s = []
        for s in ss:
            ok = True
            for y in hats:
                c = g(y, s)
                if not (
                    in_domain(quasi_product(c.star(), c), dom_c)
                    and in_domain(quasi_product(c, c.star()), dom_c)
                ):
                    ok = False
                    break
            ok_by_s.append(ok)
        for i in range(len(ss)):
            if all(ok_by_s[i:]):
                return ss[i]
        return None

    start_values = []
    s_needed = {t: 0.0 for t in ts}
    for u in net.points:
        per_t = [admissible(u, t) for t in ts]
        start = None
        for i in range(len(ts) - 1, -1, -1):
            if per_t[i] is None:
                break
            start = i
        if start is None:
            raise SearchFailedError(
                "composite retraction preconditions never stabilise "
                "within the horizon"
            )
        margin_idx = min(start + 1, len(ts) - 1)
        start_values.append(ts[margin_idx])
        for i in range(start, len(ts)):
            s_needed[ts[i]] = max(s_needed[ts[i]], per_t[i])
    gamma = ThresholdFunction(net, tuple(start_values), net.covering_radius())
    theta = reparam_from_constraints(sorted(s_needed.items()))
    return gamma, theta


def functoriality_check(
    f: AsymptoticFamily,
    g: AsymptoticFamily,
    net: QuasiUnitaryNet,
    grid: SamplingGrid,
    s_values,
    p_values,
    *,
    dom_b: SqrtDomain | None = None,
    dom_c: SqrtDomain | None = None,
    tolerances: Tolerances | None = None,
    search_tol=1e-2,
    endpoint_tol: float = 1e-8,
    certificate_rng: np.random.Generator | None = None,
) -> FunctorialityReport:
    """Verify that composing then retracting agrees with retracting then
    composing, up to the explicit three-stage homotopy chain.

    Stage one slides the retraction weight p of the inner family from 0 to 1
    at fixed times; stage two slides the inner time from the combined start
    time down to the inner threshold; stage three slides the outer time down
    to the threshold of g at the retracted image.  Junctions are evaluated
    twice through the same formula and must agree bit for bit; the chain
    start must match the composite's standalone representative and the chain
    end the composition of the standalone representatives.
    """
    tol = tolerances or Tolerances()
    dom_b = dom_b or SqrtDomain(f.codomain)
    dom_c = dom_c or SqrtDomain(g.codomain)
    failures: list[str] = []

    rng = certificate_rng or np.random.default_rng(0)
    cert = certify_composition(
        f, g, grid.test_elements, grid.t_values, s_values,
        grid.seminorm_levels, rng,
    )
    search = search_reparam(f, g, grid, s_values, search_tol, certificate=cert)
    phi = search.phi

    gamma, theta_r = _scan_precondition_times(
        f, g, net, grid.t_values, s_values, p_values, dom_b, dom_c
    )
    psi_dots = tuple(
        (t, max(t, phi(t), theta_r(t))) for t in grid.t_values
    )
    psi = reparam_from_constraints(psi_dots)

    alpha = build_threshold_function(f, net, dom_b, grid.t_values)
    composite = compose_with(f, g, psi)
    mu = build_threshold_function(composite, net, dom_c, grid.t_values)

    lam = alpha.pointwise_max(gamma)
    images = [retract_at(f, u, lam(u), dom_b) for u in net.points]
    beta_times = []
    for v in images:
        from .retract import scan_threshold

        t0 = scan_threshold(g, v, dom_c, s_values)
        ss = [float(s) for s in s_values]
        i = ss.index(t0)
        beta_times.append(ss[i + 1] if i + 1 < len(ss) else ss[-1])

    stage_rows: list[dict] = []
    per_point: list[dict] = []
    junctions_exact = True
    start_diff_max = 0.0
    end_diff_max = 0.0
    defect_max = 0.0
    ps = [float(p) for p in p_values]

    for idx, (pid, u) in enumerate(zip(net.point_ids, net.points)):
        lam_u = lam(u)
        omega_u = max(alpha(u), beta_times[idx], gamma(u), mu(u))
        beta_v = beta_times[idx]
        psi_omega = psi(omega_u)
        zeta1 = max(psi(lam_u), beta_v)
        point_info = {
            "u_id": pid, "lambda": lam_u, "omega": omega_u,
            "beta_at_image": beta_v, "psi_omega": psi_omega,
        }
        per_point.append(point_info)

        def record(stage, p, value):
            nonlocal defect_max
            d = is_quasi_unitary(value).defect
            defect_max = max(defect_max, d)
            stage_rows.append(
                {"u_id": pid, "stage": stage, "p": p, "defect": d}
            )

        try:
            # stage one: retraction weight 0 -> 1 at (psi(omega), omega)
            h_vals = {
                p: composite_retract(f, g, u, psi_omega, omega_u, p, dom_b, dom_c)
                for p in ps
            }
            for p in ps:
                record("h", p, h_vals[p])

            # stage two: inner time omega -> lambda at full weight
            h1_vals = {}
            for p in ps:
                tau = (1.0 - p) * omega_u + p * lam_u
                zeta = max(psi(tau), beta_v)
                h1_vals[p] = composite_retract(
                    f, g, u, zeta, tau, 1.0, dom_b, dom_c
                )
                record("h1", p, h1_vals[p])

            # stage three: outer time zeta(1) -> beta at the retracted image
            h2_vals = {}
            for p in ps:
                eta = (1.0 - p) * zeta1 + p * beta_v
                h2_vals[p] = composite_retract(
                    f, g, u, eta, lam_u, 1.0, dom_b, dom_c
                )
                record("h2", p, h2_vals[p])

            if not h_vals[1.0].bit_equal(h1_vals[0.0]):
                junctions_exact = False
                failures.append(f"junction h/h1 differs at {pid}")
            if not h1_vals[1.0].bit_equal(h2_vals[0.0]):
                junctions_exact = False
                failures.append(f"junction h1/h2 differs at {pid}")

            comp_rep = retract_at(composite, u, omega_u, dom_c)
            start_diff = (h_vals[0.0] - comp_rep).top_norm()
            start_diff_max = max(start_diff_max, start_diff)

            final_rep = retract_at(g, images[idx], beta_v, dom_c)
            end_diff = (h2_vals[1.0] - final_rep).top_norm()
            end_diff_max = max(end_diff_max, end_diff)
        except DomainError as exc:
            failures.append(f"{pid}: {exc}")

    passed = (
        not failures
        and junctions_exact
        and start_diff_max <= endpoint_tol
        and end_diff_max <= endpoint_tol
        and defect_max <= 10.0 * tol.quasi_unitary
    )
    return FunctorialityReport(
        phi,
        psi_dots,
        per_point,
        stage_rows,
        junctions_exact,
        start_diff_max,
        end_diff_max,
        defect_max,
        failures,
        passed,
    )
