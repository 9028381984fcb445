"""Self-densities of blow-ups and optimization of the blow-up measure.

For a twin-free core F0 with multiplicity vector k, the density of the
h-fold blow-up pattern inside the weighted core has the closed form

    sum over automorphisms sigma of F0 of  prod_v mu(v)^(h * k(sigma(v)))

because every strong homomorphism from the blow-up pattern into F0 collapses
each copy class onto a single vertex and induces an automorphism of F0.
Everything downstream of that identity is evaluated exactly in rationals;
floating point appears only inside the numeric ascent.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import PreconditionError
from .density import Measure
from .graphs import Graph, automorphisms, is_twin_free, twin_free_factor

MASS_FLOOR = 1e-12
CRITICALITY_TOL = 1e-9

Exponents = Sequence[Union[int, Fraction]]


def _check_core(core: Graph, k: Sequence[int]) -> None:
    if not is_twin_free(core):
        raise PreconditionError("core must be twin-free")
    if len(k) != core.order:
        raise PreconditionError("multiplicity vector length must equal core order")
    for v, kv in enumerate(k):
        if kv < 1:
            raise PreconditionError(f"multiplicity of vertex {v} must be at least 1")


def p_eval(exponents: Exponents, masses: Union[Measure, Sequence[Fraction]]) -> Fraction | float:
    """Product of mass(v) ** exponents[v].  Exact when every exponent is an
    integer; fractional exponents fall back to floating point."""
    ms = masses.masses if isinstance(masses, Measure) else tuple(masses)
    if len(exponents) != len(ms):
        raise PreconditionError("one exponent per vertex required")
    exact = True
    ints: list[int] = []
    for e in exponents:
        f = Fraction(e)
        if f.denominator == 1:
            ints.append(f.numerator)
        else:
            exact = False
            break
    if exact:
        value = Fraction(1)
        for m, e in zip(ms, ints):
            value *= Fraction(m) ** e
        return value
    out = 1.0
    for m, e in zip(ms, exponents):
        out *= float(m) ** float(e)
    return out


def amgm_maximizer(exponents: Exponents) -> Measure:
    """The unique maximizer of prod mass(v)^a(v) over the probability simplex
    when every exponent is at least 1: masses proportional to the exponents."""
    values = [Fraction(e) for e in exponents]
    if not values:
        raise PreconditionError("need at least one exponent")
    for v, a in enumerate(values):
        if a < 1:
            raise PreconditionError(f"exponent of vertex {v} must be at least 1")
    total = sum(values)
    return Measure(tuple(a / total for a in values))


def blowup_self_density(
    core: Graph, k: Sequence[int], h: int, measure: Measure
) -> Fraction:
    """Exact density of the h-fold blow-up of blow_up(core, k) inside the
    measured core: sum over core automorphisms of the twisted mass product."""
    _check_core(core, k)
    if h < 1:
        raise PreconditionError("h must be at least 1")
    if measure.order != core.order:
        raise PreconditionError("measure order must match core order")
    total = Fraction(0)
    for sigma in automorphisms(core):
        term = Fraction(1)
        for v in range(core.order):
            term *= measure.masses[v] ** (h * k[sigma[v]])
        total += term
    return total


def blowup_self_gradient(
    core: Graph, k: Sequence[int], h: int, measure: Measure
) -> list[Fraction]:
    """Exact partial derivatives of blowup_self_density with respect to each
    mass (as a polynomial, before restricting to the simplex)."""
    _check_core(core, k)
    if h < 1:
        raise PreconditionError("h must be at least 1")
    if measure.order != core.order:
        raise PreconditionError("measure order must match core order")
    n = core.order
    grad = [Fraction(0)] * n
    for sigma in automorphisms(core):
        term = Fraction(1)
        for v in range(n):
            term *= measure.masses[v] ** (h * k[sigma[v]])
        for v in range(n):
            grad[v] += h * k[sigma[v]] * term / measure.masses[v]
    return grad


def is_balanced(g: Graph) -> bool:
    """True iff the multiplicity vector of the twin-free factorization is
    constant on every orbit of the core automorphism group."""
    dec = twin_free_factor(g)
    k = dec.multiplicities
    return all(
        k[sigma[v]] == k[v]
        for sigma in automorphisms(dec.core)
        for v in range(dec.core.order)
    )


@dataclass(frozen=True)
class OptimizationResult:
    argmax: tuple[float, ...]
    value: float
    restarts: int
    first_order_residual: float
    converged: bool
    balanced: bool
    used_closed_form: bool


def _project_simplex(x: Sequence[float]) -> list[float]:
    """Euclidean projection onto the probability simplex (sort-based)."""
    u = sorted(x, reverse=True)
    css = 0.0
    theta = 0.0
    for i, ui in enumerate(u):
        css += ui
        t = (css - 1.0) / (i + 1)
        if ui - t > 0:
            theta = t
    return [max(xi - theta, 0.0) for xi in x]


def _floor_renorm(x: Sequence[float]) -> list[float]:
    y = [max(xi, MASS_FLOOR) for xi in x]
    s = sum(y)
    return [yi / s for yi in y]


class _LogObjective:
    """log of the closed-form density and its value-normalized gradient."""

    def __init__(self, core: Graph, k: Sequence[int], h: int) -> None:
        self.n = core.order
        self.h = h
        self.twists = [
            [h * k[sigma[v]] for v in range(core.order)]
            for sigma in automorphisms(core)
        ]

    def __call__(self, mu: Sequence[float]) -> tuple[float, list[float]]:
        logs = [math.log(m) for m in mu]
        exps = [sum(t[v] * logs[v] for v in range(self.n)) for t in self.twists]
        m = max(exps)
        weights = [math.exp(e - m) for e in exps]
        z = sum(weights)
        flog = m + math.log(z)
        ghat = [0.0] * self.n
        for t, w in zip(self.twists, weights):
            share = w / z
            for v in range(self.n):
                ghat[v] += share * t[v] / mu[v]
        return flog, ghat


def _residual(mu: Sequence[float], ghat: Sequence[float]) -> float:
    mean = sum(ghat) / len(ghat)
    return max(abs(g - mean) for g in ghat)


def _ascend(
    objective: _LogObjective,
    start: Sequence[float],
    tol: float,
    max_iter: int = 2000,
    polish_iter: int = 100_000,
) -> tuple[list[float], float, float, bool]:
    """Projected gradient ascent for the coarse phase, then a multiplicative
    fixed-point polish: mu_v <- mu_v * dF/dmu_v / (sum_u mu_u dF/dmu_u).

    The polish step never decreases the objective (the objective is a
    homogeneous polynomial with nonnegative coefficients), stays on the
    simplex, and has exactly the first-order critical points as fixed
    points, so it reaches residuals that a line search cannot certify once
    per-step improvements fall below one ulp of the objective.
    """
    mu = _floor_renorm(start)
    flog, ghat = objective(mu)
    step = 1.0
    for _ in range(max_iter):
        residual = _residual(mu, ghat)
        if residual <= tol:
            return mu, flog, residual, True
        tangent_scale = max(residual, 1e-30)
        mean = sum(ghat) / len(ghat)
        direction = [(g - mean) / tangent_scale for g in ghat]
        t = step
        improved = False
        for _ in range(60):
            cand = _floor_renorm(
                _project_simplex([m + t * d for m, d in zip(mu, direction)])
            )
            nf, ng = objective(cand)
            if nf > flog + 1e-14:
                mu, flog, ghat = cand, nf, ng
                step = min(t * 2.0, 1e3)
                improved = True
                break
            t *= 0.5
        if not improved:
            break
    for _ in range(polish_iter):
        residual = _residual(mu, ghat)
        if residual <= tol:
            break
        total = sum(m * g for m, g in zip(mu, ghat))
        mu = _floor_renorm([m * g / total for m, g in zip(mu, ghat)])
        flog, ghat = objective(mu)
    residual = _residual(mu, ghat)
    return mu, flog, residual, residual <= tol


def optimize_nu(
    core: Graph,
    k: Sequence[int],
    h: int,
    restarts: int = 32,
    tol: float = CRITICALITY_TOL,
    seed: int = 0,
    force_search: bool = False,
) -> OptimizationResult:
    """Maximize the blow-up self-density over the probability simplex.

    Balanced instances (multiplicities constant on automorphism orbits) are
    answered by the closed form at the proportional measure, which is the
    exact global maximizer there; force_search runs the numeric ascent
    anyway.  Unbalanced instances run projected gradient ascent from the
    proportional measure, its automorphism twists, the uniform measure, and
    seeded Dirichlet draws up to `restarts` total starts.
    """
    _check_core(core, k)
    if h < 1:
        raise PreconditionError("h must be at least 1")
    n = core.order
    auts = automorphisms(core)
    balanced = all(k[s[v]] == k[v] for s in auts for v in range(n))
    objective = _LogObjective(core, k, h)
    mu_k = amgm_maximizer([Fraction(kv) for kv in k])
    mu_k_float = [float(m) for m in mu_k.masses]

    if balanced and not force_search:
        value = blowup_self_density(core, k, h, mu_k)
        _, ghat = objective(mu_k_float)
        mean = sum(ghat) / n
        residual = max(abs(g - mean) for g in ghat)
        return OptimizationResult(
            argmax=tuple(mu_k_float),
            value=float(value),
            restarts=0,
            first_order_residual=residual,
            converged=True,
            balanced=True,
            used_closed_form=True,
        )

    starts: list[list[float]] = [mu_k_float, [1.0 / n] * n]
    seen = {tuple(mu_k_float), tuple(starts[1])}
    norm = sum(k)
    for sigma in auts:
        twist = [k[sigma[v]] / norm for v in range(n)]
        tt = tuple(twist)
        if tt not in seen:
            seen.add(tt)
            starts.append(twist)
    rng = random.Random(seed)
    while len(starts) < max(restarts, len(starts)):
        draw = [rng.gammavariate(1.0, 1.0) for _ in range(n)]
        s = sum(draw)
        starts.append([d / s for d in draw])

    best: tuple[float, tuple[float, ...], float, bool] | None = None
    for start in starts:
        mu, flog, residual, ok = _ascend(objective, start, tol)
        key = (flog, tuple(-m for m in mu))
        if best is None or key > (best[0], tuple(-m for m in best[1])):
            best = (flog, tuple(mu), residual, ok)
    assert best is not None
    flog, argmax, residual, ok = best
    return OptimizationResult(
        argmax=argmax,
        value=math.exp(flog),
        restarts=len(starts),
        first_order_residual=residual,
        converged=ok,
        balanced=balanced,
        used_closed_form=False,
    )


@dataclass(frozen=True)
class CriticalityRow:
    h: int
    residual: float
    critical: bool
    exact_tangent: tuple[Fraction, ...]
    exact_critical: bool


@dataclass(frozen=True)
class CriticalPointReport:
    measure: tuple[Fraction, ...]
    rows: tuple[CriticalityRow, ...]

    @property
    def all_critical(self) -> bool:
        return all(r.critical for r in self.rows)


def critical_point_test(
    core: Graph, k: Sequence[int], h_values: Sequence[int]
) -> CriticalPointReport:
    """First-order criticality of the proportional measure mu_k for each h.

    The tangent-projected gradient is computed exactly in rationals, so a
    nonzero entry is a certificate of non-criticality; the reported residual
    is the largest tangent entry divided by the density value, compared
    against the 1e-9 relative threshold."""
    _check_core(core, k)
    mu_k = amgm_maximizer([Fraction(kv) for kv in k])
    rows = []
    for h in h_values:
        if h < 1:
            raise PreconditionError("h must be at least 1")
        value = blowup_self_density(core, k, h, mu_k)
        grad = blowup_self_gradient(core, k, h, mu_k)
        mean = sum(grad) / len(grad)
        tangent = tuple(gv - mean for gv in grad)
        exact_critical = all(t == 0 for t in tangent)
        residual = float(max(abs(t) for t in tangent) / value)
        rows.append(
            CriticalityRow(
                h=h,
                residual=residual,
                critical=residual <= CRITICALITY_TOL,
                exact_tangent=tangent,
                exact_critical=exact_critical,
            )
        )
    return CriticalPointReport(measure=mu_k.masses, rows=tuple(rows))


def inducibility_from_sup(
    f: Graph, sup_value: Union[Fraction, float]
) -> Union[Fraction, float]:
    """Convert a supremum of blow-up self-densities into an inducibility
    value by dividing out the automorphisms of f; exact in, exact out."""
    if f.order < 1:
        raise PreconditionError("f must have at least one vertex")
    if not 0 <= sup_value <= 1:
        raise PreconditionError("a density supremum must lie in [0, 1]")
    return sup_value / len(automorphisms(f))
