"""Root finding and variational minimization for both equation kinds.

Provides damped Newton iteration, deflation against known roots, homotopy
continuation along the two deformations, barrier selection, and projected
gradient descent of the energy over a box.  All solvers are deterministic:
identical configuration and inputs produce identical reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from . import linalg
from .errors import (
    BarrierInapplicableError,
    ContinuationBrokenError,
    ExponentOverflowError,
    InteriorViolationError,
    MultiplicityFailureError,
    SolveFailedError,
    SpecValidationError,
)
from .estimates import bounds_generalized
from .graphs import WeightedGraph, as_field, average
from .model import (
    HomotopyParams,
    Kind,
    ProblemSpec,
    default_epsilon,
    energy,
    jacobian,
    jacobian_homotopy,
    residual,
    residual_homotopy,
    validate_homotopy,
)

__all__ = [
    "SolverConfig",
    "SolveReport",
    "BarrierPair",
    "newton",
    "newton_deflated",
    "continuation",
    "default_t_grid",
    "multiplicity_branch",
    "choose_barriers",
    "minimize_box",
    "find_two_solutions",
]

_ARMIJO = 1e-4
_MAX_BISECT_DEPTH = 10  # stage halving cap: effective grid of 2**10 points
_BARRIER_SEARCH_STEPS = 60


@dataclass(frozen=True)
class SolverConfig:
    """Shared solver knobs; the defaults match the CLI defaults."""

    tol: float = 1e-10
    max_iter: int = 200
    shrink: float = 0.5
    min_step: float = 2.0**-30
    deflation_radius: float = 5e-6
    seed: int = 0

    def __post_init__(self):
        if not self.tol > 0.0:
            raise SpecValidationError("tol must be positive")
        if not 0.0 < self.shrink < 1.0:
            raise SpecValidationError("shrink factor must lie in (0, 1)")
        if self.max_iter < 1:
            raise SpecValidationError("max_iter must be at least 1")
        if not self.min_step > 0.0:
            raise SpecValidationError("min_step must be positive")
        if not self.deflation_radius > 0.0:
            raise SpecValidationError("deflation_radius must be positive")


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one solve: the iterate, certification data, and traces.

    ``converged`` implies ``residual_norm < tol`` and ``jac_sign != 0``;
    a solve that hits a residual below tolerance but a numerically singular
    Jacobian reports ``converged=False`` with ``jac_sign=0``.
    """

    solution: np.ndarray
    residual_norm: float
    iterations: int
    jac_sign: int
    converged: bool
    residual_history: tuple[float, ...] = ()
    energy_history: tuple[float, ...] = ()


@dataclass(frozen=True)
class BarrierPair:
    """Constant barriers confining a one-signed solution.

    ``side=+1`` describes the box ``(delta, beta)`` on the positive axis,
    where the pointwise nonlinearity is strictly negative at ``delta`` and
    strictly positive at ``beta``.  ``side=-1`` describes the mirrored box
    ``(-beta, -delta)`` used for negative solutions.
    """

    delta: float
    beta: float
    side: int = 1

    def __post_init__(self):
        if not 0.0 < self.delta < self.beta:
            raise SpecValidationError("barriers must satisfy 0 < delta < beta")
        if self.side not in (1, -1):
            raise SpecValidationError("side must be +1 or -1")

    def box(self) -> tuple[float, float]:
        if self.side == 1:
            return (self.delta, self.beta)
        return (-self.beta, -self.delta)


def _freeze(u: np.ndarray) -> np.ndarray:
    out = np.array(u, dtype=float)
    out.flags.writeable = False
    return out


def _safe_eval(fun: Callable[[np.ndarray], np.ndarray], u: np.ndarray) -> np.ndarray | None:
    try:
        value = fun(u)
    except ExponentOverflowError:
        return None
    if not np.all(np.isfinite(value)):
        return None
    return value


def _newton_system(
    fun: Callable[[np.ndarray], np.ndarray],
    jac_fun: Callable[[np.ndarray], np.ndarray],
    start: np.ndarray,
    cfg: SolverConfig,
    *,
    sign_jac_fun: Callable[[np.ndarray], np.ndarray] | None = None,
    true_fun: Callable[[np.ndarray], np.ndarray] | None = None,
    escape_radius: float | None = None,
) -> SolveReport:
    """Damped Newton on a callable system.

    Armijo backtracking on the squared residual 2-norm; a pivot below
    ``1e-12 * ||J||_inf`` in the step system aborts with ``jac_sign=0``.
    ``sign_jac_fun``/``true_fun`` let a deflated solve certify against the
    undeflated system.
    """
    sign_jac = sign_jac_fun or jac_fun
    u = np.array(start, dtype=float)
    r = _safe_eval(fun, u)
    if r is None:
        return SolveReport(_freeze(u), math.inf, 0, 0, False, (math.inf,))
    norm = float(np.max(np.abs(r)))
    history = [norm]
    iterations = 0
    failed = False
    prev_alpha = 1.0
    stalled = 0

    while norm >= cfg.tol:
        if iterations >= cfg.max_iter:
            failed = True
            break
        jac_value = _safe_eval(lambda v: np.ravel(jac_fun(v)), u)
        if jac_value is None:
            failed = True
            break
        factors = linalg.lu_factor(jac_value.reshape(u.size, u.size))
        if factors.singular:
            return SolveReport(_freeze(u), norm, iterations, 0, False, tuple(history))
        step = linalg.lu_solve(factors, -r)
        phi0 = float(np.dot(r, r))
        alpha = 1.0
        accepted = False
        while alpha >= cfg.min_step:
            trial = u + alpha * step
            r_trial = _safe_eval(fun, trial)
            if r_trial is not None and float(np.dot(r_trial, r_trial)) <= (
                1.0 - 2.0 * _ARMIJO * alpha
            ) * phi0:
                u, r = trial, r_trial
                accepted = True
                break
            # the full and half steps are always tried; after that, resume
            # near the previously accepted length instead of re-walking down
            if alpha == cfg.shrink and 2.0 * prev_alpha < alpha * cfg.shrink:
                alpha = 2.0 * prev_alpha
            else:
                alpha *= cfg.shrink
        if not accepted:
            failed = True
            break
        prev_alpha = alpha
        iterations += 1
        new_norm = float(np.max(np.abs(r)))
        # crawling lines (sub-0.1% progress) cannot reach tolerance within
        # any reasonable budget; cut them off early
        stalled = stalled + 1 if new_norm > 0.999 * norm else 0
        norm = new_norm
        history.append(norm)
        if stalled >= 12:
            failed = True
            break
        if escape_radius is not None and float(np.max(np.abs(u))) > escape_radius:
            failed = True
            break
        if norm > 1e12:
            failed = True
            break

    if true_fun is not None:
        r_true = _safe_eval(true_fun, u)
        norm = float(np.max(np.abs(r_true))) if r_true is not None else math.inf

    converged = not failed and norm < cfg.tol
    jac_sign = 0
    if converged:
        final_jac = _safe_eval(lambda v: np.ravel(sign_jac(v)), u)
        if final_jac is None:
            converged = False
        else:
            jac_sign = linalg.det_sign(final_jac.reshape(u.size, u.size))
            if jac_sign == 0:
                converged = False
    return SolveReport(_freeze(u), norm, iterations, jac_sign, converged, tuple(history))


def newton(spec: ProblemSpec, g: WeightedGraph, start, cfg: SolverConfig) -> SolveReport:
    """Damped Newton on the residual from the given start field."""
    start = as_field(g, start)
    return _newton_system(
        lambda u: residual(spec, g, u),
        lambda u: jacobian(spec, g, u),
        start,
        cfg,
    )


def _deflation_terms(u: np.ndarray, known: Sequence[np.ndarray]) -> tuple[float, np.ndarray]:
    """Deflation multiplier prod_k(1 + 1/||u-u_k||^2) and its gradient."""
    factor = 1.0
    grad = np.zeros_like(u)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        for root in known:
            diff = u - root
            d2 = float(np.dot(diff, diff))
            if d2 == 0.0:
                return math.inf, grad
            factor *= 1.0 + 1.0 / d2
            grad += -2.0 * diff / (d2 * d2 + d2)
    return factor, factor * grad


def _deflated_system(
    fun: Callable[[np.ndarray], np.ndarray],
    jac_fun: Callable[[np.ndarray], np.ndarray],
    known: Sequence[np.ndarray],
):
    if not known:
        return fun, jac_fun

    def dfun(u: np.ndarray) -> np.ndarray:
        factor, _ = _deflation_terms(u, known)
        if not math.isfinite(factor):
            return np.full_like(u, math.inf)
        return factor * fun(u)

    def djac(u: np.ndarray) -> np.ndarray:
        factor, grad = _deflation_terms(u, known)
        if not math.isfinite(factor):
            return np.full((u.size, u.size), math.inf)
        return factor * jac_fun(u) + np.outer(fun(u), grad)

    return dfun, djac


def newton_deflated(
    spec: ProblemSpec,
    g: WeightedGraph,
    known: Sequence[np.ndarray],
    start,
    cfg: SolverConfig,
) -> SolveReport:
    """Newton on the residual deflated against the known solutions.

    The deflation multiplier preserves roots while making every known root
    repel the iteration, so a converged report is a *new* solution: it is
    certified against the undeflated residual and must sit at sup-distance
    greater than ``cfg.deflation_radius`` from every known root.
    """
    start = as_field(g, start)
    known = [as_field(g, k) for k in known]
    base_fun = lambda u: residual(spec, g, u)
    base_jac = lambda u: jacobian(spec, g, u)
    dfun, djac = _deflated_system(base_fun, base_jac, known)
    report = _newton_system(
        dfun,
        djac,
        start,
        cfg,
        sign_jac_fun=base_jac,
        true_fun=base_fun,
    )
    if report.converged and known:
        closest = min(float(np.max(np.abs(report.solution - k))) for k in known)
        if closest <= cfg.deflation_radius:
            report = replace(report, converged=False, jac_sign=0)
    return report


def default_t_grid(count: int = 21) -> np.ndarray:
    """Uniform deformation grid from t = 1 down to t = 0."""
    if count < 2:
        raise SpecValidationError("continuation grid needs at least two points")
    return np.linspace(1.0, 0.0, count)


def continuation(
    spec: ProblemSpec,
    g: WeightedGraph,
    t_grid: Sequence[float],
    hp_eps: float | None = None,
    cfg: SolverConfig = SolverConfig(),
) -> list[SolveReport]:
    """Track the deformed equation from t = 1 down to t = 0.

    Each converged stage seeds the next; a failing stage is retried across
    recursively halved parameter steps (down to an effective grid of 2**10
    points) before :class:`ContinuationBrokenError` is raised with the
    partial reports attached.  For the classic kind t = 0 is the target
    equation and the path normally completes; for the generalized kind the
    t = 0 member has no solution, so the path must break along the way.
    """
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise SpecValidationError("t_grid must be a 1-d grid with at least two points")
    if grid[0] != 1.0 or grid[-1] != 0.0 or np.any(np.diff(grid) >= 0.0):
        raise SpecValidationError("t_grid must decrease strictly from 1 to 0")

    eps: float | None = None
    if spec.kind is Kind.CLASSIC:
        eps = float(hp_eps) if hp_eps is not None else default_epsilon(spec)
        validate_homotopy(spec, HomotopyParams(0.0, eps))

    def solve_at(t: float, start: np.ndarray) -> SolveReport:
        hp = HomotopyParams(float(t), eps)
        return _newton_system(
            lambda u: residual_homotopy(spec, g, u, hp),
            lambda u: jacobian_homotopy(spec, g, u, hp),
            start,
            cfg,
        )

    reports: list[SolveReport] = []

    def advance(start: np.ndarray, t_from: float, t_to: float, depth: int) -> SolveReport:
        report = solve_at(t_to, start)
        if report.converged:
            return report
        if depth >= _MAX_BISECT_DEPTH:
            raise ContinuationBrokenError(t_to, reports)
        mid = 0.5 * (t_from + t_to)
        mid_report = advance(start, t_from, mid, depth + 1)
        return advance(mid_report.solution, mid, t_to, depth + 1)

    first = solve_at(grid[0], np.zeros(g.n))
    if not first.converged:
        raise ContinuationBrokenError(float(grid[0]), reports)
    reports.append(first)
    for prev_t, next_t in zip(grid[:-1], grid[1:]):
        reports.append(advance(reports[-1].solution, float(prev_t), float(next_t), 0))
    return reports


def multiplicity_branch(spec: ProblemSpec) -> int:
    """Which two-solution hypothesis holds: +1, -1, or 0 for neither.

    +1 stands for ``A * max h1 < B * min h2`` (extra solution on the
    positive side), -1 for ``A * min h1 > B * max h2`` (negative side).
    """
    if spec.A * float(spec.h1.max()) < spec.B * float(spec.h2.min()):
        return 1
    if spec.A * float(spec.h1.min()) > spec.B * float(spec.h2.max()):
        return -1
    return 0


def _constant_residual(spec: ProblemSpec, g: WeightedGraph, c: float) -> np.ndarray:
    """Residual on the constant field c; the Laplacian term vanishes exactly."""
    return residual(spec, g, np.full(g.n, float(c)))


def _scalar_nonlinearity(spec: ProblemSpec, vertex: int, c: float) -> float:
    if abs(spec.A * c) > 350.0 or abs(spec.B * c) > 350.0:
        raise ExponentOverflowError(f"scalar exponent out of range at c={c:.3g}")
    h1 = float(spec.h1[vertex])
    h2 = float(spec.h2[vertex])
    e_up = math.exp(spec.A * c)
    e_dn = math.exp(-spec.B * c)
    return h1 * e_up * (e_up - 1.0) + h2 * e_dn * (e_dn - 1.0)


def _negative_crossings(spec: ProblemSpec, g: WeightedGraph) -> np.ndarray:
    """Per-vertex sign change of the pointwise nonlinearity on the negative axis.

    Under ``A h1(x) > B h2(x)`` the pointwise term is negative just below
    zero and grows without bound far below, so each vertex has a crossing;
    bisection brackets it between a halved near point and a doubled far
    point.
    """
    crossings = np.empty(g.n)
    for x in range(g.n):
        near = None
        s = 0.5
        for _ in range(_BARRIER_SEARCH_STEPS):
            if _scalar_nonlinearity(spec, x, -s) < 0.0:
                near = s
                break
            s *= 0.5
        far = None
        s = 1.0
        for _ in range(_BARRIER_SEARCH_STEPS):
            if _scalar_nonlinearity(spec, x, -s) > 0.0:
                far = s
                break
            s *= 2.0
        if near is None or far is None:
            raise BarrierInapplicableError(
                "could not bracket the negative-side sign change of the nonlinearity"
            )
        lo, hi = -far, -near
        for _ in range(120):
            mid = 0.5 * (lo + hi)
            if _scalar_nonlinearity(spec, x, mid) > 0.0:
                lo = mid
            else:
                hi = mid
        crossings[x] = 0.5 * (lo + hi)
    return crossings


def choose_barriers(spec: ProblemSpec, g: WeightedGraph) -> BarrierPair:
    """Deterministic power-of-two barriers for the applicable branch.

    Positive branch (``A max h1 < B min h2``): halve trial values until the
    constant field ``delta`` makes the residual strictly negative at every
    vertex, and double until ``beta`` makes it strictly positive.

    Negative branch (``A min h1 > B max h2``): the pointwise term is
    negative *near* zero and positive *far* below it, which is the opposite
    wall pattern from the positive side, so the box ``(-beta, -delta)`` is
    built around the per-vertex crossing envelope instead: ``delta`` is a
    power of two below the crossing nearest zero and ``beta`` a power of
    two beyond both the deepest crossing and the uniform lower solution
    bound.
    """
    if spec.kind is not Kind.GENERALIZED:
        raise BarrierInapplicableError("barriers are defined for the generalized kind only")
    if np.any(spec.h2 <= 0.0):
        raise BarrierInapplicableError(
            "the two-solution hypotheses require h2 > 0 at every vertex"
        )
    branch = multiplicity_branch(spec)
    if branch == 0:
        raise BarrierInapplicableError(
            "neither A*max(h1) < B*min(h2) nor A*min(h1) > B*max(h2) holds"
        )
    if branch == 1:
        delta = None
        for k in range(1, _BARRIER_SEARCH_STEPS + 1):
            trial = 2.0**-k
            if np.all(_constant_residual(spec, g, trial) < 0.0):
                delta = trial
                break
        beta = None
        for k in range(_BARRIER_SEARCH_STEPS + 1):
            trial = 2.0**k
            if np.all(_constant_residual(spec, g, trial) > 0.0):
                beta = trial
                break
        if delta is None or beta is None:
            raise BarrierInapplicableError("barrier search did not terminate")
        return BarrierPair(delta, beta, side=1)

    crossings = _negative_crossings(spec, g)
    nearest = float(np.abs(crossings).min())
    deepest = float(np.abs(crossings).max())
    delta = 2.0 ** (math.floor(math.log2(nearest)) - 1)
    reach = max(2.0 * deepest, abs(bounds_generalized(spec, g).lower))
    beta = 2.0 ** math.ceil(math.log2(reach))
    return BarrierPair(delta, beta, side=-1)


def _mean_constant_root(
    spec: ProblemSpec, g: WeightedGraph, lo: float, hi: float
) -> float:
    """Bisect the measure-averaged pointwise equation over [lo, hi]."""
    f_lo = average(g, _constant_residual(spec, g, lo))
    f_hi = average(g, _constant_residual(spec, g, hi))
    if f_lo * f_hi >= 0.0:
        return 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = average(g, _constant_residual(spec, g, mid))
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return 0.5 * (lo + hi)


def minimize_box(
    spec: ProblemSpec,
    g: WeightedGraph,
    bp: BarrierPair,
    cfg: SolverConfig,
    _trace: list | None = None,
) -> SolveReport:
    """Projected gradient descent of the energy over the barrier box.

    Trial steps use a Barzilai-Borwein length inside monotone Armijo
    backtracking, and the projection onto the box is exact, so every
    accepted iterate satisfies the bounds exactly and the energy never
    increases.  Once the gradient is small the iterate is polished by the
    unconstrained Newton solver; the polish must stay strictly inside the
    box.  Convergence requires the *unconstrained* gradient below ``tol``
    at a strictly interior point: a projected-stationary iterate pinned to
    a wall raises :class:`InteriorViolationError` instead, since the
    barrier construction promises an interior minimizer.
    """
    if spec.kind is not Kind.GENERALIZED:
        raise SpecValidationError("box minimization applies to the generalized kind only")
    lo, hi = bp.box()
    mu = g.mu

    u = np.full(g.n, _mean_constant_root(spec, g, lo, hi))
    np.clip(u, lo, hi, out=u)
    j_val = energy(spec, g, u)
    grad = residual(spec, g, u)
    energies = [j_val]
    if _trace is not None:
        _trace.append(u.copy())

    alpha = 1.0
    steps = 0
    status = "budget"
    max_steps = max(20000, 100 * cfg.max_iter)
    noise_floor = 1e-14

    while steps < max_steps:
        grad_norm = float(np.max(np.abs(grad)))
        if grad_norm < cfg.tol:
            status = "converged"
            break
        projected_move = u - np.clip(u - grad, lo, hi)
        if float(np.max(np.abs(projected_move))) < cfg.tol:
            raise InteriorViolationError(
                "projected-stationary point has an active box constraint"
            )

        a = alpha
        accepted = False
        while a >= cfg.min_step:
            trial = np.clip(u - a * grad, lo, hi)
            direction = trial - u
            if not np.any(direction):
                a *= cfg.shrink
                continue
            try:
                j_trial = energy(spec, g, trial)
            except ExponentOverflowError:
                a *= cfg.shrink
                continue
            decrease = float(np.dot(mu * grad, direction))
            if j_trial <= j_val + _ARMIJO * decrease + noise_floor * (1.0 + abs(j_val)):
                accepted = True
                break
            a *= cfg.shrink
        if not accepted:
            status = "stalled"
            break

        new_grad = residual(spec, g, trial)
        s = direction
        y = new_grad - grad
        sy = float(np.dot(mu * s, y))
        ss = float(np.dot(mu * s, s))
        alpha = min(max(ss / sy, 1e-10), 1e10) if sy > 0.0 else min(a * 2.0, 1e6)
        u, j_val, grad = trial, j_trial, new_grad
        energies.append(j_val)
        if _trace is not None:
            _trace.append(u.copy())
        steps += 1

    grad_norm = float(np.max(np.abs(grad)))
    polish_iterations = 0
    if status in ("stalled", "budget") and grad_norm <= 1e-5 and np.all(u > lo) and np.all(u < hi):
        polish = _newton_system(
            lambda v: residual(spec, g, v),
            lambda v: jacobian(spec, g, v),
            u,
            cfg,
        )
        if polish.converged and np.all(polish.solution > lo) and np.all(polish.solution < hi):
            u = np.array(polish.solution)
            grad = residual(spec, g, u)
            grad_norm = float(np.max(np.abs(grad)))
            j_val = energy(spec, g, u)
            energies.append(j_val)
            polish_iterations = polish.iterations
            if _trace is not None:
                _trace.append(u.copy())
            status = "converged" if grad_norm < cfg.tol else status

    converged = status == "converged" and grad_norm < cfg.tol
    if converged and (np.any(u <= lo) or np.any(u >= hi)):
        raise InteriorViolationError("minimizer converged on the box boundary")
    jac_sign = 0
    if converged:
        jac_sign = linalg.det_sign(jacobian(spec, g, u))
        if jac_sign == 0:
            converged = False
    return SolveReport(
        _freeze(u),
        grad_norm,
        steps + polish_iterations,
        jac_sign,
        converged,
        energy_history=tuple(energies),
    )


def find_two_solutions(
    spec: ProblemSpec, g: WeightedGraph, cfg: SolverConfig
) -> list[SolveReport]:
    """The zero solution plus a one-signed second solution.

    The zero field solves the generalized equation identically.  Under the
    positive-branch hypothesis the second solution is the interior
    minimizer of the energy over the barrier box.  Under the negative
    branch the energy has its local minimum *at* zero, so the second
    (negative) solution is not a box minimizer; it is found by Newton
    deflated against zero, warm-started at the pointwise crossing profile
    and constant fields in the mirrored box, with a full multi-start
    enumeration as fallback (weak graph coupling can scatter the negative
    solutions far from any constant profile).
    """
    if spec.kind is not Kind.GENERALIZED:
        raise BarrierInapplicableError("two-solution search applies to the generalized kind only")
    branch = multiplicity_branch(spec)
    if branch == 0:
        raise BarrierInapplicableError(
            "neither A*max(h1) < B*min(h2) nor A*min(h1) > B*max(h2) holds"
        )
    zero_report = newton(spec, g, np.zeros(g.n), cfg)
    if not zero_report.converged:
        raise MultiplicityFailureError("the zero solution failed to certify (degenerate Jacobian)")

    barriers = choose_barriers(spec, g)
    lo, hi = barriers.box()
    if branch == 1:
        second = minimize_box(spec, g, barriers, cfg)
        if not second.converged:
            raise SolveFailedError("box minimization did not converge")
        if not (np.all(second.solution > lo) and np.all(second.solution < hi)):
            raise MultiplicityFailureError("minimizer escaped the barrier box")
    else:
        crossings = _negative_crossings(spec, g)
        starts = [crossings, np.full(g.n, _mean_constant_root(spec, g, lo, hi))]
        starts += [
            np.full(g.n, c)
            for c in (
                float(np.mean(crossings)),
                -math.sqrt(barriers.delta * barriers.beta),
                float(crossings.min()),
                float(crossings.max()),
            )
        ]
        second = None
        for start in starts:
            attempt = newton_deflated(
                spec, g, [np.zeros(g.n)], np.clip(start, lo, hi), cfg
            )
            if attempt.converged and np.all(attempt.solution < 0.0):
                second = attempt
                break
        if second is None:
            # weakly coupled graphs can scatter the negative solutions far
            # from any constant profile; fall back to full enumeration
            from .degree import _enumerate_signed_roots

            roots, _, _ = _enumerate_signed_roots(
                lambda u: residual(spec, g, u),
                lambda u: jacobian(spec, g, u),
                g.n,
                bounds_generalized(spec, g).radius,
                cfg,
                n_starts=48,
            )
            for root in roots:
                if np.all(root < 0.0):
                    second = newton(spec, g, root, cfg)
                    if second.converged:
                        break
                    second = None
        if second is None:
            raise SolveFailedError("no strictly negative second solution found")

    separation = float(np.max(np.abs(second.solution - zero_report.solution)))
    if separation <= cfg.deflation_radius:
        raise MultiplicityFailureError(
            f"second solution coincides with zero within {cfg.deflation_radius:.3g}"
        )
    return [zero_report, second]
