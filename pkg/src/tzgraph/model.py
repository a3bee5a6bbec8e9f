"""Residual maps, homotopy deformations, Jacobians, and the energy functional.

Two equation kinds on a weighted graph, both driven by a positive field
``h1``, a field ``h2`` (sign unconstrained here; the theorems branch on
it), and exponents ``A, B > 0``:

    classic:      -laplacian(u) + h1 e^{A u}            + h2 e^{-B u}
    generalized:  -laplacian(u) + h1 e^{A u}(e^{A u}-1) + h2 e^{-B u}(e^{-B u}-1)

Each kind has a one-parameter deformation used for degree arguments and
continuation:

    classic:      coefficients slide to (eps, -eps) as t goes 0 -> 1, so the
                  original equation sits at t = 0 and the t = 1 member has
                  the unique solution u == 0;
    generalized:  the inner "-1" factors become "-t", so the original
                  equation sits at t = 1 and the t = 0 member has positive
                  pointwise terms and hence no solution at all.

The generalized kind is variational: the energy functional defined here
has the generalized residual as its gradient in the mu-weighted inner
product, which is why ``energy_gradient`` and ``residual`` share one code
path.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    ExponentOverflowError,
    HomotopyInfeasibleError,
    SpecValidationError,
)
from .graphs import WeightedGraph, as_field, integrate

__all__ = [
    "Kind",
    "ProblemSpec",
    "HomotopyParams",
    "residual",
    "residual_homotopy",
    "jacobian",
    "jacobian_homotopy",
    "energy",
    "energy_gradient",
    "default_epsilon",
    "validate_homotopy",
]

# exp() overflows just above 709; the squared-exponential terms of the
# generalized kind halve the usable range
EXP_CAP_CLASSIC = 700.0
EXP_CAP_GENERALIZED = 350.0


class Kind(str, enum.Enum):
    CLASSIC = "classic"
    GENERALIZED = "generalized"


@dataclass(frozen=True)
class ProblemSpec:
    """Equation kind, coefficient fields, and exponents.

    ``h1`` must be strictly positive everywhere for both kinds; no sign
    constraint is stored on ``h2``.
    """

    kind: Kind
    h1: np.ndarray
    h2: np.ndarray
    A: float
    B: float

    def __post_init__(self):
        h1 = np.array(self.h1, dtype=float)
        h2 = np.array(self.h2, dtype=float)
        if h1.ndim != 1 or h1.shape != h2.shape:
            raise SpecValidationError(
                f"coefficient fields must be 1-d and aligned, got {h1.shape} and {h2.shape}"
            )
        if not (np.all(np.isfinite(h1)) and np.all(np.isfinite(h2))):
            raise SpecValidationError("coefficient fields must be finite")
        if np.any(h1 <= 0.0):
            raise SpecValidationError("h1 must be strictly positive at every vertex")
        if not (self.A > 0.0 and self.B > 0.0):
            raise SpecValidationError("exponents A and B must be positive")
        h1.flags.writeable = False
        h2.flags.writeable = False
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "h2", h2)
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "A", float(self.A))
        object.__setattr__(self, "B", float(self.B))

    @property
    def n(self) -> int:
        return self.h1.size


@dataclass(frozen=True)
class HomotopyParams:
    """Deformation parameter, plus the coefficient shift used by the classic kind."""

    t: float
    epsilon: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise SpecValidationError(f"homotopy parameter t={self.t} outside [0, 1]")
        if self.epsilon is not None and not self.epsilon > 0.0:
            raise SpecValidationError("epsilon must be positive")


def default_epsilon(spec: ProblemSpec) -> float:
    """Feasible coefficient shift for the classic deformation.

    Any positive value keeps ``t*eps + (1-t)*h1 > 0``; staying well below
    both ``min h1`` and ``-max h2`` also keeps the shifted equation deep in
    the sign regime the uniqueness argument at t = 1 needs.
    """
    max_h2 = float(spec.h2.max())
    if max_h2 >= 0.0:
        raise HomotopyInfeasibleError(
            "classic deformation requires -t*eps + (1-t)*h2(x) < 0 for all t, "
            f"which fails at t=0 because max h2 = {max_h2:.6g} >= 0"
        )
    return min(float(spec.h1.min()), -max_h2) / 4.0


def validate_homotopy(spec: ProblemSpec, hp: HomotopyParams) -> None:
    """Check the sign constraints of the deformation for this spec.

    The classic constraints are convex in t, so the endpoints decide:
    ``t*eps + (1-t)*h1 > 0`` holds for any ``eps > 0`` given ``h1 > 0``,
    and ``-t*eps + (1-t)*h2 < 0`` for all t forces ``h2 < 0`` everywhere.
    """
    if spec.kind is Kind.GENERALIZED:
        return
    if hp.epsilon is None:
        raise SpecValidationError("classic deformation requires an epsilon")
    max_h2 = float(spec.h2.max())
    if max_h2 >= 0.0:
        raise HomotopyInfeasibleError(
            "classic deformation requires -t*eps + (1-t)*h2(x) < 0 for all t, "
            f"which fails at t=0 because max h2 = {max_h2:.6g} >= 0"
        )


def _check_spec_alignment(spec: ProblemSpec, g: WeightedGraph) -> None:
    if spec.n != g.n:
        raise SpecValidationError(
            f"coefficients have {spec.n} entries for a graph with {g.n} vertices"
        )


def _exponentials(spec: ProblemSpec, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """e^{A u} and e^{-B u} with a range guard instead of silent infinities."""
    cap = EXP_CAP_CLASSIC if spec.kind is Kind.CLASSIC else EXP_CAP_GENERALIZED
    up = spec.A * float(u.max())
    down = spec.B * float(-u.min())
    if up > cap or down > cap:
        raise ExponentOverflowError(
            f"exponent {max(up, down):.3g} exceeds the cap {cap:.0f}; "
            "the iterate has left the trusted range"
        )
    return np.exp(spec.A * u), np.exp(-spec.B * u)


def residual(spec: ProblemSpec, g: WeightedGraph, u) -> np.ndarray:
    """Pointwise residual of the equation at u (zero exactly at solutions)."""
    u = as_field(g, u)
    _check_spec_alignment(spec, g)
    e_up, e_dn = _exponentials(spec, u)
    if spec.kind is Kind.CLASSIC:
        nonlinear = spec.h1 * e_up + spec.h2 * e_dn
    else:
        nonlinear = spec.h1 * e_up * np.expm1(spec.A * u) + spec.h2 * e_dn * np.expm1(
            -spec.B * u
        )
    return g.neg_laplacian() @ u + nonlinear


def residual_homotopy(spec: ProblemSpec, g: WeightedGraph, u, hp: HomotopyParams) -> np.ndarray:
    """Residual of the deformed equation at parameter ``hp.t``.

    Classic: coefficients ``t*eps + (1-t)*h1`` and ``-t*eps + (1-t)*h2``
    (reduces to ``residual`` at t = 0).  Generalized: inner factors
    ``e^{A u} - t`` and ``e^{-B u} - t`` (reduces to ``residual`` at t = 1).
    """
    validate_homotopy(spec, hp)
    u = as_field(g, u)
    _check_spec_alignment(spec, g)
    e_up, e_dn = _exponentials(spec, u)
    t = hp.t
    if spec.kind is Kind.CLASSIC:
        c1 = t * hp.epsilon + (1.0 - t) * spec.h1
        c2 = -t * hp.epsilon + (1.0 - t) * spec.h2
        nonlinear = c1 * e_up + c2 * e_dn
    else:
        nonlinear = spec.h1 * e_up * (np.expm1(spec.A * u) + (1.0 - t)) + (
            spec.h2 * e_dn * (np.expm1(-spec.B * u) + (1.0 - t))
        )
    return g.neg_laplacian() @ u + nonlinear


def jacobian(spec: ProblemSpec, g: WeightedGraph, u) -> np.ndarray:
    """Derivative of the residual: ``-laplacian`` plus a pointwise diagonal."""
    u = as_field(g, u)
    _check_spec_alignment(spec, g)
    e_up, e_dn = _exponentials(spec, u)
    if spec.kind is Kind.CLASSIC:
        diag = spec.A * spec.h1 * e_up - spec.B * spec.h2 * e_dn
    else:
        diag = spec.h1 * spec.A * e_up * (2.0 * e_up - 1.0) + (
            spec.h2 * spec.B * e_dn * (1.0 - 2.0 * e_dn)
        )
    mat = g.neg_laplacian().copy()
    mat[np.diag_indices_from(mat)] += diag
    return mat


def jacobian_homotopy(spec: ProblemSpec, g: WeightedGraph, u, hp: HomotopyParams) -> np.ndarray:
    """Derivative of the deformed residual at parameter ``hp.t``."""
    validate_homotopy(spec, hp)
    u = as_field(g, u)
    _check_spec_alignment(spec, g)
    e_up, e_dn = _exponentials(spec, u)
    t = hp.t
    if spec.kind is Kind.CLASSIC:
        c1 = t * hp.epsilon + (1.0 - t) * spec.h1
        c2 = -t * hp.epsilon + (1.0 - t) * spec.h2
        diag = spec.A * c1 * e_up - spec.B * c2 * e_dn
    else:
        diag = spec.h1 * spec.A * e_up * (2.0 * e_up - t) + (
            spec.h2 * spec.B * e_dn * (t - 2.0 * e_dn)
        )
    mat = g.neg_laplacian().copy()
    mat[np.diag_indices_from(mat)] += diag
    return mat


def energy(spec: ProblemSpec, g: WeightedGraph, u) -> float:
    """Variational energy of the generalized equation.

        J(u) = (1/2) * integral of
               |grad u|^2 + (h1/A)(e^{A u}-1)^2 - (h2/B)(e^{-B u}-1)^2

    The single leading 1/2 covers the whole integrand; differentiating in
    the mu-weighted inner product then yields exactly the generalized
    residual, the identity the box minimization relies on.
    """
    if spec.kind is not Kind.GENERALIZED:
        raise SpecValidationError("the energy functional is defined for the generalized kind only")
    u = as_field(g, u)
    _check_spec_alignment(spec, g)
    _exponentials(spec, u)  # range guard; the squares below double exponents
    up = np.expm1(spec.A * u)
    dn = np.expm1(-spec.B * u)
    # integral of |grad u|^2 d(mu) collapses to a plain edge sum
    diff = u[g.edge_head] - u[g.edge_tail]
    dirichlet = float(np.dot(g.edge_weight, diff * diff))
    pointwise = spec.h1 / spec.A * up * up - spec.h2 / spec.B * dn * dn
    return 0.5 * (dirichlet + integrate(g, pointwise))


def energy_gradient(spec: ProblemSpec, g: WeightedGraph, u) -> np.ndarray:
    """Gradient of the energy in the mu-weighted inner product.

    Shares the residual's code path, so the two agree bitwise; exposed
    separately so minimization code depends only on the variational
    interface.
    """
    if spec.kind is not Kind.GENERALIZED:
        raise SpecValidationError("the energy functional is defined for the generalized kind only")
    return residual(spec, g, u)
