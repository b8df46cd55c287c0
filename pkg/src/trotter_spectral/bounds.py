"""Closed-form evaluators for the Trotter error bounds.

Every evaluator returns a :class:`BoundReport`. Expressions that are rigorous
inequalities carry ``rigor="certified"``; asymptotic statements are evaluated
with unit constants and carry ``rigor="big-O"``. A violated precondition never
suppresses the value, it only marks the report as non-rigorous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, special

from .hamiltonian import InteractionConstants
from .trotter import DegenerateSpectrumError, follow_eigenstate

CERTIFIED = "certified"
BIG_O = "big-O"


class GaplessError(ValueError):
    pass


@dataclass(frozen=True)
class BoundReport:
    name: str
    value: float
    inputs: dict = field(default_factory=dict)
    violations: tuple[str, ...] = ()
    rigor: str = CERTIFIED

    @property
    def preconditions_met(self) -> bool:
        return not self.violations

    @property
    def rigorous(self) -> bool:
        return self.rigor == CERTIFIED and self.preconditions_met

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "inputs": dict(sorted(self.inputs.items())),
            "preconditions_met": self.preconditions_met,
            "violations": list(self.violations),
            "rigor": self.rigor,
        }


def _require_pair(consts: InteractionConstants) -> None:
    if None in (consts.C0, consts.C1, consts.C2, consts.D):
        raise ValueError("constants were computed without a second Hamiltonian (C0..D missing)")


# --------------------------------------------------------------------------
# static Trotter step


def magnus_h(consts: InteractionConstants, dt: float) -> BoundReport:
    """Bound on the derivative of the effective Hamiltonian along the step size."""
    a, b, nh = consts.alpha, consts.beta, consts.normH
    value = a / 2 + 4.0 / 3.0 * (b + 128 * a * nh) * dt
    violations = []
    if dt * nh >= 0.25:
        violations.append(f"dt*||H|| = {dt * nh:.4g} >= 1/4")
    return BoundReport("magnus_h", value, {"alpha": a, "beta": b, "normH": nh, "dt": dt},
                       tuple(violations))


def magnus_static_bound(consts: InteractionConstants, dt: float) -> BoundReport:
    """Ceiling on ``||H_eff - H||``: ``alpha dt/2 + dt^2 (beta + 32 alpha ||H||)``."""
    a, b, nh = consts.alpha, consts.beta, consts.normH
    value = a * dt / 2 + dt**2 * (b + 32 * a * nh)
    violations = []
    if dt * nh >= 0.25:
        violations.append(f"dt*||H|| = {dt * nh:.4g} >= 1/4")
    return BoundReport("magnus_static_bound", value,
                       {"alpha": a, "beta": b, "normH": nh, "dt": dt}, tuple(violations))


def corollary1_bounds(h: float, lam: float, dt: float, L: int) -> tuple[BoundReport, BoundReport]:
    """Phase and fidelity error scales for an eigenstate input (unit constants)."""
    if lam <= 0:
        raise ValueError("spectral gap must be positive")
    theta = L * h * dt**2
    f = min((h * dt / lam) ** 2, (L * h * dt**2) ** 2)
    inputs = {"h": h, "lambda": lam, "dt": dt, "L": L}
    return (BoundReport("corollary1_theta", theta, inputs, rigor=BIG_O),
            BoundReport("corollary1_f", f, inputs, rigor=BIG_O))


def lemma3_energy_bound(consts: InteractionConstants, V_norm: float, lam: float,
                        dt: float) -> BoundReport:
    """Energy-shift ceiling when the leading correction is off-diagonal."""
    s = dt
    nh = consts.normH
    chain = (V_norm**2 * nh * s**2 / lam**2
             + 2 * V_norm**2 * s**2 / lam
             + V_norm**3 * s**3 / lam**2)
    correction = dt**2 * (consts.beta + 32 * consts.alpha * nh)
    violations = []
    if V_norm * dt >= lam:
        violations.append(f"||V|| dt = {V_norm * dt:.4g} >= lambda = {lam:.4g}")
    return BoundReport(
        "lemma3_energy_bound",
        chain + correction,
        {"V_norm": V_norm, "lambda": lam, "dt": dt, "normH": nh, "alpha": consts.alpha,
         "beta": consts.beta, "chain": chain, "second_order": correction},
        tuple(violations),
    )


# --------------------------------------------------------------------------
# adiabatic theorem


def track_gaps(hamiltonian_at: Callable[[float], np.ndarray], grid: np.ndarray, k: int = 0
               ) -> np.ndarray:
    """Gap around the eigenstate continued from level ``k`` at ``grid[0]``."""
    try:
        _, gaps, _ = follow_eigenstate(hamiltonian_at, grid, k)
    except DegenerateSpectrumError as exc:
        raise GaplessError(str(exc)) from exc
    if gaps.min() < 1e-8:
        raise GaplessError(f"gap collapses to {gaps.min():.3e}")
    return gaps


def adiabatic_G(hamiltonian_at: Callable[[float], np.ndarray], T: float, grid: int = 201,
                d1: Callable[[float], float] | None = None,
                d2: Callable[[float], float] | None = None,
                k: int = 0, gaps: np.ndarray | None = None) -> BoundReport:
    """Adiabatic-theorem error ceiling for the path ``s -> H(s)``.

    ``d1`` and ``d2`` give ``||H'(s)||`` and ``||H''(s)||``; by default they
    are taken from the linear interpolation between the path endpoints.
    The integral uses the trapezoid rule on a uniform grid.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    s = np.linspace(0.0, 1.0, grid)
    if d1 is None or d2 is None:
        slope = np.linalg.norm(hamiltonian_at(1.0) - hamiltonian_at(0.0), 2)
        d1 = d1 or (lambda _s: slope)
        d2 = d2 or (lambda _s: 0.0)
    lam = track_gaps(hamiltonian_at, s, k) if gaps is None else np.asarray(gaps, dtype=float)
    h1 = np.array([d1(x) for x in s])
    h2 = np.array([d2(x) for x in s])
    boundary = h1[0] / lam[0] ** 2 + h1[-1] / lam[-1] ** 2
    integrand = h2 / lam**2 + 7 * h1**2 / lam**3
    value = (boundary + integrate.trapezoid(integrand, s)) / T
    return BoundReport("adiabatic_G", float(value),
                       {"T": T, "grid": grid, "min_gap": float(lam.min())})


def linear_path(h_i: np.ndarray, h_f: np.ndarray) -> Callable[[float], np.ndarray]:
    return lambda s: (1 - s) * h_i + s * h_f


# --------------------------------------------------------------------------
# derivative bounds for the Trotterized interpolation


def F0(x: float) -> float:
    return 1.0 / (1.0 - x)


def F1(x: float) -> float:
    return 1.0 if x == 0 else -math.log1p(-x) / x


def F2(x: float) -> float:
    """``sum_{j>=2} x^j / j^2``, i.e. ``Li2(x) - x``."""
    return float(special.spence(1.0 - x)) - x


ENVELOPES = {
    "F0": lambda x: 1 + 2 * x,
    "F1": lambda x: 1 + x,
    "F2": lambda x: x**2 / 2 * (1 + x),
}


def appF_derivative_bounds(consts: InteractionConstants, t: float
                           ) -> tuple[BoundReport, BoundReport]:
    """Ceilings on ``||H_eff'(s)||`` and ``||H_eff''(s)||`` for step size ``t``."""
    _require_pair(consts)
    c0, c1, c2, d = consts.C0, consts.C1, consts.C2, consts.D
    growth = (2 * c0 + 3 * d) * t
    first = d + c1 * t * (1 + 2 * d * t)
    d1 = first * (1 + growth)
    violations = []
    if t * d >= 0.25:
        violations.append(f"t*D = {t * d:.4g} >= 1/4")
    if growth >= 1:
        violations.append(f"(2 C0 + 3 D) t = {growth:.4g} >= 1")
        d2 = math.inf
    else:
        d2 = ((c1 * t + 4 * c1**2 * t**3 + 2 * d * c2 * t**3) * (1 + growth)
              + 2 * t * first**2 / (1 - growth))
    inputs = {"C0": c0, "C1": c1, "C2": c2, "D": d, "t": t}
    v = tuple(violations)
    return (BoundReport("appF_d1", d1, inputs, v), BoundReport("appF_d2", d2, inputs, v))


# --------------------------------------------------------------------------
# digital adiabatic simulation


def das_bound_report(consts: InteractionConstants, T: float, M: int, lam: float) -> BoundReport:
    """Leading-order ceiling on the total DAS error.

    The headline value is ``7 (D + 3 C1 T / (2M))^2 / (T lambda^3)``, whose
    minimum over ``T`` sits exactly at ``2 M D / (3 C1)``. The unsimplified
    envelope with the ``[1 + (2 C0 + 3 D) T/M]^2`` factor is kept in
    ``inputs["envelope"]``.
    """
    _require_pair(consts)
    if T <= 0 or M <= 0 or lam <= 0:
        raise ValueError("T, M and lambda must be positive")
    c0, c1, d = consts.C0, consts.C1, consts.D
    ratio = T / M
    lead = 7 * (d + 3 * c1 * ratio / 2) ** 2 / (T * lam**3)
    envelope = lead * (1 + (2 * c0 + 3 * d) * ratio) ** 2
    violations = []
    if (c0 + 1.5 * d) * T >= M / 4:
        violations.append(f"(C0 + 3D/2) T = {float((c0 + 1.5 * d) * T):.4g} >= M/4 = {M / 4:.4g}")
    if d / lam < 10:
        violations.append(f"D/lambda = {float(d / lam):.4g} is not >> 1")
    return BoundReport(
        "das_bound",
        lead,
        {"C0": c0, "C1": c1, "D": d, "T": T, "M": M, "lambda": lam,
         "envelope": envelope,
         "adiabatic_term": d**2 / (T * lam**3),
         "trotter_term": c1**2 * T / (M**2 * lam**3)},
        tuple(violations),
        rigor=BIG_O,
    )


def tc_optimal(consts: InteractionConstants, M: int, lam: float = 1.0):
    """Balanced schedule time ``T_c = 2 M D / (3 C1)`` and the bound there.

    Exact for ``fractions.Fraction`` inputs.
    """
    _require_pair(consts)
    if M <= 0:
        raise ValueError("M must be positive")
    c0, c1, d = consts.C0, consts.C1, consts.D
    t_c = 2 * M * d / (3 * c1)
    report = das_bound_report(consts, t_c, M, lam)
    violations = list(report.violations)
    if (8 * c0 + 12 * d) * d > 3 * c1:
        violations.append(f"(8 C0 + 12 D) D = {float((8 * c0 + 12 * d) * d):.4g} > 3 C1 = {float(3 * c1):.4g}")
    eps = BoundReport("eps_opt", report.value, {**report.inputs, "T_c": t_c},
                      tuple(violations), rigor=BIG_O)
    return t_c, eps


# --------------------------------------------------------------------------
# phase estimation budget


def qpe_requirements(xi: float, t0: float, n_sites: int, lam: float,
                     condition_holds: bool) -> dict[str, BoundReport]:
    """Step size, step count and circuit depth keeping the Trotter phase below ``xi``."""
    if min(xi, t0, lam) <= 0 or n_sites <= 0:
        raise ValueError("xi, t0, n_sites and lambda must be positive")
    n = n_sites
    inputs = {"xi": xi, "t0": t0, "N": n, "lambda": lam, "condition_holds": condition_holds}
    if condition_holds:
        widen = max(1.0, 1.0 / lam)
        dt = math.sqrt(xi / t0) * min(1.0, lam) / n
        steps = n * math.sqrt(t0**3 / xi) * widen
        depth = math.sqrt((n * t0 / xi) ** 3) * widen
    else:
        dt = xi / (n * t0)
        steps = n * t0**2 / xi
        depth = (n * t0 / xi) ** 2
    return {
        "dt": BoundReport("qpe_dt", dt, inputs, rigor=BIG_O),
        "L": BoundReport("qpe_L", steps, inputs, rigor=BIG_O),
        "depth": BoundReport("qpe_depth", depth, inputs, rigor=BIG_O),
    }
