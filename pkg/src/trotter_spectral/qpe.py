"""Phase estimation with a Trotterized unitary.

Ideal QPE outcome statistics are computed analytically from eigenphases and
overlap weights instead of simulating the ancilla register.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hamiltonian import LayeredHamiltonian
from .linalg import evolve_unitary
from .trotter import (
    DegenerateSpectrumError,
    dense_hamiltonian,
    effective_hamiltonian,
    model_spectrum,
    spectral_comparison,
    trotter_power,
)

TWO_PI = 2 * math.pi


class QuadrantAmbiguityError(ValueError):
    pass


def wrap_phase(x):
    """Representative of ``x`` modulo 2 pi in (-pi, pi]."""
    y = np.mod(np.asarray(x, dtype=float) + math.pi, TWO_PI) - math.pi
    y = np.where(y == -math.pi, math.pi, y)
    return float(y) if np.ndim(y) == 0 else y


@dataclass(frozen=True)
class QPEOutcome:
    register_bits: int
    distribution: np.ndarray
    true_phases: tuple[float, ...]

    def phase_of(self, a: int) -> float:
        return a / 2**self.register_bits

    def nearest_outcome(self, phase: float) -> int:
        n = 2**self.register_bits
        return int(round(phase * n)) % n


def qpe_kernel_probability(phase: float, l: int) -> np.ndarray:
    """``|K_l(a, phase)|^2`` for every outcome ``a``; ``phase`` in turns."""
    n = 2**l
    delta = phase - np.arange(n) / n
    num = np.sin(math.pi * n * delta)
    den = np.sin(math.pi * delta)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = (num / (n * den)) ** 2
    on_grid = np.abs(den) < 1e-12
    p[on_grid] = 1.0
    return p


def qpe_distribution(eigenphases: Sequence[float], weights: Sequence[float], l: int
                     ) -> QPEOutcome:
    """Outcome distribution of an ``l``-bit ideal QPE on a superposition of eigenstates.

    ``eigenphases`` are in turns, i.e. ``U|k> = exp(2 pi i phi_k)|k>``.
    """
    phases = np.mod(np.asarray(eigenphases, dtype=float), 1.0)
    w = np.asarray(weights, dtype=float)
    if not 1 <= l <= 20:
        raise ValueError("register size l must be in [1, 20]")
    if phases.shape != w.shape:
        raise ValueError("eigenphases and weights differ in length")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-10:
        raise ValueError(f"weights must be a probability vector (sum {w.sum()!r})")
    dist = np.zeros(2**l)
    for phi, wk in zip(phases, w):
        dist += wk * qpe_kernel_probability(phi, l)
    dist /= dist.sum()
    return QPEOutcome(l, dist, tuple(float(p) for p in phases))


@dataclass(frozen=True)
class QPEShift:
    theta_exact: float
    theta_eff: float
    overlap_penalty: float
    L: int
    t0: float

    @property
    def phase_error(self) -> float:
        return abs(wrap_phase(self.theta_eff - self.theta_exact))


def qpe_trotter_shift(h: LayeredHamiltonian, dt: float, t0: float, k: int = 0) -> QPEShift:
    """Phase seen by QPE on ``T(dt)^L`` versus ``exp(-i H t0)`` for eigenstate ``k``.

    ``L = round(t0 / dt)``; the time actually used is ``L * dt`` and is
    returned as ``t0``.
    """
    if dt <= 0 or t0 <= 0:
        raise ValueError("dt and t0 must be positive")
    L = max(1, int(round(t0 / dt)))
    t = L * dt
    cmp = spectral_comparison(dense_hamiltonian(h), effective_hamiltonian(h, dt))
    pair = cmp.pairs[k]
    if pair.gap < 1e-8:
        raise DegenerateSpectrumError(f"level {k} is degenerate")
    return QPEShift(
        theta_exact=float(np.mod(pair.E * t, TWO_PI)),
        theta_eff=float(np.mod(pair.E_tilde * t, TWO_PI)),
        overlap_penalty=float(max(0.0, 1.0 - pair.overlap**2)),
        L=L,
        t0=t,
    )


@dataclass(frozen=True)
class RPEReading:
    P_alpha: float
    P_beta: float
    extracted_phase: float
    predicted_phase: float

    @property
    def error(self) -> float:
        return abs(wrap_phase(self.extracted_phase - self.predicted_phase))


def rpe_extract(h: LayeredHamiltonian, dt: float, L: int, idx0: int = 0, idx1: int = 1,
                exact: bool = False) -> RPEReading:
    """Single-round robust phase estimate of ``(E_1 - E_0) t`` with ``t = L dt``.

    With ``exact=True`` the exact propagator replaces ``T(dt)^L`` and the
    prediction uses the exact energies.
    """
    if idx0 == idx1:
        raise ValueError("idx0 and idx1 must differ")
    sp = model_spectrum(h)
    for idx in (idx0, idx1):
        if sp.gap(idx) < 1e-8:
            raise DegenerateSpectrumError(f"level {idx} is degenerate")
    t = L * dt
    psi0 = sp.eigenvectors[:, idx0]
    psi1 = sp.eigenvectors[:, idx1]
    alpha = (psi0 + psi1) / math.sqrt(2)
    beta = (psi0 + 1j * psi1) / math.sqrt(2)
    if exact:
        u = evolve_unitary(dense_hamiltonian(h), t)
        predicted = (sp.eigenvalues[idx1] - sp.eigenvalues[idx0]) * t
    else:
        u = trotter_power(h, dt, L)
        cmp = spectral_comparison(dense_hamiltonian(h), effective_hamiltonian(h, dt))
        predicted = (cmp.pairs[idx1].E_tilde - cmp.pairs[idx0].E_tilde) * t
    p_alpha = abs(np.vdot(alpha, u @ alpha)) ** 2
    p_beta = abs(np.vdot(alpha, u @ beta)) ** 2
    den = 2 * p_alpha - 1
    if abs(den) < 1e-8:
        raise QuadrantAmbiguityError(f"2 P_alpha - 1 = {den:.3e} is too close to zero")
    return RPEReading(
        P_alpha=float(p_alpha),
        P_beta=float(p_beta),
        extracted_phase=float(math.atan2(2 * p_beta - 1, den)),
        predicted_phase=wrap_phase(predicted),
    )
