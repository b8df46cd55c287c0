"""Digital adiabatic simulation along ``H(s) = (1 - s) H_i + s H_f``.

Errors are distances between pure-state projectors,
``sqrt(1 - |<a|b>|^2)``. The sweep propagates one state per schedule time
in a single pass over the path, so each ``H(a/M)`` is diagonalized once no
matter how many schedule times are requested.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hamiltonian import LayeredHamiltonian
from .linalg import DEFAULT_TOL, Tolerances, evolve_unitary, hermitian_eig, unitary_log
from .trotter import dense_hamiltonian, follow_eigenstate, scaling_fit

log = logging.getLogger(__name__)

TRACKING_GRID = 64


def _dense(h) -> np.ndarray:
    if isinstance(h, LayeredHamiltonian):
        return dense_hamiltonian(h)
    return np.asarray(h)


def _projector_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Column-wise ``sqrt(1 - |<a|b>|^2)``."""
    ov = np.abs(np.sum(a.conj() * b, axis=0)) ** 2
    return np.sqrt(np.clip(1.0 - ov, 0.0, 1.0))


# --------------------------------------------------------------------------
# evolution operators


def discretized_evolution(H_i, H_f, T: float, M: int) -> np.ndarray:
    """``U_M ... U_1`` with ``U_a = exp(-i (T/M) H(a/M))``."""
    if M < 1 or T <= 0:
        raise ValueError("need M >= 1 and T > 0")
    hi, hf = _dense(H_i), _dense(H_f)
    dt = T / M
    out = np.eye(hi.shape[0], dtype=complex)
    for a in range(1, M + 1):
        s = a / M
        out = evolve_unitary((1 - s) * hi + s * hf, dt) @ out
    return out


class _SplitStep:
    """``exp(-i dt (1-s) H_i) exp(-i dt s H_f)`` from fixed eigenbases."""

    def __init__(self, hi: np.ndarray, hf: np.ndarray):
        self.ei, self.vi = np.linalg.eigh(hi)
        self.ef, self.vf = np.linalg.eigh(hf)
        self.vi_h = self.vi.conj().T
        self.vf_h = self.vf.conj().T

    def operator(self, s: float, dt: float) -> np.ndarray:
        ui = (self.vi * np.exp(-1j * dt * (1 - s) * self.ei)) @ self.vi_h
        uf = (self.vf * np.exp(-1j * dt * s * self.ef)) @ self.vf_h
        return ui @ uf

    def apply(self, states: np.ndarray, s: float, dts: np.ndarray) -> np.ndarray:
        """Apply the step to each column, column ``j`` using step size ``dts[j]``."""
        x = self.vf_h @ states
        x *= np.exp(-1j * s * np.outer(self.ef, dts))
        x = self.vi_h @ (self.vf @ x)
        x *= np.exp(-1j * (1 - s) * np.outer(self.ei, dts))
        return self.vi @ x


def trotterized_evolution(H_i, H_f, T: float, M: int) -> np.ndarray:
    """``U^t(M/M) ... U^t(1/M)`` with ``U^t(s) = exp(-i dt (1-s) H_i) exp(-i dt s H_f)``."""
    if M < 1 or T <= 0:
        raise ValueError("need M >= 1 and T > 0")
    step = _SplitStep(_dense(H_i), _dense(H_f))
    dt = T / M
    out = np.eye(step.ei.shape[0], dtype=complex)
    for a in range(1, M + 1):
        out = step.operator(a / M, dt) @ out
    return out


def effective_h_of_s(H_i, H_f, s: float, dtbar: float, tol: Tolerances = DEFAULT_TOL
                     ) -> np.ndarray:
    """Generator of one split step: ``i log(U^t(s)) / dtbar``."""
    step = _SplitStep(_dense(H_i), _dense(H_f))
    return unitary_log(step.operator(s, dtbar), dtbar, tol)


def propagate_discretized(H_i, H_f, psi: np.ndarray, T_values: Sequence[float], M: int
                          ) -> np.ndarray:
    """Columns ``A_d(T) psi`` for every ``T`` in ``T_values``."""
    hi, hf = _dense(H_i), _dense(H_f)
    dts = np.asarray(T_values, dtype=float) / M
    states = np.repeat(np.asarray(psi, dtype=complex)[:, None], len(dts), axis=1)
    for a in range(1, M + 1):
        s = a / M
        e, v = np.linalg.eigh((1 - s) * hi + s * hf)
        x = v.conj().T @ states
        x *= np.exp(-1j * np.outer(e, dts))
        states = v @ x
    return states


def propagate_trotterized(H_i, H_f, psi: np.ndarray, T_values: Sequence[float], M: int
                          ) -> np.ndarray:
    """Columns ``A_t(T) psi`` for every ``T`` in ``T_values``."""
    step = _SplitStep(_dense(H_i), _dense(H_f))
    dts = np.asarray(T_values, dtype=float) / M
    states = np.repeat(np.asarray(psi, dtype=complex)[:, None], len(dts), axis=1)
    for a in range(1, M + 1):
        states = step.apply(states, a / M, dts)
    return states


# --------------------------------------------------------------------------
# error suite


@dataclass(frozen=True)
class DASRecord:
    T: float
    M: int
    eps_adb_d: float
    eps_tro: float
    eps_tot_d: float
    eps_dis_proxy: float

    def as_row(self) -> list:
        return [self.T, self.M, self.eps_adb_d, self.eps_tro, self.eps_tot_d, self.eps_dis_proxy]


CSV_COLUMNS = ("T", "M", "eps_adb_d", "eps_tro", "eps_tot_d", "eps_dis_proxy")


@dataclass(frozen=True)
class SweepResult:
    records: tuple[DASRecord, ...]
    turning_point_T: float
    slope_adb: float
    slope_adb_r2: float


def endpoint_states(H_i, H_f, k: int = 0, grid: int = TRACKING_GRID):
    """Eigenstate ``k`` of ``H_i`` and its adiabatic continuation at ``H_f``.

    Returns ``(psi_i, psi_f, min_gap)``.
    """
    hi, hf = _dense(H_i), _dense(H_f)
    path = lambda s: (1 - s) * hi + s * hf  # noqa: E731
    indices, gaps, final = follow_eigenstate(path, np.linspace(0.0, 1.0, grid), k)
    psi_i = hermitian_eig(hi).eigenvectors[:, k]
    psi_f = final.eigenvectors[:, indices[-1]]
    return psi_i, psi_f, float(gaps.min())


def das_records(H_i, H_f, T_values: Sequence[float], M: int, k: int = 0,
                M_ref: int | None = None) -> list[DASRecord]:
    T_values = [float(t) for t in T_values]
    if M < 1 or any(t <= 0 for t in T_values):
        raise ValueError("need M >= 1 and positive schedule times")
    M_ref = 4 * M if M_ref is None else M_ref
    psi_i, psi_f, _ = endpoint_states(H_i, H_f, k)
    disc = propagate_discretized(H_i, H_f, psi_i, T_values, M)
    trot = propagate_trotterized(H_i, H_f, psi_i, T_values, M)
    ref = propagate_discretized(H_i, H_f, psi_i, T_values, M_ref)
    target = psi_f[:, None]
    adb = _projector_distance(target, disc)
    tot = _projector_distance(target, trot)
    tro = _projector_distance(disc, trot)
    adb_ref = _projector_distance(target, ref)
    records = []
    for j, T in enumerate(T_values):
        records.append(DASRecord(T, M, float(adb[j]), float(tro[j]), float(tot[j]),
                                 float(abs(adb[j] - adb_ref[j]))))
        log.debug("T=%g eps_tro=%.3e  eps_tot-eps_adb=%.3e", T, tro[j], tot[j] - adb[j])
    return records


def das_error_suite(H_i, H_f, T: float, M: int, k: int = 0, M_ref: int | None = None
                    ) -> DASRecord:
    return das_records(H_i, H_f, [T], M, k, M_ref)[0]


def das_sweep(H_i, H_f, M: int, T_values: Sequence[float], k: int = 0,
              M_ref: int | None = None) -> SweepResult:
    """One DAS run per schedule time; turning point is the argmin of the total error."""
    T_values = [float(t) for t in T_values]
    if any(b <= a for a, b in zip(T_values, T_values[1:])):
        raise ValueError("T_values must be strictly increasing")
    records = das_records(H_i, H_f, T_values, M, k, M_ref)
    tot = [r.eps_tot_d for r in records]
    turn = int(np.argmin(tot))
    prefix = records[: turn + 1]
    if len(prefix) < 3:
        raise ValueError(
            f"only {len(prefix)} points precede the turning point; need 3 for the slope fit"
        )
    slope, r2 = scaling_fit([r.T for r in prefix], [r.eps_adb_d for r in prefix])
    return SweepResult(tuple(records), records[turn].T, slope, r2)


def even_grid(M: int, n_points: int = 50, lo_fraction: float = 1 / 50) -> np.ndarray:
    """``n_points`` evenly spaced schedule times on ``[M * lo_fraction, M]``."""
    return np.linspace(M * lo_fraction, M, n_points)


def min_path_gap(H_i, H_f, k: int = 0, grid: int = 201) -> float:
    hi, hf = _dense(H_i), _dense(H_f)
    _, gaps, _ = follow_eigenstate(lambda s: (1 - s) * hi + s * hf,
                                   np.linspace(0.0, 1.0, grid), k)
    return float(gaps.min())

