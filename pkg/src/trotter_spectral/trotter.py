"""First-order product formula, effective Hamiltonian and error decomposition."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import stats

from .hamiltonian import LayeredHamiltonian, build_dense
from .linalg import (
    DEFAULT_TOL,
    BranchAmbiguityError,
    Spectrum,
    Tolerances,
    check_state,
    commutator,
    evolve_unitary,
    hermitian_eig,
    operator_norm,
    unitary_log,
)

log = logging.getLogger(__name__)


class DegenerateSpectrumError(ValueError):
    pass


class PairingAmbiguityError(ValueError):
    pass


class SubspaceTrackingError(ValueError):
    pass


@lru_cache(maxsize=16)
def _dense_model(h: LayeredHamiltonian):
    total, layers = build_dense(h)
    return total, tuple(layers), tuple(hermitian_eig(m) for m in layers)


def dense_hamiltonian(h: LayeredHamiltonian) -> np.ndarray:
    return _dense_model(h)[0]


def model_spectrum(h: LayeredHamiltonian) -> Spectrum:
    return hermitian_eig(dense_hamiltonian(h))


def trotter_step(h: LayeredHamiltonian, dt: float) -> np.ndarray:
    """``T(dt) = exp(-i H_1 dt) exp(-i H_2 dt) ... exp(-i H_G dt)``."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    _, layers, spectra = _dense_model(h)
    out = None
    for m, sp in zip(layers, spectra):
        u = evolve_unitary(m, dt, spectrum=sp)
        out = u if out is None else out @ u
    return out


def trotter_power(h: LayeredHamiltonian, dt: float, L: int) -> np.ndarray:
    if L < 0:
        raise ValueError("L must be non-negative")
    if L == 0:
        return np.eye(h.dim, dtype=complex)
    return np.linalg.matrix_power(trotter_step(h, dt), L)


def leading_correction(h: LayeredHamiltonian) -> np.ndarray:
    """``(i/2) sum_{l>m} [H_l, H_m]``, the first-order term of ``H_eff - H`` per unit ``dt``."""
    _, layers, _ = _dense_model(h)
    v = np.zeros((h.dim, h.dim), dtype=complex)
    for l in range(len(layers)):
        for m in range(l):
            v += commutator(layers[l], layers[m])
    return 0.5j * v


def effective_hamiltonian(h: LayeredHamiltonian, dt: float, tol: Tolerances = DEFAULT_TOL
                          ) -> np.ndarray:
    """Hermitian generator of one Trotter step: ``T(dt) = exp(-i H_eff dt)``."""
    return unitary_log(trotter_step(h, dt), dt, tol)


# --------------------------------------------------------------------------
# error decomposition


@dataclass(frozen=True)
class TrotterErrorReport:
    f: float
    theta: float
    delta: float
    euclid: float
    L: int
    dt: float
    t: float
    # True when the accumulated energy shift exceeds pi, so theta has wrapped;
    # None when the effective Hamiltonian could not be formed.
    phase_wound: bool | None = None

    def sandwich(self) -> tuple[float, float, float]:
        """``(f + theta^2/4, euclid^2, 2 f + theta^2)``."""
        return self.f + self.theta**2 / 4, self.euclid**2, 2 * self.f + self.theta**2

    def sandwich_holds(self, slack: float = 1e-9) -> bool:
        lo, mid, hi = self.sandwich()
        return lo <= mid + slack and mid <= hi + slack


def error_decomposition(h: LayeredHamiltonian, dt: float, L: int, psi: np.ndarray,
                        check_winding: bool = False) -> TrotterErrorReport:
    """Fidelity error, phase error, operator-norm and Euclidean errors of ``T(dt)^L psi``."""
    if L < 0:
        raise ValueError("L must be non-negative")
    psi = np.asarray(psi, dtype=complex)
    check_state(psi)
    if psi.shape != (h.dim,):
        raise ValueError(f"state has dimension {psi.shape[0]}, model has {h.dim}")
    t = L * dt
    if L == 0:
        return TrotterErrorReport(0.0, 0.0, 0.0, 0.0, 0, dt, 0.0, False)
    total = dense_hamiltonian(h)
    exact = evolve_unitary(total, t)
    trot = trotter_power(h, dt, L)
    diff = trot - exact
    amp = np.vdot(exact @ psi, trot @ psi)
    f = float(min(1.0, max(0.0, 1.0 - abs(amp) ** 2)))
    wound = None
    if check_winding:
        try:
            h_eff = effective_hamiltonian(h, dt)
            shift = np.vdot(psi, (h_eff - total) @ psi).real
            wound = bool(abs(shift) * t > math.pi)
        except BranchAmbiguityError:
            wound = None
    return TrotterErrorReport(
        f=f,
        theta=float(np.angle(amp)),
        delta=operator_norm(diff),
        euclid=float(np.linalg.norm(diff @ psi)),
        L=L,
        dt=dt,
        t=t,
        phase_wound=wound,
    )


# --------------------------------------------------------------------------
# spectral comparison


@dataclass(frozen=True)
class SpectralPair:
    E: float
    E_tilde: float
    overlap: float  # |<psi_k|psi~_j>|
    gap: float

    @property
    def shift(self) -> float:
        return self.E_tilde - self.E


@dataclass(frozen=True)
class SpectralComparison:
    pairs: tuple[SpectralPair, ...]
    matching: tuple[int, ...]

    @property
    def max_shift(self) -> float:
        return max(abs(p.shift) for p in self.pairs)

    @property
    def is_sorted_identity(self) -> bool:
        return self.matching == tuple(range(len(self.matching)))


def _min_gap(evals: np.ndarray) -> float:
    return float(np.min(np.diff(evals))) if len(evals) > 1 else math.inf


def match_eigenbases(v: np.ndarray, w: np.ndarray, ambiguity: float = DEFAULT_TOL.ambiguity
                     ) -> tuple[np.ndarray, np.ndarray]:
    """Greedy bijection between two eigenbases by largest squared overlap.

    Returns ``(matching, overlaps)`` with ``matching[k] = j`` and
    ``overlaps[k] = |<v_k|w_j>|``.
    """
    ov = np.abs(v.conj().T @ w) ** 2
    n = ov.shape[0]
    if n > 1:
        top2 = np.sort(ov, axis=1)[:, -2:]
        bad = np.nonzero(top2[:, 1] - top2[:, 0] < ambiguity)[0]
        if bad.size:
            k = int(bad[0])
            raise PairingAmbiguityError(
                f"eigenvector {k} has two candidate partners with squared overlaps "
                f"{top2[k, 1]:.9f} and {top2[k, 0]:.9f}"
            )
    order = np.argsort(-ov, axis=None, kind="stable")
    matching = -np.ones(n, dtype=int)
    used = np.zeros(n, dtype=bool)
    remaining = n
    for flat in order:
        k, j = divmod(int(flat), n)
        if matching[k] < 0 and not used[j]:
            matching[k] = j
            used[j] = True
            remaining -= 1
            if remaining == 0:
                break
    return matching, np.sqrt(ov[np.arange(n), matching])


def spectral_comparison(H: np.ndarray, Htilde: np.ndarray, tol: Tolerances = DEFAULT_TOL
                        ) -> SpectralComparison:
    """Pair the eigenstates of ``H`` with those of ``Htilde`` by maximal overlap."""
    if H.shape != Htilde.shape:
        raise ValueError("operators differ in dimension")
    sp = hermitian_eig(H)
    sp_t = hermitian_eig(Htilde)
    if _min_gap(sp.eigenvalues) < tol.degeneracy:
        raise DegenerateSpectrumError(
            f"H has a degenerate level (minimum gap {_min_gap(sp.eigenvalues):.3e})"
        )
    matching, overlaps = match_eigenbases(sp.eigenvectors, sp_t.eigenvectors, tol.ambiguity)
    pairs = tuple(
        SpectralPair(
            E=float(sp.eigenvalues[k]),
            E_tilde=float(sp_t.eigenvalues[j]),
            overlap=float(min(1.0, overlaps[k])),
            gap=sp.gap(k),
        )
        for k, j in enumerate(matching)
    )
    return SpectralComparison(pairs, tuple(int(j) for j in matching))


def off_diagonal_residual(h: LayeredHamiltonian, tol: Tolerances = DEFAULT_TOL) -> float:
    """Largest diagonal element of the leading correction in the eigenbasis of ``H``.

    A value at rounding level certifies that the first-order energy shift
    vanishes for every eigenstate.
    """
    sp = model_spectrum(h)
    if _min_gap(sp.eigenvalues) < tol.degeneracy:
        raise DegenerateSpectrumError(
            f"H has a degenerate level (minimum gap {_min_gap(sp.eigenvalues):.3e})"
        )
    v = leading_correction(h)
    vecs = sp.eigenvectors
    diag = np.einsum("ik,ij,jk->k", vecs.conj(), v, vecs)
    return float(np.max(np.abs(diag)))


def follow_eigenstate(hamiltonian_at: Callable[[float], np.ndarray], grid: Sequence[float],
                      k: int = 0, tol: Tolerances = DEFAULT_TOL):
    """Continue eigenstate ``k`` of ``H(grid[0])`` along the grid by maximal overlap.

    Returns ``(indices, gaps, final_spectrum)`` where ``indices[i]`` is the
    level occupied at ``grid[i]`` and ``gaps[i]`` its distance to the nearest
    other level.
    """
    indices, gaps = [], []
    prev = None
    idx = k
    sp = None
    for s in grid:
        sp = hermitian_eig(hamiltonian_at(float(s)))
        if prev is not None:
            ov = np.abs(sp.eigenvectors.conj().T @ prev) ** 2
            order = np.argsort(-ov)
            if len(ov) > 1 and ov[order[0]] - ov[order[1]] < tol.ambiguity:
                raise PairingAmbiguityError(f"eigenstate continuation is ambiguous at s = {s:.6g}")
            idx = int(order[0])
        gap = sp.gap(idx)
        if gap < tol.degeneracy:
            raise DegenerateSpectrumError(f"tracked level is degenerate at s = {s:.6g} (gap {gap:.3e})")
        prev = sp.eigenvectors[:, idx]
        indices.append(idx)
        gaps.append(gap)
    return indices, np.array(gaps), sp


# --------------------------------------------------------------------------
# leakage


def effective_projector(h: LayeredHamiltonian, dt: float, subspace_indices: Iterable[int]
                        ) -> tuple[np.ndarray, np.ndarray]:
    """Projector on the chosen eigenstates of ``H`` and its effective-Hamiltonian partner.

    The partner spans the ``m`` eigenvectors of ``H_eff`` with the largest
    weight inside the original subspace.
    """
    idx = sorted(set(int(i) for i in subspace_indices))
    sp = model_spectrum(h)
    p = sp.projector(idx)
    m = len(idx)
    if m == h.dim:
        return p, np.eye(h.dim, dtype=complex)
    outside = [i for i in range(h.dim) if i not in idx]
    lam = min(abs(sp.eigenvalues[i] - sp.eigenvalues[j]) for i in idx for j in outside)
    if lam < DEFAULT_TOL.degeneracy:
        raise DegenerateSpectrumError("subspace is not separated from the rest of the spectrum")
    sp_t = hermitian_eig(effective_hamiltonian(h, dt))
    w = sp_t.eigenvectors
    weight = np.einsum("ij,ik,kj->j", w.conj(), p, w).real
    chosen = np.argsort(-weight, kind="stable")[:m]
    return p, sp_t.projector(chosen)


def projector_distance(h: LayeredHamiltonian, dt: float, subspace_indices: Iterable[int]) -> float:
    p, p_t = effective_projector(h, dt, subspace_indices)
    return operator_norm(p - p_t)


def leakage_rate(h: LayeredHamiltonian, dt: float, L: int, subspace_indices: Iterable[int],
                 rho: np.ndarray | None = None) -> float:
    """``1 - Tr(P T^L rho T^L^dagger)`` for an initial state supported on the subspace.

    ``rho`` defaults to the maximally mixed state on the subspace; a pure state
    may be passed as a vector.
    """
    idx = sorted(set(int(i) for i in subspace_indices))
    p, p_t = effective_projector(h, dt, idx)
    dp = operator_norm(p - p_t)
    if dp >= 1.0:
        raise SubspaceTrackingError(f"||P - P_eff|| = {dp:.6f} >= 1; subspace not tracked")
    if rho is None:
        rho = p / len(idx)
    else:
        rho = np.asarray(rho, dtype=complex)
        if rho.ndim == 1:
            rho = np.outer(rho, rho.conj())
        if abs(np.trace(p @ rho).real - 1.0) > 1e-9:
            raise ValueError("initial state is not supported on the subspace")
    u = trotter_power(h, dt, L)
    evolved = u @ rho @ u.conj().T
    return float(min(1.0, max(0.0, 1.0 - np.trace(p @ evolved).real)))


# --------------------------------------------------------------------------


def scaling_fit(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Least-squares exponent of ``y ~ x^p`` and the fit's ``r^2``."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.size < 3:
        raise ValueError("need at least 3 paired points")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("scaling_fit needs strictly positive data")
    res = stats.linregress(np.log(x), np.log(y))
    return float(res.slope), float(res.rvalue**2)
