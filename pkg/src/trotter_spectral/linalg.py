"""Dense complex linear algebra kernels.

Operators are plain ``numpy`` arrays of shape ``(dim, dim)`` and states are
1-d arrays of length ``dim``. Nothing here keeps state between calls.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by the whole package."""

    hermitian: float = 1e-10
    unitary: float = 1e-10
    normalization: float = 1e-10
    branch: float = 1e-6
    cluster: float = 1e-8
    degeneracy: float = 1e-8
    ambiguity: float = 1e-6


DEFAULT_TOL = Tolerances()


class NotHermitianError(ValueError):
    pass


class NotUnitaryError(ValueError):
    pass


class BranchAmbiguityError(ValueError):
    """An eigenphase sits on the branch cut of the principal logarithm."""


class DimensionMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def gap(self, k: int) -> float:
        """Distance from level ``k`` to its nearest neighbouring level."""
        e = self.eigenvalues
        left = e[k] - e[k - 1] if k > 0 else np.inf
        right = e[k + 1] - e[k] if k < len(e) - 1 else np.inf
        return float(min(left, right))

    def projector(self, indices) -> np.ndarray:
        v = self.eigenvectors[:, list(indices)]
        return v @ v.conj().T


def asymmetry(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def check_hermitian(a: np.ndarray, tol: float = DEFAULT_TOL.hermitian) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    err = asymmetry(a)
    if err > tol:
        raise NotHermitianError(f"matrix is not Hermitian: max |A - A^dagger| = {err:.3e}")


def check_unitary(u: np.ndarray, tol: float = DEFAULT_TOL.unitary) -> None:
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {u.shape}")
    err = np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]), 2)
    if err > tol:
        raise NotUnitaryError(f"matrix is not unitary: ||U^dagger U - I|| = {err:.3e}")


def check_state(psi: np.ndarray, tol: float = DEFAULT_TOL.normalization) -> None:
    if psi.ndim != 1:
        raise DimensionMismatchError(f"state must be a 1-d vector, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"state is not normalized: ||psi|| = {norm!r}")


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # largest-magnitude component of each column made real positive
    idx = np.argmax(np.abs(vecs), axis=0)
    lead = vecs[idx, np.arange(vecs.shape[1])]
    return vecs * (np.abs(lead) / lead)[np.newaxis, :]


def hermitian_eig(a: np.ndarray, tol: float = DEFAULT_TOL.hermitian) -> Spectrum:
    """Eigendecomposition with ascending eigenvalues and a fixed phase convention."""
    a = np.asarray(a)
    check_hermitian(a, tol)
    evals, evecs = np.linalg.eigh(0.5 * (a + a.conj().T))
    return Spectrum(evals, _fix_phases(evecs.astype(complex)))


def evolve_unitary(a: np.ndarray, t: float, spectrum: Spectrum | None = None) -> np.ndarray:
    """``exp(-i t A)`` for Hermitian ``A``; pass ``spectrum`` to reuse a decomposition."""
    sp = spectrum if spectrum is not None else hermitian_eig(a)
    v = sp.eigenvectors
    return (v * np.exp(-1j * t * sp.eigenvalues)) @ v.conj().T


def unitary_eig(u: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenphases in (-pi, pi] and an orthonormal eigenbasis of a unitary.

    Uses the complex Schur form, which for a normal matrix is diagonal up to
    rounding, so the Schur vectors are already an orthonormal eigenbasis.
    """
    check_unitary(u, tol.unitary)
    tri, z = scipy.linalg.schur(u, output="complex")
    off = np.linalg.norm(np.triu(tri, 1))
    if off > 1e3 * tol.unitary * max(1, u.shape[0]):
        raise NotUnitaryError(f"Schur form not diagonal (off-diagonal norm {off:.3e})")
    return np.angle(np.diag(tri)), z


def unitary_log(u: np.ndarray, dt: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Hermitian ``H`` with ``exp(-i dt H) = U`` on the principal branch.

    Raises :class:`BranchAmbiguityError` when an eigenphase is within
    ``tol.branch`` of +-pi, which means ``dt`` is too large for ``H`` to be
    recovered unambiguously.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    phases, z = unitary_eig(u, tol)
    worst = np.max(np.abs(phases)) if phases.size else 0.0
    if np.pi - worst < tol.branch:
        raise BranchAmbiguityError(
            f"eigenphase {worst:.9f} is within {tol.branch:g} of pi; reduce dt (= {dt:g})"
        )
    h = (z * (-phases / dt)) @ z.conj().T
    return 0.5 * (h + h.conj().T)


def operator_norm(a: np.ndarray) -> float:
    """Largest singular value."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def state_overlap(a: np.ndarray, b: np.ndarray) -> complex:
    """``<a|b>``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"state shapes differ: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def basis_state(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v
