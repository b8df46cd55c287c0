"""Layered Pauli-string Hamiltonians and the benchmark models built from them.

Site 1 is the most significant qubit of the computational-basis index, so a
letter string ``"XZ"`` is the matrix ``kron(X, Z)``.

Layer order convention: ``layers[0]`` is ``H_1``. A Trotter step is
``exp(-i H_1 dt) exp(-i H_2 dt) ... exp(-i H_G dt)``, i.e. ``H_G`` acts on the
state first and ``H_1`` last. With this order the leading correction to the
effective Hamiltonian is ``(i dt / 2) sum_{l>m} [H_l, H_m]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .linalg import commutator, operator_norm

PAULI_LETTERS = "IXYZ"
DEFAULT_MAX_SITES = 12
DEFAULT_LAMBDA = (0.7, -0.3, 1.9, -1.1)


class SiteCapError(ValueError):
    pass


@dataclass(frozen=True)
class PauliTerm:
    coefficient: float
    letters: str

    def __post_init__(self):
        if not math.isfinite(self.coefficient):
            raise ValueError(f"non-finite coefficient {self.coefficient!r}")
        bad = set(self.letters) - set(PAULI_LETTERS)
        if bad or not self.letters:
            raise ValueError(f"invalid Pauli string {self.letters!r}")

    @property
    def n_sites(self) -> int:
        return len(self.letters)


def pauli_commute(a: str, b: str) -> bool:
    """True when two Pauli strings commute (even number of clashing sites)."""
    clashes = sum(1 for x, y in zip(a, b) if x != "I" and y != "I" and x != y)
    return clashes % 2 == 0


@dataclass(frozen=True)
class Layer:
    terms: tuple[PauliTerm, ...]
    # Only the counterexample model needs a non-commuting layer.
    require_commuting: bool = True

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("a layer needs at least one term")
        n = self.terms[0].n_sites
        if any(t.n_sites != n for t in self.terms):
            raise ValueError("all terms in a layer must act on the same number of sites")
        if self.require_commuting:
            for s, t in combinations(self.terms, 2):
                if not pauli_commute(s.letters, t.letters):
                    raise ValueError(
                        f"terms {s.letters} and {t.letters} anticommute; they cannot share a layer"
                    )


@dataclass(frozen=True)
class LayeredHamiltonian:
    n_sites: int
    layers: tuple[Layer, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if self.n_sites < 1:
            raise ValueError("n_sites must be positive")
        if not self.layers:
            raise ValueError("at least one layer is required")
        for layer in self.layers:
            for t in layer.terms:
                if t.n_sites != self.n_sites:
                    raise ValueError(
                        f"term {t.letters!r} has length {t.n_sites}, expected {self.n_sites}"
                    )

    @property
    def complex_allowed(self) -> bool:
        return any("Y" in t.letters for layer in self.layers for t in layer.terms)

    @property
    def dim(self) -> int:
        return 2**self.n_sites

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    def terms(self):
        for layer in self.layers:
            yield from layer.terms

    @classmethod
    def from_terms(cls, n_sites: int, layered_terms: Sequence[Sequence[tuple[float, str]]],
                   require_commuting: bool = True) -> "LayeredHamiltonian":
        """Build from ``[[(coef, letters), ...], ...]``, one inner list per layer."""
        layers = [
            Layer(tuple(PauliTerm(float(c), s) for c, s in group), require_commuting)
            for group in layered_terms
        ]
        return cls(n_sites, tuple(layers))


def _is_real(terms) -> bool:
    return all(t.letters.count("Y") % 2 == 0 for t in terms)


def _add_pauli(out: np.ndarray, coefficient: float, letters: str) -> None:
    n = len(letters)
    dim = 2**n
    flip = 0
    phase_mask = 0
    n_y = 0
    for pos, ch in enumerate(letters):
        bit = 1 << (n - 1 - pos)
        if ch in "XY":
            flip |= bit
        if ch in "YZ":
            phase_mask |= bit
        if ch == "Y":
            n_y += 1
    cols = np.arange(dim)
    parity = np.zeros(dim, dtype=np.int64)
    m = cols & phase_mask
    while np.any(m):
        parity ^= m & 1
        m >>= 1
    sign = 1.0 - 2.0 * parity
    prefactor = (1j) ** n_y
    if out.dtype.kind != "c":
        prefactor = prefactor.real
    out[cols ^ flip, cols] += coefficient * prefactor * sign


def pauli_matrix(letters: str) -> np.ndarray:
    dtype = float if letters.count("Y") % 2 == 0 else complex
    out = np.zeros((2 ** len(letters),) * 2, dtype=dtype)
    _add_pauli(out, 1.0, letters)
    return out


def layer_matrix(layer: Layer, n_sites: int, dtype=complex) -> np.ndarray:
    out = np.zeros((2**n_sites,) * 2, dtype=dtype)
    for t in layer.terms:
        _add_pauli(out, t.coefficient, t.letters)
    return out


def build_dense(h: LayeredHamiltonian, max_sites: int = DEFAULT_MAX_SITES
                ) -> tuple[np.ndarray, list[np.ndarray]]:
    """Dense total Hamiltonian and the list of dense layers.

    Models whose terms all have an even number of ``Y`` letters are built with
    a real dtype.
    """
    if h.n_sites > max_sites:
        raise SiteCapError(f"{h.n_sites} sites exceeds the dense cap of {max_sites}")
    dtype = float if _is_real(h.terms()) else complex
    per_layer = [layer_matrix(layer, h.n_sites, dtype) for layer in h.layers]
    total = np.zeros_like(per_layer[0])
    for m in per_layer:
        total += m
    return total, per_layer


def dense(h: LayeredHamiltonian) -> np.ndarray:
    return build_dense(h)[0]


# --------------------------------------------------------------------------
# benchmark models


def _string(n: int, ops: dict[int, str]) -> str:
    return "".join(ops.get(j, "I") for j in range(n))


def tfim_pair(n_sites: int) -> tuple[LayeredHamiltonian, LayeredHamiltonian]:
    """``H_i = -sum X_j`` and ``H_f = -sum (Z_j + Z_j Z_{j+1})`` on an open chain."""
    if n_sites < 2:
        raise ValueError("tfim_pair needs at least 2 sites")
    n = n_sites
    h_i = [PauliTerm(-1.0, _string(n, {j: "X"})) for j in range(n)]
    h_f = [PauliTerm(-1.0, _string(n, {j: "Z"})) for j in range(n)]
    h_f += [PauliTerm(-1.0, _string(n, {j: "Z", j + 1: "Z"})) for j in range(n - 1)]
    return LayeredHamiltonian(n, (Layer(tuple(h_i)),)), LayeredHamiltonian(n, (Layer(tuple(h_f)),))


def tfim(n_sites: int, transverse: float = 1.0, longitudinal: float = 1.0,
         coupling: float = 1.0) -> LayeredHamiltonian:
    """Static open-chain Ising model split into an X layer and a Z layer.

    ``H = -g sum X_j - h sum Z_j - J sum Z_j Z_{j+1}``; the defaults give
    ``H_i + H_f`` of :func:`tfim_pair`.
    """
    if n_sites < 2:
        raise ValueError("tfim needs at least 2 sites")
    n = n_sites
    x_layer = [PauliTerm(-transverse, _string(n, {j: "X"})) for j in range(n)]
    z_layer = [PauliTerm(-longitudinal, _string(n, {j: "Z"})) for j in range(n)]
    z_layer += [PauliTerm(-coupling, _string(n, {j: "Z", j + 1: "Z"})) for j in range(n - 1)]
    return LayeredHamiltonian(n, (Layer(tuple(x_layer)), Layer(tuple(z_layer))))


def _bond_projector_terms(n: int, j: int) -> list[PauliTerm]:
    # (I - SWAP)/2 = (II - XX - YY - ZZ)/4 on sites j, j+1
    terms = [PauliTerm(0.25, "I" * n)]
    for p in "XYZ":
        terms.append(PauliTerm(-0.25, _string(n, {j: p, j + 1: p})))
    return terms


def heisenberg_ff(n_sites: int) -> LayeredHamiltonian:
    """Ferromagnetic Heisenberg chain ``sum_j (I - SWAP_{j,j+1})/2``.

    Frustration free: ``|0...0>`` is annihilated by every bond. Bonds are
    split into an odd-bond layer and an even-bond layer.
    """
    if n_sites < 3:
        raise ValueError("heisenberg_ff needs at least 3 sites")
    odd, even = [], []
    for j in range(n_sites - 1):
        (odd if j % 2 == 0 else even).extend(_bond_projector_terms(n_sites, j))
    return LayeredHamiltonian(n_sites, (Layer(tuple(odd)), Layer(tuple(even))))


def diagonal_pauli_terms(diag_values: Sequence[float]) -> list[PauliTerm]:
    """Expand a diagonal matrix on ``log2(len)`` qubits in ``I``/``Z`` strings."""
    values = np.asarray(diag_values, dtype=float)
    dim = len(values)
    n = dim.bit_length() - 1
    if 2**n != dim:
        raise ValueError("diagonal length must be a power of two")
    terms = []
    for mask in range(dim):
        letters = "".join("Z" if mask >> (n - 1 - p) & 1 else "I" for p in range(n))
        signs = np.diag(pauli_matrix(letters)).real
        c = float(signs @ values) / dim
        if c != 0.0:
            terms.append(PauliTerm(c, letters))
    return terms


def counterexample_model(diag_values: Sequence[float] = DEFAULT_LAMBDA) -> LayeredHamiltonian:
    """Three layers ``X(x)I``, ``Y(x)I`` and ``Lambda - X(x)I - Y(x)I`` summing to diagonal ``Lambda``."""
    values = np.asarray(diag_values, dtype=float)
    if values.shape != (4,):
        raise ValueError("counterexample needs exactly 4 diagonal values")
    gaps = np.abs(values[:, None] - values[None, :])[np.triu_indices(4, 1)]
    if np.min(gaps) < 1e-8:
        raise ValueError(f"diagonal values must be distinct, got {values.tolist()}")
    h1 = Layer((PauliTerm(1.0, "XI"),))
    h2 = Layer((PauliTerm(1.0, "YI"),))
    rest = diagonal_pauli_terms(values) + [PauliTerm(-1.0, "XI"), PauliTerm(-1.0, "YI")]
    h3 = Layer(tuple(rest), require_commuting=False)
    return LayeredHamiltonian(2, (h1, h2, h3))


def random_real_local(n_sites: int, seed: int) -> LayeredHamiltonian:
    """Random open-chain model built from X, Z, XX, ZZ and XZ terms only.

    Layers: all X-type terms, all Z-type terms, XZ on odd bonds, XZ on even
    bonds. Coefficients are uniform in [-1, 1].
    """
    if n_sites < 2:
        raise ValueError("random_real_local needs at least 2 sites")
    rng = np.random.default_rng(seed)
    n = n_sites
    bonds = range(n - 1)
    x_layer = [PauliTerm(rng.uniform(-1, 1), _string(n, {j: "X"})) for j in range(n)]
    x_layer += [PauliTerm(rng.uniform(-1, 1), _string(n, {j: "X", j + 1: "X"})) for j in bonds]
    z_layer = [PauliTerm(rng.uniform(-1, 1), _string(n, {j: "Z"})) for j in range(n)]
    z_layer += [PauliTerm(rng.uniform(-1, 1), _string(n, {j: "Z", j + 1: "Z"})) for j in bonds]
    xz = [PauliTerm(rng.uniform(-1, 1), _string(n, {j: "X", j + 1: "Z"})) for j in bonds]
    layers = [Layer(tuple(x_layer)), Layer(tuple(z_layer)), Layer(tuple(xz[0::2]))]
    if xz[1::2]:
        layers.append(Layer(tuple(xz[1::2])))
    return LayeredHamiltonian(n, tuple(layers))


def nearest_neighbor_chain(n_sites: int, seed: int, layering: str = "bonds") -> LayeredHamiltonian:
    """Random complex nearest-neighbour chain.

    Each bond carries ``a X Y + b Y X + c Z Z``. ``layering="bonds"`` puts one
    bond per layer in chain order (only neighbouring layers fail to commute);
    ``layering="even_odd"`` groups the bonds into two layers.
    """
    if n_sites < 3:
        raise ValueError("nearest_neighbor_chain needs at least 3 sites")
    rng = np.random.default_rng(seed)
    n = n_sites
    bond_terms = []
    for j in range(n - 1):
        a, b, c = rng.uniform(-1, 1, size=3)
        bond_terms.append([
            PauliTerm(a, _string(n, {j: "X", j + 1: "Y"})),
            PauliTerm(b, _string(n, {j: "Y", j + 1: "X"})),
            PauliTerm(c, _string(n, {j: "Z", j + 1: "Z"})),
        ])
    if layering == "bonds":
        layers = [Layer(tuple(t)) for t in bond_terms]
    elif layering == "even_odd":
        layers = [
            Layer(tuple(t for terms in bond_terms[0::2] for t in terms)),
            Layer(tuple(t for terms in bond_terms[1::2] for t in terms)),
        ]
    else:
        raise ValueError(f"unknown layering {layering!r}")
    return LayeredHamiltonian(n, tuple(layers))


# --------------------------------------------------------------------------
# commutator constants


@dataclass(frozen=True)
class InteractionConstants:
    """Commutator norms feeding the error bounds.

    ``C0``, ``C1``, ``C2`` and ``D`` describe an interpolation pair and are
    ``None`` when no second Hamiltonian was supplied.
    """

    alpha: float
    beta: float
    normH: float
    C0: float | None = None
    C1: float | None = None
    C2: float | None = None
    D: float | None = None


def layer_alpha_beta(layers: Sequence[np.ndarray]) -> tuple[float, float]:
    alpha = 0.0
    beta = 0.0
    g = len(layers)
    for n in range(g):
        for m in range(n):
            c = commutator(layers[n], layers[m])
            alpha += operator_norm(c)
            for l in range(n, g):
                beta += operator_norm(commutator(layers[l], c))
    return alpha, beta


def interaction_constants(a: LayeredHamiltonian, b: LayeredHamiltonian | None = None
                          ) -> InteractionConstants:
    total, layers = build_dense(a)
    alpha, beta = layer_alpha_beta(layers)
    norm_h = operator_norm(total)
    if b is None:
        return InteractionConstants(alpha, beta, norm_h)
    other = dense(b)
    c1_op = commutator(total, other)
    return InteractionConstants(
        alpha=alpha,
        beta=beta,
        normH=norm_h,
        C0=norm_h,
        C1=operator_norm(c1_op),
        C2=operator_norm(commutator(total, c1_op)),
        D=operator_norm(total - other),
    )
