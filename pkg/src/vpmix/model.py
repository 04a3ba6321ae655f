"""Physical and effective Hamiltonians of the qubits-cavity system.

The full model is a generalized Dicke Hamiltonian for N two-level atoms with
symmetry-broken potentials coupled to one mode (hbar = 1, all frequencies in
units of a reference omega_0):

    H = sum_i (omega_i/2) sigma_z^(i) + omega_c a+ a
        + (a + a+) sum_i lam_i (cos(theta_i) sigma_x^(i) + sin(theta_i) sigma_z^(i))

theta_i mixes transverse and longitudinal coupling; theta_i = 0 conserves the
parity of qubit i.  The Tavis-Cummings variant keeps only the excitation-
conserving terms lam_i (a sigma_+^(i) + a+ sigma_-^(i)) and ignores theta.

Effective qubit-only Hamiltonians describe the resonant mixing processes that
the full model generates at fourth order: a two-qubit excitation swap, a
three-qubit down-conversion (one excitation splits into two), and the two
four-qubit variants (pair exchange, resonance omega_1+omega_2 = omega_3+omega_4;
cascade, resonance omega_4 = omega_1+omega_2+omega_3).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Z,
    HilbertLayout,
    Operator,
    cavity_annihilation,
    cavity_number,
    cavity_quadrature,
    embed_qubit_op,
)
from .errors import ConfigError, ResonantParameterError

__all__ = [
    "QubitParams",
    "SystemConfig",
    "MixKind",
    "bare_hamiltonian",
    "dicke_interaction",
    "tavis_cummings_interaction",
    "build_generalized_dicke",
    "build_tavis_cummings",
    "parity_operator",
    "dispersive_pair_coupling",
    "build_effective_mixing",
]


@dataclass(frozen=True)
class QubitParams:
    """One qubit: transition frequency, cavity coupling rate, coupling-mixing
    angle and decay rate, all in units of omega_0 (angle in radians)."""

    omega: float
    lam: float
    theta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if self.omega <= 0:
            raise ConfigError(f"qubit frequency must be positive, got {self.omega}")
        if self.lam < 0:
            raise ConfigError(f"coupling rate must be >= 0, got {self.lam}")
        if self.gamma < 0:
            raise ConfigError(f"decay rate must be >= 0, got {self.gamma}")


@dataclass(frozen=True)
class SystemConfig:
    """Full parameter set of the qubits-cavity system.

    All frequencies are unitless (expressed in omega_0).  ``fock_cutoff``
    bounds the photon ladder; 8 is adequate for every bundled scenario and 12
    is used for convergence checks.
    """

    qubits: tuple[QubitParams, ...]
    omega_c: float
    kappa: float = 0.0
    fock_cutoff: int = 8

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if len(self.qubits) < 1:
            raise ConfigError("need at least one qubit")
        if self.omega_c <= 0:
            raise ConfigError(f"cavity frequency must be positive, got {self.omega_c}")
        if self.kappa < 0:
            raise ConfigError(f"cavity decay rate must be >= 0, got {self.kappa}")
        if self.fock_cutoff < 1:
            raise ConfigError(f"fock_cutoff must be >= 1, got {self.fock_cutoff}")

    @property
    def qubit_count(self) -> int:
        return len(self.qubits)

    @property
    def layout(self) -> HilbertLayout:
        return HilbertLayout(self.qubit_count, self.fock_cutoff)


def bare_hamiltonian(config: SystemConfig) -> Operator:
    """Non-interacting part: sum_i (omega_i/2) sigma_z^(i) + omega_c a+ a.

    Diagonal in the bare product basis; its diagonal supplies the unperturbed
    energies used by the path enumerator.
    """
    layout = config.layout
    h = np.zeros((layout.dim, layout.dim), dtype=complex)
    for i, q in enumerate(config.qubits, start=1):
        h += 0.5 * q.omega * embed_qubit_op(layout, i, SIGMA_Z).mat
    h += config.omega_c * cavity_number(layout).mat
    return Operator(h, layout)


def dicke_interaction(config: SystemConfig) -> Operator:
    """Coupling term (a + a+) sum_i lam_i (cos(theta_i) sigma_x + sin(theta_i) sigma_z)."""
    layout = config.layout
    x = cavity_quadrature(layout).mat
    coup = np.zeros((layout.dim, layout.dim), dtype=complex)
    for i, q in enumerate(config.qubits, start=1):
        coup += q.lam * (
            math.cos(q.theta) * embed_qubit_op(layout, i, SIGMA_X).mat
            + math.sin(q.theta) * embed_qubit_op(layout, i, SIGMA_Z).mat
        )
    return Operator(x @ coup, layout)


def tavis_cummings_interaction(config: SystemConfig) -> Operator:
    """Excitation-conserving coupling sum_i lam_i (a sigma_+^(i) + a+ sigma_-^(i))."""
    layout = config.layout
    a = cavity_annihilation(layout).mat
    ad = a.conj().T
    v = np.zeros((layout.dim, layout.dim), dtype=complex)
    for i, q in enumerate(config.qubits, start=1):
        sp = embed_qubit_op(layout, i, SIGMA_PLUS).mat
        sm = embed_qubit_op(layout, i, SIGMA_MINUS).mat
        v += q.lam * (a @ sp + ad @ sm)
    return Operator(v, layout)


def build_generalized_dicke(config: SystemConfig) -> Operator:
    """Full Hamiltonian including counter-rotating and longitudinal terms."""
    return bare_hamiltonian(config) + dicke_interaction(config)


def build_tavis_cummings(config: SystemConfig) -> Operator:
    """Rotating-wave Hamiltonian; commutes with the total excitation number."""
    return bare_hamiltonian(config) + tavis_cummings_interaction(config)


def total_excitation_number(layout: HilbertLayout) -> Operator:
    """N = a+ a + sum_i |e><e|^(i)."""
    n = cavity_number(layout).mat.copy()
    proj_e = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
    for i in range(1, layout.qubit_count + 1):
        n += embed_qubit_op(layout, i, proj_e).mat
    return Operator(n, layout)


def parity_operator(layout: HilbertLayout) -> Operator:
    """Excitation parity exp(i pi N); diagonal with entries (-1)^N."""
    n_diag = np.real(np.diag(total_excitation_number(layout).mat))
    return Operator(np.diag((-1.0) ** np.rint(n_diag)), layout)


def dispersive_pair_coupling(config: SystemConfig, i: int, j: int) -> float:
    """Second-order virtual-photon coupling between qubits i and j (1-based).

    J = lam_i lam_j (1/Delta_i + 1/Delta_j) / 2  with  Delta_k = omega_k - omega_c.

    Valid in the dispersive regime |Delta_k| >> lam_k; a warning is emitted
    when |Delta_k| < 10 lam_k and exact resonance is an error.
    """
    for k in (i, j):
        if not 1 <= k <= config.qubit_count:
            raise ConfigError(f"qubit index {k} outside 1..{config.qubit_count}")
    qi, qj = config.qubits[i - 1], config.qubits[j - 1]
    couplings = []
    for label, q in ((i, qi), (j, qj)):
        delta = q.omega - config.omega_c
        if delta == 0.0:
            raise ResonantParameterError(
                f"qubit {label} is resonant with the cavity; dispersive formula invalid"
            )
        if q.lam > 0 and abs(delta) < 10.0 * q.lam:
            warnings.warn(
                f"qubit {label}: |omega - omega_c| = {abs(delta):.4g} is not large "
                f"compared to lam = {q.lam:.4g}; dispersive approximation is marginal",
                stacklevel=2,
            )
        couplings.append(delta)
    di, dj = couplings
    return qi.lam * qj.lam * (1.0 / di + 1.0 / dj) / 2.0


class MixKind(Enum):
    """Operator content of the effective resonant-mixing Hamiltonians."""

    TWO_QUBIT = "two_qubit"
    THREE_QUBIT = "three_qubit"
    FOUR_QUBIT_EXCHANGE = "four_qubit_exchange"
    FOUR_QUBIT_CASCADE = "four_qubit_cascade"


# (qubit, raise/lower) factors of the non-Hermitian half of each kind.
_MIX_PATTERNS = {
    MixKind.TWO_QUBIT: ((2, "+"), (1, "-")),
    MixKind.THREE_QUBIT: ((1, "+"), (2, "+"), (3, "-")),
    MixKind.FOUR_QUBIT_EXCHANGE: ((1, "-"), (2, "-"), (3, "+"), (4, "+")),
    MixKind.FOUR_QUBIT_CASCADE: ((1, "-"), (2, "+"), (3, "+"), (4, "+")),
}


def build_effective_mixing(kind: MixKind, coupling: float, qubit_count: int) -> Operator:
    """Effective qubit-only Hamiltonian J (product of sigma+/- + h.c.).

    THREE_QUBIT couples |g,g,e> <-> |e,e,g>; FOUR_QUBIT_EXCHANGE couples
    |e,e,g,g> <-> |g,g,e,e|; FOUR_QUBIT_CASCADE couples |e,g,g,g> <-> |g,e,e,e>.
    The returned operator lives on a qubit-only layout (fock_cutoff = 1).
    """
    pattern = _MIX_PATTERNS[kind]
    needed = max(q for q, _ in pattern)
    if qubit_count != needed:
        raise ConfigError(
            f"{kind.value} needs exactly {needed} qubits, got {qubit_count}"
        )
    layout = HilbertLayout(qubit_count, 1)
    half = np.eye(layout.dim, dtype=complex)
    for q, sign in pattern:
        local = SIGMA_PLUS if sign == "+" else SIGMA_MINUS
        half = half @ embed_qubit_op(layout, q, local).mat
    return Operator(coupling * (half + half.conj().T), layout)
