"""Operators and states on a register of two-level atoms plus one bosonic mode.

Conventions, fixed once for the whole package:

- Composite ordering is "qubit 1 (slowest) ... qubit N, cavity (fastest)".
  The basis index of a product state is
  ``(((q1*2 + q2)*2 + ...)*2 + qN) * fock_cutoff + photons`` with g=0, e=1.
- The local qubit basis is (|g>, |e>), so ``sigma_z = diag(-1, +1)`` and the
  bare qubit term (omega/2) sigma_z puts the ground level at -omega/2.
- Photon numbers run 0..fock_cutoff-1; the mode is hard-truncated, which
  leaves the usual defect [a, a+] = 1 - fock_cutoff |top><top|.
- Qubit indices in public signatures are 1-based, matching ket notation
  |q1, q2, ..., qN, n>.

Everything here is dense; the largest space used anywhere in the package is
2^4 * 16 = 256 dimensional.  All values are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import ConfigError

__all__ = [
    "HilbertLayout",
    "Operator",
    "Ket",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
    "embed_qubit_op",
    "cavity_annihilation",
    "cavity_quadrature",
    "cavity_number",
    "identity",
    "bare_state",
]


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


# Local qubit operators in the (|g>, |e>) basis.
SIGMA_X = _readonly([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Y = _readonly([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_Z = _readonly([[-1.0, 0.0], [0.0, 1.0]])
SIGMA_PLUS = _readonly([[0.0, 0.0], [1.0, 0.0]])   # |e><g|
SIGMA_MINUS = _readonly([[0.0, 1.0], [0.0, 0.0]])  # |g><e|

_LEVELS = ("g", "e")


@dataclass(frozen=True)
class HilbertLayout:
    """Shape of the composite space: N qubits and one truncated mode.

    ``fock_cutoff=1`` gives a qubit-only register (the single photon level
    n=0 is a spectator), which is how effective qubit Hamiltonians are
    represented.
    """

    qubit_count: int
    fock_cutoff: int

    def __post_init__(self):
        if self.qubit_count < 1:
            raise ConfigError(f"qubit_count must be >= 1, got {self.qubit_count}")
        if self.fock_cutoff < 1:
            raise ConfigError(f"fock_cutoff must be >= 1, got {self.fock_cutoff}")

    @property
    def dim(self) -> int:
        return 2**self.qubit_count * self.fock_cutoff

    def bare_index(self, levels: Sequence[str], photons: int) -> int:
        """Basis index of |levels, photons> under the fixed ordering."""
        if len(levels) != self.qubit_count:
            raise ConfigError(
                f"expected {self.qubit_count} qubit levels, got {len(levels)}"
            )
        if not 0 <= photons < self.fock_cutoff:
            raise ConfigError(
                f"photon number {photons} outside 0..{self.fock_cutoff - 1}"
            )
        idx = 0
        for lev in levels:
            if lev not in _LEVELS:
                raise ConfigError(f"qubit level must be 'g' or 'e', got {lev!r}")
            idx = 2 * idx + (1 if lev == "e" else 0)
        return idx * self.fock_cutoff + photons

    def bare_labels(self, index: int) -> tuple[str, int]:
        """Inverse of :meth:`bare_index`: returns (levels string, photons)."""
        if not 0 <= index < self.dim:
            raise ConfigError(f"basis index {index} outside 0..{self.dim - 1}")
        qpart, photons = divmod(index, self.fock_cutoff)
        levels = []
        for _ in range(self.qubit_count):
            qpart, bit = divmod(qpart, 2)
            levels.append(_LEVELS[bit])
        return "".join(reversed(levels)), photons

    def label_string(self, index: int) -> str:
        levels, photons = self.bare_labels(index)
        return f"{levels}:{photons}"


@dataclass(frozen=True)
class Operator:
    """Dense operator on a :class:`HilbertLayout`, immutable after creation."""

    mat: np.ndarray
    layout: HilbertLayout

    def __post_init__(self):
        m = np.array(self.mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ConfigError(f"operator matrix must be square, got shape {m.shape}")
        if m.shape[0] != self.layout.dim:
            raise ConfigError(
                f"matrix dimension {m.shape[0]} does not match layout dim {self.layout.dim}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def dag(self) -> "Operator":
        return Operator(self.mat.conj().T, self.layout)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.mat - self.mat.conj().T)))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.hermiticity_defect() <= tol

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, Operator):
            if other.layout != self.layout:
                raise ConfigError("operators live on different layouts")
            return other.mat
        return np.asarray(other, dtype=complex)

    def __matmul__(self, other):
        if isinstance(other, Ket):
            return Ket(self.mat @ other.amp, self.layout)
        return Operator(self.mat @ self._coerce(other), self.layout)

    def __add__(self, other):
        return Operator(self.mat + self._coerce(other), self.layout)

    def __sub__(self, other):
        return Operator(self.mat - self._coerce(other), self.layout)

    def __mul__(self, scalar):
        return Operator(self.mat * complex(scalar), self.layout)

    __rmul__ = __mul__

    def __neg__(self):
        return Operator(-self.mat, self.layout)


@dataclass(frozen=True)
class Ket:
    """Pure state vector on a :class:`HilbertLayout`."""

    amp: np.ndarray
    layout: HilbertLayout

    def __post_init__(self):
        v = np.array(self.amp, dtype=complex).reshape(-1)
        if v.shape[0] != self.layout.dim:
            raise ConfigError(
                f"vector dimension {v.shape[0]} does not match layout dim {self.layout.dim}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "amp", v)

    @property
    def dim(self) -> int:
        return self.amp.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))

    def normalized(self) -> "Ket":
        n = self.norm
        if n == 0.0:
            raise ConfigError("cannot normalize the zero vector")
        return Ket(self.amp / n, self.layout)

    def overlap(self, other: "Ket") -> complex:
        return complex(np.vdot(self.amp, other.amp))

    def projector(self) -> Operator:
        return Operator(np.outer(self.amp, self.amp.conj()), self.layout)


def identity(layout: HilbertLayout) -> Operator:
    return Operator(np.eye(layout.dim), layout)


def embed_qubit_op(layout: HilbertLayout, qubit_index: int, local: np.ndarray) -> Operator:
    """Lift a 2x2 operator acting on one qubit to the full space.

    ``qubit_index`` is 1-based.  The result is the identity on every other
    tensor factor, so operators embedded on distinct factors commute exactly
    and the embedding is an algebra homomorphism on each factor.
    """
    if not 1 <= qubit_index <= layout.qubit_count:
        raise ConfigError(
            f"qubit_index {qubit_index} outside 1..{layout.qubit_count}"
        )
    loc = np.asarray(local, dtype=complex)
    if loc.shape != (2, 2):
        raise ConfigError(f"local operator must be 2x2, got shape {loc.shape}")
    factors = [np.eye(2, dtype=complex)] * layout.qubit_count
    factors[qubit_index - 1] = loc
    factors.append(np.eye(layout.fock_cutoff, dtype=complex))
    return Operator(reduce(np.kron, factors), layout)


def _annihilation_matrix(cutoff: int) -> np.ndarray:
    a = np.zeros((cutoff, cutoff), dtype=complex)
    for n in range(1, cutoff):
        a[n - 1, n] = np.sqrt(n)
    return a


def cavity_annihilation(layout: HilbertLayout) -> Operator:
    """Truncated annihilation operator a, embedded on the mode factor."""
    mat = np.kron(np.eye(2**layout.qubit_count, dtype=complex),
                  _annihilation_matrix(layout.fock_cutoff))
    return Operator(mat, layout)


def cavity_quadrature(layout: HilbertLayout) -> Operator:
    """Field quadrature X = a + a+."""
    a = cavity_annihilation(layout)
    return a + a.dag()


def cavity_number(layout: HilbertLayout) -> Operator:
    """Photon number operator a+ a, built with exact integer diagonal."""
    diag = np.kron(np.ones(2**layout.qubit_count),
                   np.arange(layout.fock_cutoff, dtype=float))
    return Operator(np.diag(diag.astype(complex)), layout)


def bare_state(layout: HilbertLayout, levels: Sequence[str], photons: int) -> Ket:
    """Unit basis vector |levels, photons> of the non-interacting system."""
    idx = layout.bare_index(levels, photons)
    v = np.zeros(layout.dim, dtype=complex)
    v[idx] = 1.0
    return Ket(v, layout)
