"""Dressed-picture zero-temperature Lindblad dynamics and observables.

Dissipation is treated in the eigenbasis of the full Hamiltonian: for every
ordered eigenstate pair (j, k) with E_k > E_j there is an independent decay
channel with jump operator |j><k| and rate

    cavity:   kappa   |<j| (a + a+) |k>|^2
    qubit i:  gamma_i |<j| sigma_x^(i) |k>|^2

i.e. the Born-Markov rates evaluated with dressed transition matrix elements
(flat bath spectral densities; no frequency weighting beyond the matrix
elements).  This construction is exact at zero coupling, where the jump
operators reduce to bare sigma_- and a, and remains meaningful in the
ultrastrong-coupling regime where bare lowering operators would create
excitations out of the dressed vacuum.

Observables use dressed ladder operators: for qubit i the lowering operator
maps each eigenstate labeled (e_i, rest) to the one labeled (g_i, rest); for
the cavity the lowering operator is the positive-frequency part of a + a+ in
the eigenbasis, which annihilates the dressed vacuum by construction.

The master equation is integrated with the classical fixed-step fourth-order
Runge-Kutta scheme.  In the eigenbasis the generator is time independent and
acts on coherences and populations separately, so the RK4 step is a constant
linear map; steps are composed by exact powers of the per-step multipliers,
which reproduces the literal stage-by-stage iteration to rounding error at a
tiny fraction of the cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .algebra import SIGMA_X, Ket, Operator, cavity_quadrature, embed_qubit_op
from .errors import ConfigError, LabelAmbiguityError, NumericalError, StepSizeError
from .model import SystemConfig
from .spectrum import SpectrumResult, diagonalize

__all__ = [
    "Dissipator",
    "DensityMatrix",
    "TimeSeries",
    "build_dressed_lowering",
    "build_cavity_lowering",
    "build_dissipators",
    "evolve",
    "expectation",
    "state_fidelity",
]

_RATE_FLOOR = 1e-24  # squared matrix elements below this are truncation noise


@dataclass(frozen=True)
class Dissipator:
    """One decay channel |j><k| (eigenbasis indices, E_k > E_j) with its rate."""

    j: int
    k: int
    rate: float
    channel: str

    def __post_init__(self):
        if self.rate < 0:
            raise ConfigError(f"negative rate {self.rate}")
        if self.j == self.k:
            raise ConfigError("jump operator must connect distinct eigenstates")


@dataclass(frozen=True)
class DensityMatrix:
    """Density operator snapshot at one time."""

    mat: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        m = np.array(self.mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ConfigError(f"density matrix must be square, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.mat)))

    def validate(self, herm_tol=1e-10, trace_tol=1e-8, eig_floor=-1e-8) -> None:
        defect = float(np.max(np.abs(self.mat - self.mat.conj().T)))
        if defect > herm_tol:
            raise NumericalError(f"density matrix not Hermitian: defect {defect:.3e}")
        if abs(self.trace - 1.0) > trace_tol:
            raise NumericalError(f"trace deviates from 1 by {self.trace - 1.0:.3e}")
        lo = float(np.min(np.linalg.eigvalsh((self.mat + self.mat.conj().T) / 2)))
        if lo < eig_floor:
            raise NumericalError(f"negative population {lo:.3e}")


@dataclass(frozen=True)
class TimeSeries:
    """Strictly increasing time grid with named traces (numbers or snapshots)."""

    times: np.ndarray
    traces: Mapping[str, tuple]

    def __post_init__(self):
        t = np.array(self.times, dtype=float)
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise ConfigError("time grid must be strictly increasing")
        t.setflags(write=False)
        object.__setattr__(self, "times", t)
        for name, tr in self.traces.items():
            if len(tr) != t.size:
                raise ConfigError(f"trace {name!r} length does not match time grid")

    @property
    def states(self) -> tuple:
        return self.traces["rho"]


def _qubit_context_pairs(spectrum: SpectrumResult, qubit_index: int):
    """(bare_g, bare_e) index pairs differing only in the level of one qubit."""
    layout = spectrum.layout
    if not 1 <= qubit_index <= layout.qubit_count:
        raise ConfigError(f"qubit index {qubit_index} outside 1..{layout.qubit_count}")
    stride = 2 ** (layout.qubit_count - qubit_index) * layout.fock_cutoff
    pairs = []
    for idx in range(layout.dim):
        if (idx // stride) % 2 == 0:
            pairs.append((idx, idx + stride))
    return pairs


def build_dressed_lowering(
    spectrum: SpectrumResult,
    qubit_index: int,
    overrides: Mapping[int, Ket] | None = None,
    on_ambiguous: str = "raise",
) -> Operator:
    """Dressed lowering operator of one qubit, expressed in the bare basis.

    S_- = sum over contexts |psi(g_i, rest)><psi(e_i, rest)| where psi(b) is
    the eigenstate labeled by bare state b.  Contexts whose labels are not
    claimed by any eigenstate (truncation-edge states) are skipped; a context
    touching a label claimed by two eigenstates is ambiguous and raises by
    default (``on_ambiguous="skip"`` drops it instead, appropriate when the
    collisions sit at the truncation edge far above the populated sector).
    With all couplings zero this reduces exactly to the bare sigma_-.

    At an anticrossing minimum the two split eigenstates are +- superpositions
    and neither carries a unique label; pass the recombined dressed pair from
    :func:`vpmix.spectrum.superposition_states` via ``overrides``
    (bare index -> Ket) to resolve those contexts explicitly.
    """
    if on_ambiguous not in ("raise", "skip"):
        raise ConfigError(f"on_ambiguous must be 'raise' or 'skip', got {on_ambiguous!r}")
    lmap = spectrum.label_map()
    collided = set(spectrum.label_collisions)
    overrides = dict(overrides or {})

    def dressed_vector(bare: int) -> np.ndarray | None:
        if bare in overrides:
            return overrides[bare].amp
        if bare in collided:
            if on_ambiguous == "skip":
                return None
            raise LabelAmbiguityError(
                f"bare label {bare} claimed by multiple eigenstates; "
                f"cannot build dressed lowering for qubit {qubit_index} "
                "(pass an override for this state)"
            )
        if bare in lmap:
            return spectrum.states[:, lmap[bare]]
        return None

    mat = np.zeros((spectrum.dim, spectrum.dim), dtype=complex)
    resolved = 0
    for b_g, b_e in _qubit_context_pairs(spectrum, qubit_index):
        v_g = dressed_vector(b_g)
        v_e = dressed_vector(b_e)
        if v_g is None or v_e is None:
            continue
        mat += np.outer(v_g, v_e.conj())
        resolved += 1
    if resolved == 0:
        raise LabelAmbiguityError(
            f"no resolvable contexts for qubit {qubit_index}; labels do not "
            "cover the needed sector"
        )
    return Operator(mat, spectrum.layout)


def build_cavity_lowering(spectrum: SpectrumResult, energy_tol: float = 1e-12) -> Operator:
    """Positive-frequency part of X = a + a+ in the eigenbasis (bare-basis matrix).

    A_- = sum_{E_j < E_k} <psi_j|X|psi_k| |psi_j><psi_k|; annihilates the
    dressed ground state and reduces to the bare a at zero coupling.  Its
    number operator A_+ A_- counts physically detectable photons.
    """
    u = spectrum.states
    x_eig = u.conj().T @ cavity_quadrature(spectrum.layout).mat @ u
    e = spectrum.energies
    lower = np.where(e[:, None] < e[None, :] - energy_tol, x_eig, 0.0)
    return Operator(u @ lower @ u.conj().T, spectrum.layout)


def build_dissipators(spectrum: SpectrumResult, config: SystemConfig) -> tuple[Dissipator, ...]:
    """Zero-temperature decay channels for the cavity and each qubit.

    Rates are kappa (gamma_i) times the squared dressed matrix element of
    X (sigma_x^(i)) between eigenstates; only downward transitions appear and
    exactly-zero rates are dropped.
    """
    layout = spectrum.layout
    if layout != config.layout:
        raise ConfigError("spectrum and config layouts differ")
    u = spectrum.states
    e = spectrum.energies
    channels: list[tuple[str, float, np.ndarray]] = []
    if config.kappa > 0:
        channels.append(("cavity", config.kappa, cavity_quadrature(layout).mat))
    for i, q in enumerate(config.qubits, start=1):
        if q.gamma > 0:
            channels.append((f"qubit{i}", q.gamma, embed_qubit_op(layout, i, SIGMA_X).mat))
    out: list[Dissipator] = []
    for name, strength, op in channels:
        m_eig = u.conj().T @ op @ u
        for k in range(layout.dim):
            for j in range(layout.dim):
                if e[k] <= e[j]:
                    continue
                elem2 = float(abs(m_eig[j, k]) ** 2)
                if elem2 <= _RATE_FLOOR:
                    continue
                out.append(Dissipator(j=j, k=k, rate=strength * elem2, channel=name))
    return tuple(out)


def _rk4_scalar(z: np.ndarray) -> np.ndarray:
    """Stability polynomial of classical RK4: action of one step on y' = a y."""
    return 1.0 + z + z**2 / 2.0 + z**3 / 6.0 + z**4 / 24.0


def _rk4_matrix(m: np.ndarray) -> np.ndarray:
    eye = np.eye(m.shape[0])
    m2 = m @ m
    return eye + m + m2 / 2.0 + (m2 @ m) / 6.0 + (m2 @ m2) / 24.0


def _coerce_rho(state, dim: int) -> np.ndarray:
    if isinstance(state, DensityMatrix):
        mat = np.array(state.mat, dtype=complex)
    elif isinstance(state, Ket):
        v = state.amp
        mat = np.outer(v, v.conj())
    else:
        arr = np.asarray(state, dtype=complex)
        mat = np.outer(arr, arr.conj()) if arr.ndim == 1 else np.array(arr)
    if mat.shape != (dim, dim):
        raise ConfigError(f"initial state dimension {mat.shape} does not match {dim}")
    return mat


def evolve(
    rho0,
    hamiltonian: Operator,
    dissipators: Sequence[Dissipator],
    t_grid: Sequence[float],
    spectrum: SpectrumResult | None = None,
    max_step: float | None = None,
    trace_tol: float = 1e-7,
) -> TimeSeries:
    """Integrate drho/dt = -i[H, rho] + sum Gamma (L rho L+ - {L+L, rho}/2).

    ``rho0`` (density matrix, Ket, or vector) is the state at ``t_grid[0]``;
    snapshots are returned at every grid time in the same basis as the inputs.
    ``dissipators`` index the ascending eigenbasis of ``hamiltonian`` (pass
    the ``spectrum`` they were built from to guarantee consistent ordering).

    The fixed RK4 step obeys h <= min(0.01 / spread(H), span / 1000); passing
    ``max_step`` replaces that rule with an explicit bound.  Trace drift
    beyond ``trace_tol`` raises :class:`StepSizeError`.
    """
    spec = spectrum if spectrum is not None else diagonalize(hamiltonian)
    dim = spec.dim
    u = spec.states
    e = spec.energies

    times = np.asarray(list(t_grid), dtype=float)
    if times.size < 1:
        raise ConfigError("empty time grid")
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise ConfigError("time grid must be strictly increasing")

    rho = u.conj().T @ _coerce_rho(rho0, dim) @ u

    gain = np.zeros((dim, dim))
    for d in dissipators:
        if not (0 <= d.j < dim and 0 <= d.k < dim):
            raise ConfigError(f"dissipator indices ({d.j}, {d.k}) out of range")
        gain[d.j, d.k] += d.rate
    out_rate = gain.sum(axis=0)

    if max_step is not None:
        if max_step <= 0:
            raise ConfigError("max_step must be positive")
        h_max = float(max_step)
    else:
        spread = float(e[-1] - e[0])
        span = float(times[-1] - times[0])
        h_max = math.inf
        if spread > 0:
            h_max = 0.01 / spread
        if span > 0:
            h_max = min(h_max, span / 1000.0)

    omega = e[:, None] - e[None, :]
    decay = 0.5 * (out_rate[:, None] + out_rate[None, :])
    w_pop = gain - np.diag(out_rate)

    step_cache: dict[tuple[float, int], tuple[np.ndarray, np.ndarray]] = {}

    def interval_maps(dt: float) -> tuple[np.ndarray, np.ndarray]:
        n = max(1, int(math.ceil(dt / h_max))) if math.isfinite(h_max) else 1
        key = (dt, n)
        if key not in step_cache:
            h = dt / n
            g_step = _rk4_scalar(h * (-1j * omega - decay))
            g_n = g_step**n
            p_step = _rk4_matrix(h * w_pop)
            p_n = np.linalg.matrix_power(p_step, n)
            step_cache[key] = (g_n, p_n)
        return step_cache[key]

    trace0 = float(np.real(np.trace(rho)))
    snapshots = [DensityMatrix(u @ rho @ u.conj().T, time=float(times[0]))]
    for p in range(1, times.size):
        dt = float(times[p] - times[p - 1])
        g_n, p_n = interval_maps(dt)
        pops = p_n @ np.real(np.diag(rho))
        rho = g_n * rho
        np.fill_diagonal(rho, pops)
        drift = abs(float(np.real(np.trace(rho))) - trace0)
        if drift > trace_tol:
            raise StepSizeError(
                f"trace drift {drift:.3e} exceeds {trace_tol:.1e} at t = {times[p]:.6g}; "
                "retry with a smaller max_step"
            )
        snapshots.append(DensityMatrix(u @ rho @ u.conj().T, time=float(times[p])))
    return TimeSeries(times=times, traces={"rho": tuple(snapshots)})


def expectation(rho: DensityMatrix, operators) -> float:
    """Real expectation value Tr[rho * O_1 O_2 ...] of an operator product."""
    if isinstance(operators, Operator):
        operators = (operators,)
    if not operators:
        raise ConfigError("need at least one operator")
    prod = operators[0].mat
    for op in operators[1:]:
        if op.mat.shape != prod.shape:
            raise ConfigError("operator dimensions differ")
        prod = prod @ op.mat
    if prod.shape[0] != rho.dim:
        raise ConfigError(
            f"operator dimension {prod.shape[0]} does not match state dimension {rho.dim}"
        )
    val = complex(np.trace(rho.mat @ prod))
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise NumericalError(f"expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def state_fidelity(rho: DensityMatrix, target: Ket) -> float:
    """<target| rho |target> for a pure target state."""
    if target.dim != rho.dim:
        raise ConfigError(
            f"target dimension {target.dim} does not match state dimension {rho.dim}"
        )
    val = complex(np.vdot(target.amp, rho.mat @ target.amp))
    if abs(val.imag) > 1e-10:
        raise NumericalError(f"fidelity has imaginary residue {val.imag:.3e}")
    return float(min(max(val.real, 0.0), 1.0))
