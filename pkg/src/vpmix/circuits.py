"""Statevector circuit engine: mixing gates, repetition codes, error correction.

Wires are numbered 1..n to match ket notation |q1, q2, ..., qn>; amplitudes
are stored with wire 1 as the most significant bit and |0> = |g|, |1> = |e>.

The three- and four-wire mixing gates are the spontaneous-evolution unitaries
of the resonant down-conversion processes after a quarter Rabi cycle
(J t = pi/2): the identity except on one coupled ket pair,

    U3:  |100> -> -i|011>,   |011> -> -i|100>
    U4:  |1000> -> -i|0111>, |0111> -> -i|1000>

Followed by one (pi/4)-phase gate S = diag(1, i) on any wire but the first,
U4 acts as the standard three-qubit repetition encoder with the input wire
left disentangled in |0>:

    S_n U4 (a|0> + b|1>)|000> = |0>(a|000> + b|111>).

The five-qubit error-correction circuit corrects a single bit flip (or, with
basis rotations around the error channel, a single phase flip) on any of the
three data wires.  Its encoder, decoder and the shared-control half of the
syndrome extraction exist in two interchangeable implementations: CNOT pairs,
or the four-wire mixing gate (which needs one extra wire).  The syndrome ->
correction table is calibrated by simulating each single error once rather
than hard-coded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError, NumericalError

__all__ = [
    "RegisterState",
    "GateSpec",
    "MeasurementResult",
    "EccReport",
    "register_state",
    "apply_gate",
    "u3_mix",
    "u4_mix",
    "repetition_encode",
    "measure_qubit",
    "run_ecc",
    "reduced_qubit",
]

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class RegisterState:
    """Pure state of an n-wire register; global phase carries no meaning."""

    qubit_count: int
    amp: np.ndarray

    def __post_init__(self):
        v = np.array(self.amp, dtype=complex).reshape(-1)
        if v.shape[0] != 2**self.qubit_count:
            raise ConfigError(
                f"amplitude length {v.shape[0]} does not match {self.qubit_count} wires"
            )
        v.setflags(write=False)
        object.__setattr__(self, "amp", v)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))


def register_state(amplitudes, qubit_count: int | None = None) -> RegisterState:
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    n = qubit_count if qubit_count is not None else int(round(math.log2(v.shape[0])))
    return RegisterState(qubit_count=n, amp=v)


def _check_wires(state: RegisterState, wires) -> tuple[int, ...]:
    ws = tuple(int(w) for w in wires)
    for w in ws:
        if not 1 <= w <= state.qubit_count:
            raise ConfigError(f"wire {w} outside 1..{state.qubit_count}")
    if len(set(ws)) != len(ws):
        raise ConfigError(f"wires must be distinct, got {ws}")
    return ws


def _bit(index: int, wire: int, n: int) -> int:
    return (index >> (n - wire)) & 1


def _apply_single(amp: np.ndarray, mat: np.ndarray, wire: int, n: int) -> np.ndarray:
    full = amp.reshape([2] * n)
    moved = np.moveaxis(full, wire - 1, -1)
    out = moved @ mat.T
    return np.moveaxis(out, -1, wire - 1).reshape(-1)


@dataclass(frozen=True)
class GateSpec:
    """One gate: kind in {x, z, s, y, cnot, u3mix, u4mix}, 1-based wires,
    and an angle for the y rotation."""

    kind: str
    wires: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "wires", tuple(int(w) for w in self.wires))


def _y_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


_X_MAT = np.array([[0, 1], [1, 0]], dtype=complex)
_Z_MAT = np.array([[1, 0], [0, -1]], dtype=complex)
_S_MAT = np.array([[1, 0], [0, 1j]], dtype=complex)


def apply_gate(state: RegisterState, gate: GateSpec) -> RegisterState:
    """Apply one gate; unitary, norm preserved to rounding."""
    n = state.qubit_count
    kind = gate.kind.lower()
    if kind in ("x", "z", "s", "y"):
        (w,) = _check_wires(state, gate.wires)
        if kind == "y":
            if gate.angle is None:
                raise ConfigError("y rotation needs an angle")
            mat = _y_matrix(gate.angle)
        else:
            mat = {"x": _X_MAT, "z": _Z_MAT, "s": _S_MAT}[kind]
        return RegisterState(n, _apply_single(state.amp, mat, w, n))
    if kind == "cnot":
        control, target = _check_wires(state, gate.wires)
        out = np.array(state.amp)
        tmask = 1 << (n - target)
        for idx in range(out.shape[0]):
            if _bit(idx, control, n) == 1 and not idx & tmask:
                out[idx], out[idx | tmask] = state.amp[idx | tmask], state.amp[idx]
        return RegisterState(n, out)
    if kind == "u3mix":
        return u3_mix(state, gate.wires)
    if kind == "u4mix":
        return u4_mix(state, gate.wires)
    raise ConfigError(f"unknown gate kind {gate.kind!r}")


def _mix(state: RegisterState, wires, pattern_hi: tuple[int, ...]) -> RegisterState:
    """Identity except -i swap between wire patterns pattern_hi and its complement."""
    ws = _check_wires(state, wires)
    n = state.qubit_count
    out = np.array(state.amp)
    masks = [1 << (n - w) for w in ws]
    hi_bits = sum(m for m, b in zip(masks, pattern_hi) if b)
    lo_bits = sum(m for m, b in zip(masks, pattern_hi) if not b)
    group = sum(masks)
    for idx in range(out.shape[0]):
        if idx & group == hi_bits:
            partner = (idx & ~group) | lo_bits
            out[idx] = -1j * state.amp[partner]
            out[partner] = -1j * state.amp[idx]
    return RegisterState(n, out)


def u3_mix(state: RegisterState, wires) -> RegisterState:
    """Three-wire mixing gate: |100> <-> -i|011> on the named wires."""
    if len(wires) != 3:
        raise ConfigError("u3_mix needs exactly 3 wires")
    return _mix(state, wires, (1, 0, 0))


def u4_mix(state: RegisterState, wires) -> RegisterState:
    """Four-wire mixing gate: |1000> <-> -i|0111> on the named wires."""
    if len(wires) != 4:
        raise ConfigError("u4_mix needs exactly 4 wires")
    return _mix(state, wires, (1, 0, 0, 0))


def _embed_logical(logical, total_wires: int) -> RegisterState:
    """Place a one-qubit state on wire 1 of a fresh |0...0> register."""
    if isinstance(logical, RegisterState):
        if logical.qubit_count == total_wires:
            for idx, val in enumerate(logical.amp):
                if idx % 2**(total_wires - 1) != 0 and abs(val) > 1e-12:
                    raise ConfigError("ancilla wires must start in |0>")
            return logical
        if logical.qubit_count != 1:
            raise ConfigError(
                f"logical input must be 1 wire or {total_wires} wires, "
                f"got {logical.qubit_count}"
            )
        a, b = logical.amp
    else:
        a, b = (complex(x) for x in logical)
    amp = np.zeros(2**total_wires, dtype=complex)
    amp[0] = a
    amp[2 ** (total_wires - 1)] = b
    return RegisterState(total_wires, amp)


def repetition_encode(logical, n_copies: int, variant: str = "cnot"):
    """Encode a|0> + b|1> into a|0...0> + b|1...1> on ``n_copies`` wires.

    variant "cnot": chained CNOTs from wire 1; the register has ``n_copies``
    wires and the logical state lives on all of them.  variant "mix": the
    mixing gate plus one phase gate on a register of ``n_copies + 1`` wires;
    wire 1 ends exactly in |0> (disentangled) and is returned as the
    discarded ancilla index, with the code word on the remaining wires.

    Returns ``(state, discarded_wire)`` with ``discarded_wire`` None for the
    cnot variant.
    """
    if n_copies not in (2, 3):
        raise ConfigError(f"n_copies must be 2 or 3, got {n_copies}")
    if variant == "cnot":
        state = _embed_logical(logical, n_copies)
        for target in range(2, n_copies + 1):
            state = apply_gate(state, GateSpec("cnot", (1, target)))
        return state, None
    if variant == "mix":
        total = n_copies + 1
        state = _embed_logical(logical, total)
        wires = tuple(range(1, total + 1))
        state = u4_mix(state, wires) if n_copies == 3 else u3_mix(state, wires)
        state = apply_gate(state, GateSpec("s", (2,)))
        return state, 1
    raise ConfigError(f"unknown variant {variant!r}")


@dataclass(frozen=True)
class MeasurementResult:
    outcome: int
    state: RegisterState
    probability: float


def measure_qubit(state: RegisterState, wire: int, rng: np.random.Generator | None = None) -> MeasurementResult:
    """Projective measurement of one wire in the computational basis.

    With ``rng`` the outcome is sampled; without it the more probable outcome
    is taken (ties resolve to 0), which is exact for the deterministic
    syndrome measurements of the error-correction runs.
    """
    (w,) = _check_wires(state, (wire,))
    n = state.qubit_count
    mask = 1 << (n - w)
    amp = state.amp
    p1 = float(sum(abs(amp[i]) ** 2 for i in range(amp.shape[0]) if i & mask))
    p1 = min(max(p1, 0.0), 1.0)
    if rng is not None:
        outcome = 1 if rng.random() < p1 else 0
    else:
        outcome = 1 if p1 > 0.5 else 0
    prob = p1 if outcome == 1 else 1.0 - p1
    if prob <= 0.0:
        raise NumericalError(f"measurement outcome {outcome} has zero probability")
    out = np.array(amp)
    for i in range(out.shape[0]):
        if bool(i & mask) != bool(outcome):
            out[i] = 0.0
    out /= math.sqrt(prob)
    return MeasurementResult(outcome=outcome, state=RegisterState(n, out), probability=prob)


def reduced_qubit(state: RegisterState, wire: int) -> np.ndarray:
    """2x2 reduced density matrix of one wire."""
    (w,) = _check_wires(state, (wire,))
    n = state.qubit_count
    full = state.amp.reshape([2] * n)
    moved = np.moveaxis(full, w - 1, 0).reshape(2, -1)
    return moved @ moved.conj().T


@dataclass(frozen=True)
class EccReport:
    """Outcome of one error-correction run."""

    implementation: str
    mode: str
    error: tuple[str, int] | None
    syndrome: tuple[int, int]
    corrected_wire: int | None
    fidelity: float


# Wire roles for the two implementations.  Data positions are the physical
# wires holding logical data qubits 1..3 after encoding; for "mix" the first
# syndrome block moves logical qubit 1 onto the freed input wire.
_CNOT_LAYOUT = {
    "total": 5,
    "data": (1, 2, 3),
    "ancillas": (4, 5),
    "data_after_s1": (1, 2, 3),
}
_MIX_LAYOUT = {
    "total": 6,
    "data": (2, 3, 4),
    "ancillas": (5, 6),
    "data_after_s1": (1, 3, 4),
}


def _encode(state: RegisterState, implementation: str) -> RegisterState:
    if implementation == "cnot":
        state = apply_gate(state, GateSpec("cnot", (1, 2)))
        return apply_gate(state, GateSpec("cnot", (1, 3)))
    state = u4_mix(state, (1, 2, 3, 4))
    return apply_gate(state, GateSpec("s", (2,)))


def _decode(state: RegisterState, implementation: str) -> RegisterState:
    if implementation == "cnot":
        state = apply_gate(state, GateSpec("cnot", (1, 3)))
        return apply_gate(state, GateSpec("cnot", (1, 2)))
    # inverse of the mix encoder on the post-syndrome data wires (1, 3, 4),
    # rebuilt on the freed wire 2: S+ then U4+ (= U4 cubed, a 3/4 Rabi cycle)
    state = apply_gate(state, GateSpec("s", (1,)))
    state = apply_gate(state, GateSpec("s", (1,)))
    state = apply_gate(state, GateSpec("s", (1,)))
    for _ in range(3):
        state = u4_mix(state, (2, 1, 3, 4))
    return state


def _syndrome_block(state: RegisterState, implementation: str) -> RegisterState:
    if implementation == "cnot":
        # S1: shared control on data 1; S2: data 2 and 3
        state = apply_gate(state, GateSpec("cnot", (1, 4)))
        state = apply_gate(state, GateSpec("cnot", (1, 5)))
        state = apply_gate(state, GateSpec("cnot", (2, 4)))
        return apply_gate(state, GateSpec("cnot", (3, 5)))
    # S1 via the mixing gate: fan data wire 2 out onto (5, 6, 1); wire 2 is
    # freed and logical qubit 1 continues on wire 1.
    state = u4_mix(state, (2, 5, 6, 1))
    state = apply_gate(state, GateSpec("s", (5,)))
    state = apply_gate(state, GateSpec("cnot", (3, 5)))
    return apply_gate(state, GateSpec("cnot", (4, 6)))


def _run_circuit(a: complex, b: complex, error, mode: str, implementation: str):
    layout = _CNOT_LAYOUT if implementation == "cnot" else _MIX_LAYOUT
    state = _embed_logical((a, b), layout["total"])
    state = _encode(state, implementation)
    data = layout["data"]
    if mode == "phaseflip":
        for w in data:
            state = apply_gate(state, GateSpec("y", (w,), angle=math.pi / 2))
    if error is not None:
        kind, logical_wire = error
        state = apply_gate(state, GateSpec(kind, (data[logical_wire - 1],)))
    if mode == "phaseflip":
        for w in data:
            state = apply_gate(state, GateSpec("y", (w,), angle=-math.pi / 2))
    state = _syndrome_block(state, implementation)
    anc_m, anc_n = layout["ancillas"]
    res_m = measure_qubit(state, anc_m)
    res_n = measure_qubit(res_m.state, anc_n)
    return (res_m.outcome, res_n.outcome), res_n.state, (res_m.probability, res_n.probability)


@lru_cache(maxsize=None)
def _syndrome_table(implementation: str) -> dict:
    """Map measured (m, n) to the data wire needing a flip, via calibration runs."""
    table: dict[tuple[int, int], int | None] = {}
    for err_wire in (None, 1, 2, 3):
        error = None if err_wire is None else ("x", err_wire)
        syndrome, _, probs = _run_circuit(1.0, 0.0, error, "bitflip", implementation)
        if min(probs) < 1.0 - 1e-10:
            raise NumericalError(
                f"calibration syndrome not deterministic for {implementation}/{error}"
            )
        if syndrome in table:
            raise NumericalError(
                f"syndrome {syndrome} not injective for {implementation}"
            )
        table[syndrome] = err_wire
    return table


def run_ecc(a: complex, b: complex, error, mode: str = "bitflip",
            implementation: str = "cnot") -> EccReport:
    """Run the five-qubit error-correction circuit on a|0> + b|1>.

    ``error`` is None or ``(kind, wire)`` with kind "x"/"z" and wire 1..3
    (logical data positions); "bitflip" mode corrects x errors, "phaseflip"
    mode wraps the channel in basis rotations and corrects z errors.  The
    measured syndrome is required to be deterministic, the correction wire
    comes from the calibrated table, and the fidelity compares the decoded
    wire against the input state.
    """
    if implementation not in ("cnot", "mix"):
        raise ConfigError(f"unknown implementation {implementation!r}")
    if mode not in ("bitflip", "phaseflip"):
        raise ConfigError(f"unknown mode {mode!r}")
    norm = abs(a) ** 2 + abs(b) ** 2
    if abs(norm - 1.0) > 1e-10:
        raise ConfigError(f"logical amplitudes not normalized: |a|^2+|b|^2 = {norm}")
    if error is not None:
        kind, wire = error
        if kind not in ("x", "z"):
            raise ConfigError(f"error kind must be 'x' or 'z', got {kind!r}")
        if wire not in (1, 2, 3):
            raise ConfigError(f"error wire {wire} outside 1..3")
    layout = _CNOT_LAYOUT if implementation == "cnot" else _MIX_LAYOUT
    syndrome, state, probs = _run_circuit(complex(a), complex(b), error, mode, implementation)
    if min(probs) < 1.0 - 1e-10:
        raise NumericalError(
            f"syndrome measurement not deterministic (p = {min(probs):.12f})"
        )
    table = _syndrome_table(implementation)
    corrected = table.get(syndrome)
    if corrected is not None:
        state = apply_gate(
            state, GateSpec("x", (layout["data_after_s1"][corrected - 1],))
        )
    state = _decode(state, implementation)
    out_wire = 1 if implementation == "cnot" else 2
    rho = reduced_qubit(state, out_wire)
    target = np.array([a, b], dtype=complex)
    fidelity = float(np.real(target.conj() @ rho @ target))
    return EccReport(
        implementation=implementation,
        mode=mode,
        error=error,
        syndrome=syndrome,
        corrected_wire=corrected,
        fidelity=fidelity,
    )
