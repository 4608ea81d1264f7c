"""Circuits that realize non-revealing measurements, and their simulation.

Register layout: with ``n`` system qubits, qubits ``0..n-1`` are the system
and ``n..2n-1`` the ancillas, ancilla ``n+i`` paired with system qubit ``i``.
Qubit 0 is the least significant bit of a basis-state index, so a full
register index is ``s + 2**n * a`` and a system operator acting on index
``s`` is the usual Kronecker-ordered matrix (qubit ``n-1`` leftmost).
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .channels import apply, dephasing_channel
from .errors import (
    BadParameter,
    DimensionMismatch,
    EmptyHistogram,
    IdentityViolation,
    NotUnitary,
    TooLarge,
)
from .linalg import partial_trace, shannon_entropy
from .states import ObservableBasis, haar_random_vector

log = logging.getLogger(__name__)

MAX_SYSTEM_QUBITS = 5

# calibration of the ibmq_belem device
BELEM_CNOT_ERROR = 1.903e-2
BELEM_READOUT_ERROR = 2.14e-2


def u_gate_matrix(theta, phi, lam):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ]
    )


def _global_phase(m, tol):
    """Return ``z`` with ``m == z I`` and ``|z| == 1``, or ``None``."""
    z = m[0, 0]
    if abs(abs(z) - 1.0) > tol or np.linalg.norm(m - z * np.eye(m.shape[0])) > tol:
        return None
    return z


def u_dagger_params(theta, phi, lam, tol=1e-10):
    """Parameters ``(theta, pi - lam, -pi - phi)`` whose gate inverts ``U(theta, phi, lam)``.

    The inversion is checked numerically up to a global phase; a failure
    raises :class:`IdentityViolation`.
    """
    params = (theta, math.pi - lam, -math.pi - phi)
    prod = u_gate_matrix(*params) @ u_gate_matrix(theta, phi, lam)
    if _global_phase(prod, tol) is None:
        raise IdentityViolation(f"U{params} is not the inverse of U{(theta, phi, lam)}")
    return params


@dataclass(frozen=True)
class Gate:
    """One gate. ``kind`` is ``"u"``, ``"cx"`` or ``"unitary"``.

    ``"unitary"`` is an opaque matrix on ``targets``; bit ``i`` of its
    matrix index is qubit ``targets[i]``.
    """

    kind: str
    targets: tuple
    control: int = None
    params: tuple = ()
    matrix: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if self.kind == "u":
            if len(self.targets) != 1 or len(self.params) != 3:
                raise BadParameter("u gate needs one target and three angles")
        elif self.kind == "cx":
            if len(self.targets) != 1 or self.control is None:
                raise BadParameter("cx gate needs a control and one target")
            if self.control == self.targets[0]:
                raise BadParameter("cx control and target coincide")
        elif self.kind == "unitary":
            m = np.array(self.matrix, dtype=np.complex128)
            if m.shape != (2 ** len(self.targets),) * 2:
                raise DimensionMismatch(f"matrix {m.shape} vs {len(self.targets)} targets")
            m.flags.writeable = False
            object.__setattr__(self, "matrix", m)
        else:
            raise BadParameter(f"unknown gate kind {self.kind!r}")

    def unitary(self):
        if self.kind == "u":
            return u_gate_matrix(*self.params)
        if self.kind == "unitary":
            return self.matrix
        raise BadParameter("cx has no single-register matrix")

    def qubits(self):
        return self.targets + ((self.control,) if self.control is not None else ())


def u(target, theta, phi, lam):
    return Gate("u", (target,), params=(float(theta), float(phi), float(lam)))


def cx(control, target):
    return Gate("cx", (target,), control=int(control))


@dataclass(frozen=True)
class Circuit:
    num_system_qubits: int
    num_ancilla_qubits: int
    gates: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        n = self.num_qubits
        for g in self.gates:
            if any(q < 0 or q >= n for q in g.qubits()):
                raise BadParameter(f"gate {g.kind} touches a qubit outside 0..{n - 1}")

    @property
    def num_qubits(self):
        return self.num_system_qubits + self.num_ancilla_qubits

    @property
    def system_qubits(self):
        return tuple(range(self.num_system_qubits))


def _v_dagger_gate(theta, phi):
    try:
        params = u_dagger_params(theta, phi, 0.0)
    except IdentityViolation:
        log.warning("U-dagger angle identity failed; inserting the conjugate transpose directly")
        return Gate("unitary", (0,), matrix=u_gate_matrix(theta, phi, 0.0).conj().T)
    log.debug("U-dagger realized through the angle identity")
    return u(0, *params)


def build_nrvnm_circuit_1q(theta, phi):
    """``V^dagger``, CNOT onto the ancilla, ``V`` with ``V = U(theta, phi, 0)``."""
    gates = [_v_dagger_gate(theta, phi), cx(0, 1), u(0, theta, phi, 0.0)]
    return Circuit(1, 1, gates)


def nrvnm_basis_1q(theta, phi):
    """Basis ``{V|0>, V|1>}`` measured by :func:`build_nrvnm_circuit_1q`."""
    return ObservableBasis(u_gate_matrix(theta, phi, 0.0), f"n({theta:.6g},{phi:.6g})")


def _check_unitary(v, tol=1e-10):
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {v.shape}")
    dev = np.linalg.norm(v.conj().T @ v - np.eye(v.shape[0]))
    if dev > tol:
        raise NotUnitary(f"||V^dagger V - I||_F = {dev:.3e}")
    return v


def build_nrvnm_circuit_nq(v):
    """``V^dagger`` on the system, one CNOT per system qubit, then ``V``."""
    v = _check_unitary(v)
    n = int(round(math.log2(v.shape[0])))
    if 2**n != v.shape[0]:
        raise DimensionMismatch(f"dimension {v.shape[0]} is not a power of two")
    if n > MAX_SYSTEM_QUBITS:
        raise TooLarge(f"{n} system qubits exceeds {MAX_SYSTEM_QUBITS}")
    sys = tuple(range(n))
    gates = [Gate("unitary", sys, matrix=v.conj().T)]
    gates += [cx(i, n + i) for i in range(n)]
    gates.append(Gate("unitary", sys, matrix=v))
    return Circuit(n, n, gates)


# ----------------------------------------------------------------------------
# simulation
# ----------------------------------------------------------------------------


def _apply_matrix(state, m, targets, nq):
    k = len(targets)
    t = state.reshape([2] * nq)
    axes = [nq - 1 - q for q in reversed(targets)]
    mt = m.reshape([2] * (2 * k))
    res = np.tensordot(mt, t, axes=(list(range(k, 2 * k)), axes))
    res = np.moveaxis(res, list(range(k)), axes)
    return np.ascontiguousarray(res).reshape(-1)


def _apply_gate(state, g, nq, conj=False, shift=0):
    """Apply ``g`` (or its complex conjugate) with every qubit index offset by ``shift``."""
    if g.kind == "cx":
        return _kernels.apply_cnot(state, g.control + shift, g.targets[0] + shift)
    m = g.unitary()
    m = m.conj() if conj else m
    if g.kind == "u":
        return _kernels.apply_1q(state, np.ascontiguousarray(m), g.targets[0] + shift)
    return _apply_matrix(state, m, [t + shift for t in g.targets], nq)


def _full_input(c, vec):
    vec = np.asarray(vec, dtype=np.complex128).ravel()
    if vec.shape[0] == 2**c.num_system_qubits and c.num_ancilla_qubits:
        full = np.zeros(2**c.num_qubits, dtype=np.complex128)
        full[: vec.shape[0]] = vec
        return full
    if vec.shape[0] != 2**c.num_qubits:
        raise DimensionMismatch(f"input dim {vec.shape[0]} vs {2 ** c.num_qubits}")
    return vec.copy()


def simulate_statevector(c, input):
    """Gate-by-gate evolution of a full-register state vector.

    A system-only vector is accepted too; the ancillas then start in ``|0...0>``.
    """
    state = _full_input(c, input)
    for g in c.gates:
        state = _apply_gate(state, g, c.num_qubits)
    return state


def circuit_unitary(c):
    dim = 2**c.num_qubits
    cols = [simulate_statevector(c, np.eye(dim)[:, k]) for k in range(dim)]
    return np.column_stack(cols)


def reduced_system_state(c, input):
    """System density operator after the circuit with the ancillas traced out."""
    out = simulate_statevector(c, input)
    rho = np.outer(out, out.conj())
    return partial_trace(rho, [2**c.num_ancilla_qubits, 2**c.num_system_qubits], [1])


@dataclass(frozen=True)
class ChannelCheck:
    max_deviation: float
    samples: int
    basis_label: str


def circuit_as_channel(c, basis, samples=20, seed=0):
    """Compare the circuit's reduced action with the dephasing channel of ``basis``.

    Inputs are Haar-random system vectors; the result holds the largest
    Frobenius deviation seen.
    """
    d = 2**c.num_system_qubits
    if basis.dim != d:
        raise DimensionMismatch(f"basis dim {basis.dim} vs system dim {d}")
    ref = dephasing_channel(basis)
    worst = 0.0
    for s in range(samples):
        psi = haar_random_vector(d, seed + s)
        got = reduced_system_state(c, psi)
        want = apply(ref, np.outer(psi, psi.conj()))
        worst = max(worst, float(np.linalg.norm(got - want)))
    return ChannelCheck(worst, samples, basis.label)


@dataclass(frozen=True)
class NoiseModel:
    """CNOT two-qubit depolarizing plus independent readout bit flips."""

    cnot_depolarizing_rate: float = BELEM_CNOT_ERROR
    readout_flip_rate: float = BELEM_READOUT_ERROR
    enabled: bool = True

    def __post_init__(self):
        for name in ("cnot_depolarizing_rate", "readout_flip_rate"):
            r = getattr(self, name)
            if not 0.0 <= r <= 0.5:
                raise BadParameter(f"{name}={r} outside [0, 0.5]")

    @classmethod
    def off(cls):
        return cls(enabled=False)


_PAULIS = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.diag([1.0, -1.0]).astype(np.complex128),
)


def _depolarize_pair(vec, a, b, rate, nq):
    # (1-rate) rho + rate * I/4 (x) Tr_ab(rho), as a uniform Pauli twirl
    acc = (1 - rate) * vec
    for pa in _PAULIS:
        for pb in _PAULIS:
            t = vec.copy()
            for q, p in ((a, pa), (b, pb)):
                t = _kernels.apply_1q(t, p, q + nq)
                t = _kernels.apply_1q(t, np.ascontiguousarray(p.conj()), q)
            acc += (rate / 16) * t
    return acc


def simulate_density(c, input, noise=None):
    """Full-register density matrix after the circuit, with CNOT depolarizing noise.

    The matrix is evolved as a vector over ``2N`` qubits: column index bits
    are qubits ``0..N-1``, row index bits ``N..2N-1``.
    """
    nq = c.num_qubits
    psi = _full_input(c, input)
    vec = np.outer(psi, psi.conj()).reshape(-1).copy()
    rate = noise.cnot_depolarizing_rate if noise is not None and noise.enabled else 0.0
    for g in c.gates:
        vec = _apply_gate(vec, g, 2 * nq, shift=nq)
        vec = _apply_gate(vec, g, 2 * nq, conj=True)
        if g.kind == "cx" and rate > 0:
            vec = _depolarize_pair(vec, g.control, g.targets[0], rate, nq)
    dim = 2**nq
    return vec.reshape(dim, dim)


def _system_probabilities(c, input, basis_change, noise):
    n = c.num_system_qubits
    dim_s = 2**n
    noisy = noise is not None and noise.enabled and noise.cnot_depolarizing_rate > 0
    if basis_change is not None:
        basis_change = _check_unitary(basis_change)
        if basis_change.shape[0] != dim_s:
            raise DimensionMismatch(f"basis change dim {basis_change.shape[0]} vs {dim_s}")
    if not noisy:
        state = simulate_statevector(c, input)
        if basis_change is not None:
            state = _apply_matrix(state, basis_change, list(range(n)), c.num_qubits)
        probs = (np.abs(state) ** 2).reshape(-1, dim_s).sum(axis=0)
    else:
        rho = simulate_density(c, input, noise)
        # reduce to the system first; the basis change acts on it alone
        rho_s = partial_trace(rho, [2**c.num_ancilla_qubits, dim_s], [1])
        if basis_change is not None:
            rho_s = basis_change @ rho_s @ basis_change.conj().T
        probs = np.real(np.diag(rho_s))
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def sample_measurement(c, input, basis_change=None, shots=8192, noise=None, seed=0):
    """Histogram of system-register outcomes over ``shots`` runs.

    ``basis_change`` (a system unitary ``W^dagger``) is applied after the
    circuit and before the computational-basis readout, which samples the
    diagonal in the basis formed by the columns of ``W``.
    """
    if shots < 1:
        raise BadParameter(f"shots must be >= 1, got {shots}")
    probs = _system_probabilities(c, input, basis_change, noise)
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    counts = rng.multinomial(int(shots), probs)
    if noise is not None and noise.enabled and noise.readout_flip_rate > 0:
        outcomes = np.repeat(np.arange(probs.size, dtype=np.int64), counts)
        uniforms = rng.random((outcomes.size, c.num_system_qubits))
        outcomes = _kernels.flip_bits(outcomes, uniforms, noise.readout_flip_rate)
        counts = np.bincount(outcomes, minlength=probs.size)
    return counts.astype(np.int64)


def _frequencies(counts):
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total <= 0:
        raise EmptyHistogram("histogram has no shots")
    return counts / total


def estimate_measures_from_counts(counts_x, counts_y, d):
    """``(log2 d - H(f_x), H(f_y) - H(f_x))`` from two readout histograms.

    ``counts_x`` samples the dephased state in its own basis, ``counts_y``
    the same state in the second basis.
    """
    hx = shannon_entropy(_frequencies(counts_x))
    hy = shannon_entropy(_frequencies(counts_y))
    return float(np.log2(d)) - hx, hy - hx


def bootstrap_sigma(counts_x, counts_y, d, resamples=100, seed=0):
    """Bootstrap standard deviations of both estimators (histograms resampled multinomially)."""
    fx, fy = _frequencies(counts_x), _frequencies(counts_y)
    nx, ny = int(np.sum(counts_x)), int(np.sum(counts_y))
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    bx = rng.multinomial(nx, fx, size=resamples)
    by = rng.multinomial(ny, fy, size=resamples)
    est = np.array([estimate_measures_from_counts(a, b, d) for a, b in zip(bx, by)])
    return float(est[:, 0].std(ddof=1)), float(est[:, 1].std(ddof=1))


# ----------------------------------------------------------------------------
# text format
# ----------------------------------------------------------------------------


def _fmt(x):
    return f"{x:.12g}"


def circuit_to_text(c):
    """One gate per line: ``u <t> <theta> <phi> <lambda>``, ``cx <c> <t>``.

    Opaque gates are written ``unitary <q0,q1,...> <re,im> ...`` (row-major)
    and a leading ``#`` comment records the register sizes.
    """
    lines = [f"# system={c.num_system_qubits} ancilla={c.num_ancilla_qubits}"]
    for g in c.gates:
        if g.kind == "u":
            lines.append(f"u {g.targets[0]} " + " ".join(_fmt(a) for a in g.params))
        elif g.kind == "cx":
            lines.append(f"cx {g.control} {g.targets[0]}")
        else:
            entries = " ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in g.matrix.ravel())
            lines.append(f"unitary {','.join(map(str, g.targets))} {entries}")
    return "\n".join(lines) + "\n"


def _parse_gate_line(line):
    parts = line.split()
    if parts[0] == "u" and len(parts) == 5:
        return u(int(parts[1]), *map(float, parts[2:]))
    if parts[0] == "cx" and len(parts) == 3:
        return cx(int(parts[1]), int(parts[2]))
    if parts[0] == "unitary" and len(parts) > 2:
        targets = tuple(int(t) for t in parts[1].split(","))
        vals = [complex(*map(float, p.split(","))) for p in parts[2:]]
        dim = 2 ** len(targets)
        if len(vals) != dim * dim:
            raise BadParameter(f"unitary line has {len(vals)} entries, expected {dim * dim}")
        return Gate("unitary", targets, matrix=np.array(vals).reshape(dim, dim))
    raise BadParameter(f"cannot parse circuit line {line!r}")


def circuit_from_text(text):
    n_sys = n_anc = None
    gates = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                if key == "system":
                    n_sys = int(val)
                elif key == "ancilla":
                    n_anc = int(val)
            continue
        try:
            gates.append(_parse_gate_line(line))
        except BadParameter:
            raise
        except (ValueError, TypeError) as exc:
            raise BadParameter(f"cannot parse circuit line {line!r}") from exc
    if n_sys is None:
        top = max((q for g in gates for q in g.qubits()), default=1)
        n_sys = (top + 2) // 2
        n_anc = top + 1 - n_sys
    return Circuit(n_sys, n_anc if n_anc is not None else n_sys, gates)
