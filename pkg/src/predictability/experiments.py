"""Trial drivers behind the command line: random trios and the two-qubit sweep."""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .channels import apply, dephasing_channel
from .circuits import (
    NoiseModel,
    build_nrvnm_circuit_1q,
    build_nrvnm_circuit_nq,
    estimate_measures_from_counts,
    sample_measurement,
)
from .errors import ConfigError
from .measures import coherence_re, predictability_vn
from .states import (
    b2_basis,
    computational_basis,
    fourier_mub_partner,
    haar_random_vector,
    random_basis,
)

CSV_HEADER = ("trial_id", "seed", "theta", "p_theory", "c_theory", "p_sim", "c_sim", "shots", "noise")
COMMANDS = ("random-trios", "fig4-sweep", "verify", "circuit-dump")


@dataclass(frozen=True)
class RunConfig:
    command: str = "random-trios"
    master_seed: int = 0
    trials: int = 150
    shots: int = 8192
    dimension: int = 2
    theta_steps: int = 13
    noise: NoiseModel = field(default_factory=NoiseModel)
    output_path: str = None
    mu: bool = True
    repetitions: int = 4
    tolerance_override: float = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.theta_steps < 2:
            raise ConfigError(f"theta_steps must be >= 2, got {self.theta_steps}")
        if self.shots < 1:
            raise ConfigError(f"shots must be >= 1, got {self.shots}")
        if self.repetitions < 1:
            raise ConfigError(f"repetitions must be >= 1, got {self.repetitions}")
        return self


@dataclass(frozen=True)
class ExperimentRecord:
    trial_id: int
    seed: int
    theta: float
    p_theory: float
    c_theory: float
    p_sim: float
    c_sim: float
    shots: int
    noise_enabled: bool
    p_sim_std: float = 0.0
    c_sim_std: float = 0.0

    def csv_row(self):
        def f(x):
            return "" if x is None else f"{x:.10g}"

        return [
            str(self.trial_id),
            str(self.seed),
            f(self.theta),
            f(self.p_theory),
            f(self.c_theory),
            f(self.p_sim),
            f(self.c_sim),
            str(self.shots),
            "true" if self.noise_enabled else "false",
        ]


def write_csv(records, path=None):
    """Write records sorted by ``trial_id``; returns the CSV text."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in sorted(records, key=lambda r: r.trial_id):
        w.writerow(r.csv_row())
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    return text


def child_seeds(seed, k):
    return [int(s) for s in np.random.SeedSequence(int(seed)).generate_state(k)]


def qubit_basis_angles(basis):
    """``(theta, phi)`` with ``U(theta, phi, 0)`` spanning the same projectors as ``basis``."""
    v0 = basis.vectors[:, 0]
    theta = 2 * math.acos(min(1.0, abs(v0[0])))
    phi = float(np.angle(v0[1]) - np.angle(v0[0])) if abs(v0[1]) > 1e-15 else 0.0
    return theta, phi


def nrvnm_circuit_for(basis):
    """Fig.-1-style circuit for a qubit basis, the n-qubit construction otherwise."""
    if basis.dim == 2:
        return build_nrvnm_circuit_1q(*qubit_basis_angles(basis))
    return build_nrvnm_circuit_nq(basis.vectors)


def shot_estimates(psi, x, y, shots, noise, seed, repetitions):
    """Per-repetition ``(P_est, C_est)`` from the NRvNM of ``x`` read out in ``x`` and ``y``.

    Qubit registers go through the circuit simulator. Other dimensions have
    no qubit circuit; the dephased state is then sampled directly.
    """
    d = x.dim
    out = []
    n = int(round(math.log2(d)))
    circuit = nrvnm_circuit_for(x) if 2**n == d else None
    for r in range(repetitions):
        sx, sy = child_seeds(np.random.SeedSequence([int(seed), r]).generate_state(1)[0], 2)
        if circuit is not None:
            cx_ = sample_measurement(circuit, psi, x.vectors.conj().T, shots, noise, sx)
            cy_ = sample_measurement(circuit, psi, y.vectors.conj().T, shots, noise, sy)
        else:
            if noise is not None and noise.enabled:
                raise ConfigError(f"the noise model needs a qubit register; d={d} is not 2**n")
            dephased = apply(dephasing_channel(x), np.outer(psi, psi.conj()))
            cx_ = _sample_diag(x.diagonal(dephased), shots, sx)
            cy_ = _sample_diag(y.diagonal(dephased), shots, sy)
        out.append(estimate_measures_from_counts(cx_, cy_, d))
    return np.array(out)


def _sample_diag(p, shots, seed):
    p = np.clip(p, 0.0, None)
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    return rng.multinomial(int(shots), p / p.sum())


def _summarize(est):
    std = est.std(axis=0, ddof=1) if est.shape[0] > 1 else np.zeros(2)
    return est.mean(axis=0), std


def run_random_trios(cfg):
    cfg.validate()
    d = cfg.dimension
    if d not in (2, 3, 4):
        raise ConfigError(f"random trios support d in {{2, 3, 4}}, got {d}")
    records = []
    for i in range(cfg.trials):
        seed = cfg.master_seed + i
        s_state, s_x, s_y, s_shots = child_seeds(seed, 4)
        psi = haar_random_vector(d, s_state)
        rho = np.outer(psi, psi.conj())
        x = random_basis(d, s_x)
        y = fourier_mub_partner(x) if cfg.mu else random_basis(d, s_y)
        p_th = predictability_vn(rho, x)
        c_th = coherence_re(apply(dephasing_channel(x), rho), y)
        est = shot_estimates(psi, x, y, cfg.shots, cfg.noise, s_shots, cfg.repetitions)
        mean, std = _summarize(est)
        records.append(
            ExperimentRecord(i, seed, None, p_th, c_th, mean[0], mean[1], cfg.shots,
                             cfg.noise.enabled, std[0], std[1])
        )
    return records


def fig4_state(theta):
    """Two-qubit vector ``c^2|00> + s c(|01> + |10>) + s^2|11>`` with ``c, s`` of ``theta/2``."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([c * c, s * c, s * c, s * s], dtype=np.complex128)


def fig4_closed_form(theta):
    """Predictability of the sweep state in the computational basis, by hand."""
    c2, s2 = math.cos(theta / 2) ** 2, math.sin(theta / 2) ** 2
    probs = [c2 * c2, s2 * s2, s2 * c2, s2 * c2]
    return 2.0 + sum(p * math.log2(p) for p in probs if p > 0)


def theta_grid(steps):
    return np.linspace(0.0, math.pi, int(steps))


def run_fig4_sweep(cfg):
    cfg.validate()
    if cfg.dimension != 4:
        raise ConfigError(f"the two-qubit sweep is fixed to d=4, got {cfg.dimension}")
    kappa = computational_basis(4)
    b2 = b2_basis()
    records = []
    for i, theta in enumerate(theta_grid(cfg.theta_steps)):
        seed = cfg.master_seed + i
        psi = fig4_state(theta)
        rho = np.outer(psi, psi.conj())
        p_th = predictability_vn(rho, kappa)
        c_th = coherence_re(apply(dephasing_channel(kappa), rho), b2)
        est = shot_estimates(psi, kappa, b2, cfg.shots, cfg.noise, child_seeds(seed, 1)[0],
                             cfg.repetitions)
        mean, std = _summarize(est)
        records.append(
            ExperimentRecord(i, seed, float(theta), p_th, c_th, mean[0], mean[1], cfg.shots,
                             cfg.noise.enabled, std[0], std[1])
        )
    return records
