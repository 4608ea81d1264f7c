"""Randomized property checks run by ``verify``.

Each check returns its worst residual over ``trials`` seeded samples;
for inequalities the residual is the largest violation (0 when it holds).
"""

from dataclasses import dataclass

import numpy as np

from . import channels as ch
from . import circuits as cq
from . import composite as cp
from . import linalg as la
from . import measures as ms
from . import states as st


@dataclass(frozen=True)
class PropertyResult:
    name: str
    max_residual: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.max_residual <= self.tolerance)


def _dims():
    return (2, 3, 4)


def _seeds(trials, seed, salt):
    return [int(s) for s in np.random.SeedSequence([seed, salt]).generate_state(trials)]


# --- linalg -----------------------------------------------------------------


def entropy_bounds(trials, seed):
    worst = 0.0
    for d in _dims():
        for s in _seeds(trials, seed, d):
            h = la.von_neumann_entropy(st.random_density(d, s))
            worst = max(worst, -h, h - np.log2(d))
    return worst


def klein_inequality(trials, seed):
    worst = 0.0
    for d in _dims():
        for s in _seeds(trials, seed, 10 + d):
            a, b = st.random_density(d, s), st.random_density(d, s + 1)
            worst = max(worst, -la.relative_entropy(a, b), la.relative_entropy(a, a))
    return worst


def trace_distance_contraction(trials, seed):
    worst = 0.0
    for d in _dims():
        for s in _seeds(trials, seed, 20 + d):
            a, b = st.random_density(d, s), st.random_density(d, s + 1)
            x = st.random_basis(d, s + 2)
            chans = [
                ch.dephasing_channel(x),
                ch.monitoring_lambda(x, st.fourier_mub_partner(x), 0.4),
                ch.monitoring_theta(x, 0.6),
            ]
            before = la.trace_distance(a, b)
            for c in chans:
                worst = max(worst, la.trace_distance(c(a), c(b)) - before)
    return worst


def partial_trace_of_product(trials, seed):
    worst = 0.0
    for s in _seeds(trials, seed, 30):
        rng = np.random.default_rng(s)
        da, db = rng.integers(2, 5, size=2)
        a = rng.standard_normal((da, da)) + 1j * rng.standard_normal((da, da))
        b = rng.standard_normal((db, db)) + 1j * rng.standard_normal((db, db))
        got = la.partial_trace(la.kron(a, b), [da, db], [0])
        worst = max(worst, float(np.max(np.abs(got - a * np.trace(b)))))
    return worst


def linear_entropy_identity(trials, seed):
    worst = 0.0
    for d in _dims():
        for s in _seeds(trials, seed, 40 + d):
            p = np.random.default_rng(s).dirichlet(np.ones(d))
            got = la.linear_relative_entropy(np.diag(p), np.eye(d) / d)
            worst = max(worst, abs(got - (np.sum(p**2) - 1 / d)))
    return worst


# --- states -----------------------------------------------------------------


def fourier_unbiased(trials, seed):
    worst = 0.0
    for d in range(2, 7):
        for s in _seeds(max(1, trials // 5), seed, 50 + d):
            b = st.random_basis(d, s)
            worst = max(worst, st.mu_deviation(b, st.fourier_mub_partner(b)))
    return worst


def free_states_are_free(trials, seed):
    worst = 0.0
    for d in _dims():
        x = st.random_basis(d, seed + d)
        for p in np.linspace(0, 1, 5):
            for s in _seeds(max(1, trials // 5), seed, 60 + d):
                phases = np.random.default_rng(s).uniform(0, 2 * np.pi, d)
                v = st.free_state(d, p, phases, x)
                worst = max(worst, float(np.max(np.abs(x.diagonal(v) - 1 / d))))
    return worst


def gell_mann_round_trip(trials, seed):
    worst = 0.0
    for d in _dims():
        gm = st.gell_mann_basis(d, st.random_basis(d, seed + 7))
        for s in _seeds(trials, seed, 70 + d):
            rho = st.random_density(d, s)
            back = st.gell_mann_reconstruct(st.gell_mann_decompose(rho, gm), gm)
            worst = max(worst, float(np.linalg.norm(back - rho)))
    return worst


def free_state_diagonal_coefficients(trials, seed):
    worst = 0.0
    for d in _dims():
        x = st.random_basis(d, seed + 11)
        gm = st.gell_mann_basis(d, x)
        for s in _seeds(trials, seed, 80 + d):
            rng = np.random.default_rng(s)
            v = st.free_state(d, rng.uniform(), rng.uniform(0, 2 * np.pi, d), x)
            worst = max(worst, float(np.max(np.abs(st.gell_mann_decompose(v, gm).diagonal))))
    return worst


def haar_collisions(trials, seed):
    # residual: largest pairwise fidelity among distinct seeds, against 1 - 1e-6
    vecs = [st.haar_random_vector(2, s) for s in range(seed, seed + max(trials, 2))]
    m = np.abs(np.array(vecs).conj() @ np.array(vecs).T) ** 2
    np.fill_diagonal(m, 0.0)
    return max(0.0, float(m.max()) - (1 - 1e-6))


# --- channels ---------------------------------------------------------------


def channels_cptp(trials, seed):
    worst = 0.0
    for d in _dims():
        x = st.random_basis(d, seed + d)
        y = st.fourier_mub_partner(x)
        chans = [ch.dephasing_channel(x), ch.double_dephasing(x, y),
                 ch.diagonal_unitary_channel(x, np.arange(d))]
        for eps in (0.0, 0.25, 0.5, 0.75, 1.0):
            chans += [ch.monitoring_lambda(x, y, eps), ch.monitoring_theta(x, eps)]
        for c in chans:
            worst = max(worst, float(np.linalg.norm(c.completeness() - np.eye(d))))
    return worst


def dephasing_idempotent(trials, seed):
    worst = 0.0
    for d in _dims():
        for s in _seeds(trials, seed, 90 + d):
            x = st.random_basis(d, s)
            rho = st.random_density(d, s + 1)
            once = ch.dephasing_channel(x)(rho)
            worst = max(worst, float(np.linalg.norm(ch.dephasing_channel(x)(once) - once)))
    return worst


def mu_double_dephasing_constant(trials, seed):
    worst = 0.0
    for d in _dims():
        x = st.random_basis(d, seed + d)
        dd = ch.double_dephasing(x, st.fourier_mub_partner(x))
        outs = [dd(st.random_density(d, s)) for s in _seeds(trials, seed, 100 + d)]
        ref = outs[0]
        worst = max([worst] + [float(np.linalg.norm(o - ref)) for o in outs])
    return worst


def theta_keeps_dephased(trials, seed):
    worst = 0.0
    for d in _dims():
        for s in _seeds(trials, seed, 110 + d):
            x = st.random_basis(d, s)
            rho = st.random_density(d, s + 1)
            deph = ch.dephasing_channel(x)
            for eps in (0.0, 0.25, 0.5, 0.75, 1.0):
                diff = deph(ch.monitoring_theta(x, eps)(rho)) - deph(rho)
                worst = max(worst, float(np.linalg.norm(diff)))
    return worst


def diagonal_unitary_keeps_diagonal(trials, seed):
    worst = 0.0
    for d in _dims():
        for s in _seeds(trials, seed, 120 + d):
            x = st.random_basis(d, s)
            rho = st.random_density(d, s + 1)
            phases = np.random.default_rng(s).uniform(0, 2 * np.pi, d)
            out = ch.diagonal_unitary_channel(x, phases)(rho)
            worst = max(worst, float(np.max(np.abs(x.diagonal(out) - x.diagonal(rho)))))
    return worst


# --- measures ---------------------------------------------------------------


def _trio(d, s, mu):
    rho = st.random_density(d, s, rank=1 if s % 2 else None)
    x = st.random_basis(d, s + 1)
    y = st.fourier_mub_partner(x) if mu else st.random_basis(d, s + 2)
    return rho, x, y


def pc_equality(trials, seed):
    worst = 0.0
    for d in _dims():
        for s in _seeds(trials, seed, 130 + d):
            worst = max(worst, ms.check_pc_equality(*_trio(d, s, True)))
    return worst


def pc_inequality_violation(trials, seed):
    worst = 0.0
    for d in _dims():
        for s in _seeds(trials, seed, 140 + d):
            c, _, p = ms.check_pc_inequality(*_trio(d, s, False))
            worst = max(worst, c - p)
    return worst


def pc_decomposition(trials, seed):
    worst = 0.0
    for d in _dims():
        for s in _seeds(trials, seed, 150 + d):
            c, gap, p = ms.check_pc_inequality(*_trio(d, s, False))
            worst = max(worst, abs(c + gap - p))
    return worst


def basis_sum_invariance(trials, seed):
    worst = 0.0
    for d in _dims():
        for s in _seeds(trials, seed, 160 + d):
            rho, x, y = _trio(d, s, False)
            info = ms.information_measure(rho)
            worst = max(
                worst,
                ms.check_basis_sum_invariance(rho, x, y),
                abs(ms.coherence_re(rho, x) + ms.predictability_vn(rho, x) - info),
            )
    return worst


def complementarity_bound(trials, seed):
    # C + P <= log2 d, with equality exactly for pure inputs
    worst = 0.0
    for d in _dims():
        for s in _seeds(trials, seed, 170 + d):
            rho, x, _ = _trio(d, s, False)
            total = ms.coherence_re(rho, x) + ms.predictability_vn(rho, x)
            gap = np.log2(d) - total
            pure = np.real(np.trace(rho @ rho)) > 1 - 1e-9
            worst = max(worst, -gap, abs(gap) if pure else 0.0)
            if not pure and gap <= 1e-9:
                worst = max(worst, 1.0)
    return worst


def strict_decrease(trials, seed):
    worst = 0.0
    for d in _dims():
        for s in _seeds(trials, seed, 180 + d):
            rho, x, y = _trio(d, s, True)
            p0 = ms.predictability_vn(rho, x)
            if p0 <= 1e-6:
                continue
            for eps in (0.25, 0.5, 0.75, 1.0):
                p1 = ms.predictability_vn(ch.monitoring_lambda(x, y, eps)(rho), x)
                worst = max(worst, p1 - (p0 - 1e-12) if p1 >= p0 - 1e-12 else 0.0)
    return worst


def linear_predictability_forms(trials, seed):
    worst = 0.0
    for d in _dims():
        for s in _seeds(trials, seed, 190 + d):
            rho, x, _ = _trio(d, s, False)
            worst = max(worst, abs(ms.predictability_linear(rho, x)
                                   - ms.predictability_linear_pairwise(rho, x)))
    return worst


def witness_contract(trials, seed):
    worst = 0.0
    for d in _dims():
        for s in _seeds(max(1, trials // 5), seed, 200 + d):
            rho = st.random_density(d, s)
            x = st.random_basis(d, s + 1)
            w = ms.witness_operator(rho, x)
            worst = max(worst, abs(np.real(np.trace(w @ rho)) + ms.predictability_vn(rho, x)))
            rng = np.random.default_rng(s)
            for _ in range(100):
                v = st.free_state(d, rng.uniform(), rng.uniform(0, 2 * np.pi, d), x)
                worst = max(worst, abs(np.real(np.trace(w @ v))))
    return worst


# --- composite --------------------------------------------------------------

_PAIRS = ((2, 2), (2, 3), (3, 3))


def _bipartite(da, db, s):
    rho = st.random_density(da * db, s, rank=(s % (da * db)) + 1)
    return cp.BipartiteState(rho, da, db), st.random_basis(da, s + 1), st.random_basis(db, s + 2)


def joint_decomposition(trials, seed):
    worst = 0.0
    for da, db in _PAIRS:
        for s in _seeds(trials, seed, 210 + 10 * da + db):
            worst = max(worst, cp.check_joint_decomposition(*_bipartite(da, db, s)))
    return worst


def maximally_entangled_values(trials, seed):
    worst = 0.0
    for d in (2, 3, 4):
        bell = cp.BipartiteState(cp.maximally_entangled(d), d, d)
        k = st.computational_basis(d)
        worst = max(
            worst,
            ms.predictability_vn(bell.rho_a, k),
            ms.predictability_vn(bell.rho_b, k),
            abs(cp.joint_predictability(bell, k, k) - np.log2(d)),
        )
    return worst


def conditional_dominates_marginal(trials, seed):
    worst = 0.0
    for da, db in _PAIRS:
        for s in _seeds(trials, seed, 240 + 10 * da + db):
            bs, x, y = _bipartite(da, db, s)
            worst = max(worst, ms.predictability_vn(bs.rho_a, x) - cp.conditional_predictability(bs, x, y))
    return worst


def product_additivity(trials, seed):
    worst = 0.0
    for da, db in _PAIRS:
        for s in _seeds(trials, seed, 270 + 10 * da + db):
            a, b = st.random_density(da, s), st.random_density(db, s + 1)
            x, y = st.random_basis(da, s + 2), st.random_basis(db, s + 3)
            bs = cp.BipartiteState(np.kron(a, b), da, db)
            worst = max(worst, abs(cp.joint_predictability(bs, x, y)
                                   - ms.predictability_vn(a, x) - ms.predictability_vn(b, y)))
    return worst


# --- circuits ---------------------------------------------------------------


def circuit_unitarity(trials, seed):
    worst = 0.0
    rng = np.random.default_rng(seed)
    for _ in range(max(1, trials // 10)):
        c1 = cq.build_nrvnm_circuit_1q(*rng.uniform(0, 2 * np.pi, 2))
        c2 = cq.build_nrvnm_circuit_nq(st.haar_random_unitary(4, int(rng.integers(1 << 31))))
        for c in (c1, c2):
            m = cq.circuit_unitary(c)
            worst = max(worst, float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]))))
    return worst


def circuit_channel_equivalence(trials, seed):
    worst = 0.0
    rng = np.random.default_rng(seed)
    for _ in range(max(1, trials // 2)):
        theta, phi = rng.uniform(0, 2 * np.pi, 2)
        chk = cq.circuit_as_channel(cq.build_nrvnm_circuit_1q(theta, phi),
                                    cq.nrvnm_basis_1q(theta, phi), 20, int(rng.integers(1 << 31)))
        worst = max(worst, chk.max_deviation)
    for _ in range(max(1, trials // 5)):
        v = st.haar_random_unitary(4, int(rng.integers(1 << 31)))
        chk = cq.circuit_as_channel(cq.build_nrvnm_circuit_nq(v), st.ObservableBasis(v), 20,
                                    int(rng.integers(1 << 31)))
        worst = max(worst, chk.max_deviation)
    return worst


def zero_noise_matches_noiseless(trials, seed):
    c = cq.build_nrvnm_circuit_nq(st.b2_basis().vectors)
    zero = cq.NoiseModel(0.0, 0.0, True)
    worst = 0.0
    for s in _seeds(max(1, trials // 10), seed, 300):
        psi = st.haar_random_vector(4, s)
        a = cq.sample_measurement(c, psi, None, 4096, cq.NoiseModel.off(), s)
        b = cq.sample_measurement(c, psi, None, 4096, zero, s)
        worst = max(worst, float(np.abs(a - b).sum()))
    return worst


PROPERTIES = (
    ("linalg: 0 <= S(rho) <= log2 d", entropy_bounds, 1e-9),
    ("linalg: Klein inequality / S(rho||rho)=0", klein_inequality, 1e-10),
    ("linalg: trace distance contracts under channels", trace_distance_contraction, 1e-9),
    ("linalg: Tr_B(a (x) b) = a Tr b", partial_trace_of_product, 1e-12),
    ("linalg: S_l(diag, I/d) = sum p^2 - 1/d", linear_entropy_identity, 1e-12),
    ("states: Fourier partner unbiased, d<=6", fourier_unbiased, 1e-12),
    ("states: free_state family is free", free_states_are_free, 1e-12),
    ("states: Gell-Mann round trip", gell_mann_round_trip, 1e-10),
    ("states: free states have no diagonal GM part", free_state_diagonal_coefficients, 1e-10),
    ("states: Haar seeds do not collide", haar_collisions, 0.0),
    ("channels: completeness", channels_cptp, 1e-10),
    ("channels: dephasing idempotent", dephasing_idempotent, 1e-12),
    ("channels: MU double dephasing is constant", mu_double_dephasing_constant, 1e-10),
    ("channels: Theta keeps the dephased state", theta_keeps_dephased, 1e-12),
    ("channels: diagonal unitary keeps diagonal", diagonal_unitary_keeps_diagonal, 1e-12),
    ("measures: P^X = C^Y(Phi_X) for MU", pc_equality, 1e-10),
    ("measures: C^Y(Phi_X) <= P^X", pc_inequality_violation, 1e-10),
    ("measures: C^Y + P^Y(Phi_X) = P^X", pc_decomposition, 1e-10),
    ("measures: C + P basis invariant = I(rho)", basis_sum_invariance, 1e-10),
    ("measures: C + P <= log2 d, tight iff pure", complementarity_bound, 1e-9),
    ("measures: Lambda strictly lowers P", strict_decrease, 0.0),
    ("measures: linear predictability forms agree", linear_predictability_forms, 1e-12),
    ("measures: witness contract", witness_contract, 1e-10),
    ("composite: P_AB = P_A + P_B + I", joint_decomposition, 1e-10),
    ("composite: maximally entangled values", maximally_entangled_values, 1e-10),
    ("composite: P(A|B) >= P(A)", conditional_dominates_marginal, 1e-10),
    ("composite: product additivity", product_additivity, 1e-10),
    ("circuits: end-to-end unitary", circuit_unitarity, 1e-10),
    ("circuits: circuit equals dephasing channel", circuit_channel_equivalence, 1e-10),
    ("circuits: zero noise = noiseless sampling", zero_noise_matches_noiseless, 0.0),
)


def run_properties(trials=100, seed=0, tolerance=None):
    """Run every property; ``tolerance`` replaces each property's own threshold."""
    out = []
    for name, fn, tol in PROPERTIES:
        res = float(fn(trials, seed))
        out.append(PropertyResult(name, res, tol if tolerance is None else tolerance))
    return out


def format_report(results):
    width = max(len(r.name) for r in results)
    lines = [f"{'property'.ljust(width)}  {'max residual':>12}  {'tolerance':>9}  result"]
    for r in results:
        lines.append(
            f"{r.name.ljust(width)}  {r.max_residual:12.3e}  {r.tolerance:9.1e}  "
            f"{'PASS' if r.passed else 'FAIL'}"
        )
    return "\n".join(lines)
