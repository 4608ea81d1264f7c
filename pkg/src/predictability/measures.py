"""Predictability, coherence and the relations tying them together.

All quantities are in bits unless noted. ``x`` and ``y`` are
:class:`~predictability.states.ObservableBasis` instances; "diagonal" always
means the diagonal in the named basis.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .channels import (
    apply,
    dephasing_channel,
    double_dephasing,
    monitoring_lambda,
    monitoring_theta,
    require_mu,
)
from .errors import (
    BadDimension,
    DimensionMismatch,
    NotPure,
    RankDeficient,
    SupportViolation,
    WrongDimension,
)
from .linalg import (
    partial_trace,
    relative_entropy,
    shannon_entropy,
    trace_distance,
    validate_density,
    von_neumann_entropy,
)
from .states import gell_mann_basis, gell_mann_decompose, overlap_coefficient

TOL = 1e-10


@dataclass(frozen=True)
class MeasureReport:
    name: str
    value: float
    basis_labels: tuple = ()
    tolerance_used: float = TOL


def _check(rho, x):
    rho = validate_density(rho)
    if rho.shape[0] != x.dim:
        raise DimensionMismatch(f"state dim {rho.shape[0]} vs basis dim {x.dim}")
    return rho


def _same_dim(x, y):
    if x.dim != y.dim:
        raise DimensionMismatch(f"basis dims {x.dim} and {y.dim} differ")


def dephase(rho, x):
    """``Phi_X(rho)`` computed by projection."""
    return apply(dephasing_channel(x), rho)


def predictability_vn(rho, x):
    """``log2 d - H(diag_x rho)``."""
    rho = _check(rho, x)
    return max(float(np.log2(x.dim)) - shannon_entropy(x.diagonal(rho)), 0.0)


def coherence_re(rho, x):
    """Relative entropy of coherence ``S(diag_x rho) - S(rho)``."""
    rho = _check(rho, x)
    value = shannon_entropy(x.diagonal(rho)) - von_neumann_entropy(rho)
    return max(value, 0.0) if value > -TOL else value


def predictability_linear(rho, x):
    """``sum_j rho_jj^2 - 1/d``."""
    rho = _check(rho, x)
    p = x.diagonal(rho)
    return float(np.sum(p**2) - 1.0 / x.dim)


def predictability_linear_pairwise(rho, x):
    """The same quantity as ``(1/d) sum_{j<k} (rho_jj - rho_kk)^2``."""
    rho = _check(rho, x)
    p = x.diagonal(rho)
    diff = p[:, None] - p[None, :]
    return float(np.sum(np.triu(diff, 1) ** 2) / x.dim)


def predictability_linear_gell_mann(rho, x):
    """The same quantity as half the squared diagonal Gell-Mann coefficients."""
    rho = _check(rho, x)
    coeffs = gell_mann_decompose(rho, gell_mann_basis(x.dim, x))
    return float(0.5 * np.sum(coeffs.diagonal**2))


def predictability_yasin(rho, x):
    """Qubit predictability ``|rho_00 - rho_11|``."""
    if x.dim != 2:
        raise WrongDimension(f"defined for qubits only, got d={x.dim}")
    rho = _check(rho, x)
    p = x.diagonal(rho)
    return float(abs(p[0] - p[1]))


def information_measure(rho):
    """``log2 d - S(rho)``."""
    rho = validate_density(rho)
    return float(np.log2(rho.shape[0])) - von_neumann_entropy(rho)


def check_pc_equality(rho, x, y):
    """``|P^X(rho) - C^Y(Phi_X rho)|`` for MU ``x``, ``y``."""
    require_mu(x, y)
    rho = _check(rho, x)
    return abs(predictability_vn(rho, x) - coherence_re(dephase(rho, x), y))


def check_pc_inequality(rho, x, y):
    """Return ``(C^Y(Phi_X rho), P^Y(Phi_X rho), P^X(rho))``.

    The first two always add up to the third, so coherence never exceeds
    the predictability it came from.
    """
    _same_dim(x, y)
    rho = _check(rho, x)
    dephased = dephase(rho, x)
    return coherence_re(dephased, y), predictability_vn(dephased, y), predictability_vn(rho, x)


def check_basis_sum_invariance(rho, x, y):
    _same_dim(x, y)
    rho = _check(rho, x)
    sx = coherence_re(rho, x) + predictability_vn(rho, x)
    sy = coherence_re(rho, y) + predictability_vn(rho, y)
    return abs(sy - sx)


def check_ccr(psi_ab, dims, x, tol=TOL):
    """Residual of ``C + P + S = log2 d_A`` on the reduction of a pure bipartite state."""
    psi_ab = validate_density(psi_ab)
    purity = float(np.real(np.trace(psi_ab @ psi_ab)))
    if abs(purity - 1.0) > tol:
        raise NotPure(f"purity {purity!r} differs from 1")
    d_a, d_b = dims
    rho_a = partial_trace(psi_ab, [d_a, d_b], [0])
    total = coherence_re(rho_a, x) + predictability_vn(rho_a, x) + von_neumann_entropy(rho_a)
    return abs(total - np.log2(d_a))


def incompatibility(rho, x, y):
    """``P^X(Phi_X rho) - P^Y(Phi_X rho)``."""
    _same_dim(x, y)
    rho = _check(rho, x)
    dephased = dephase(rho, x)
    return predictability_vn(dephased, x) - predictability_vn(dephased, y)


def check_entropic_cr(rho, x, y):
    """Return ``(P^X + P^Y, 2 log2 d + log2 c)``; the first never exceeds the second."""
    _same_dim(x, y)
    rho = _check(rho, x)
    lhs = predictability_vn(rho, x) + predictability_vn(rho, y)
    bound = 2 * np.log2(x.dim) + np.log2(overlap_coefficient(x, y))
    return lhs, float(bound)


def log_ratio_operator(rho, x, floor=1e-12):
    """``log2(I/d) - log2(rho_diag)`` as an operator diagonal in ``x``."""
    rho = _check(rho, x)
    p = x.diagonal(rho)
    if np.any(p <= floor):
        raise RankDeficient(f"diagonal entry {p.min():.3e} too small for a logarithm")
    w = -np.log2(x.dim) - np.log2(p)
    return x.vectors @ np.diag(w) @ x.vectors.conj().T


def witness_operator(rho, x, floor=1e-12):
    """Hermitian witness separating ``rho`` from the unpredictable states.

    ``Tr(W v) = 0`` for every state ``v`` with uniform ``x``-diagonal and
    ``Tr(W rho) = -P^X(rho)``. It is the log-ratio operator with its
    diagonal mean removed (so it is orthogonal to the free set) and rescaled
    to hit ``-P`` on ``rho``.
    """
    rho = _check(rho, x)
    p = x.diagonal(rho)
    if np.any(p <= floor):
        raise RankDeficient(f"diagonal entry {p.min():.3e} too small for a logarithm")
    w = -np.log2(x.dim) - np.log2(p)
    w = w - w.mean()
    at_rho = float(np.dot(w, p))
    pred = predictability_vn(rho, x)
    # at_rho = -(D(p||u) + D(u||p)) < 0 unless p is uniform, where w == 0
    scale = pred / -at_rho if at_rho < -1e-300 else 0.0
    return x.vectors @ np.diag(scale * w) @ x.vectors.conj().T


def _distance_fn(d_fn):
    if callable(d_fn):
        return d_fn
    table = {"relative_entropy": relative_entropy, "trace_distance": trace_distance}
    try:
        return table[d_fn]
    except KeyError:
        raise ValueError(f"unknown distance {d_fn!r}; choose from {sorted(table)}") from None


def monotone_from_distance(d_fn, rho, x, y):
    """``D(Phi_X rho, Phi_XY rho)`` for a contractive distance ``D``."""
    require_mu(x, y)
    rho = _check(rho, x)
    return float(_distance_fn(d_fn)(dephase(rho, x), apply(double_dephasing(x, y), rho)))


@dataclass(frozen=True)
class FreeStateGrid:
    """Search grid over the maximally-coherent-mixed family.

    The first phase is pinned at 0 (a global phase); the remaining ``d-1``
    phases run over ``[0, 2 pi)`` in steps of ``phase_step``.
    """

    p_values: tuple = field(default_factory=lambda: tuple(np.round(np.arange(20) * 0.05, 12)))
    phase_step: float = np.pi / 16


@lru_cache(maxsize=8)
def _grid_logs(d, p_values, phase_step):
    # log2 of every grid state, in the reference-basis coordinates
    phase_axis = np.arange(0.0, 2 * np.pi - 1e-12, phase_step)
    mesh = np.meshgrid(*([phase_axis] * (d - 1)), indexing="ij")
    phases = np.column_stack([np.zeros(mesh[0].size)] + [m.ravel() for m in mesh])
    psi = np.exp(1j * phases) / np.sqrt(d)
    proj = np.einsum("ni,nj->nij", psi, psi.conj())
    ps = np.asarray(p_values, dtype=float)
    ups = (1 - ps)[:, None, None, None] * np.eye(d) / d + ps[:, None, None, None] * proj[None]
    w, v = np.linalg.eigh(ups)
    finite = np.all(w > 1e-12, axis=-1)
    logw = np.log2(np.where(w > 1e-12, w, 1.0))
    # only the diagonal of log2(upsilon) meets a diagonal rho
    diag_log = np.einsum("...ik,...k,...ik->...i", v, logw, v.conj()).real
    return diag_log, finite, phases


def minimize_over_free_states(rho, x, grid=None):
    """Grid minimum of ``S(rho_diag || v)`` over free states ``v``.

    Returns ``(min_value, {"p": ..., "phases": ...})``. Grid points where
    the divergence is infinite are skipped.
    """
    grid = FreeStateGrid() if grid is None else grid
    if x.dim not in (2, 3):
        raise BadDimension(f"grid search supports d in {{2, 3}}, got {x.dim}")
    rho = _check(rho, x)
    p = x.diagonal(rho)
    p = np.clip(p, 0.0, 1.0)
    diag_log, finite, phases = _grid_logs(x.dim, tuple(grid.p_values), float(grid.phase_step))
    neg_h = float(np.sum(p[p > 0] * np.log2(p[p > 0])))
    values = neg_h - diag_log @ p
    values = np.where(finite, values, np.inf)
    # the maximally mixed state is part of the search space regardless of grid
    candidates = [(neg_h + np.log2(x.dim), 0.0, np.zeros(x.dim))]
    flat = int(np.argmin(values))
    ip, iphi = np.unravel_index(flat, values.shape)
    candidates.append((float(values[ip, iphi]), float(grid.p_values[ip]), phases[iphi]))
    best = min(candidates, key=lambda c: (c[0], c[1]))
    if not np.isfinite(best[0]):
        raise SupportViolation("every grid point diverges")
    return best[0], {"p": best[1], "phases": best[2]}


def check_monotonicity(rho, x, y, eps_grid=(0.0, 0.25, 0.5, 0.75, 1.0), free=None):
    """True iff Lambda never raises P, Theta preserves it and Lambda keeps free states free.

    ``free`` is an optional free state to test; ``I/d`` is used otherwise.
    """
    require_mu(x, y)
    rho = _check(rho, x)
    free = np.eye(x.dim) / x.dim if free is None else free
    p0 = predictability_vn(rho, x)
    for eps in eps_grid:
        lam = monitoring_lambda(x, y, eps)
        if predictability_vn(apply(lam, rho), x) > p0 + TOL:
            return False
        theta = monitoring_theta(x, eps)
        if abs(predictability_vn(apply(theta, rho), x) - p0) > TOL:
            return False
        if predictability_vn(apply(lam, free), x) >= TOL:
            return False
    return True
