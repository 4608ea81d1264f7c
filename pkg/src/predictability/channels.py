"""CPTP maps in Kraus form: dephasing, monitoring maps and free unitaries."""

from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, DimensionMismatch, NotMutuallyUnbiased
from .linalg import as_matrix
from .states import mu_deviation, random_density

CPTP_TOL = 1e-10
MU_TOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """Channel ``rho -> sum_k K_k rho K_k^dagger``."""

    kraus_operators: tuple
    label: str = ""

    def __post_init__(self):
        ops = []
        for k in self.kraus_operators:
            k = np.array(as_matrix(k))
            k.flags.writeable = False
            ops.append(k)
        if not ops:
            raise BadParameter("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise DimensionMismatch("Kraus operators have inconsistent shapes")
        object.__setattr__(self, "kraus_operators", tuple(ops))

    @property
    def dim_in(self):
        return self.kraus_operators[0].shape[1]

    @property
    def dim_out(self):
        return self.kraus_operators[0].shape[0]

    def __call__(self, rho):
        return apply(self, rho)

    def completeness(self):
        return sum(k.conj().T @ k for k in self.kraus_operators)


def apply(ch, rho):
    rho = as_matrix(rho)
    if rho.shape != (ch.dim_in, ch.dim_in):
        raise DimensionMismatch(f"state shape {rho.shape} vs channel input dim {ch.dim_in}")
    ks = np.stack(ch.kraus_operators)
    return np.einsum("kij,jl,kml->im", ks, rho, ks.conj())


def compose(outer, inner, label=None):
    """``outer o inner`` as a Kraus list of all pairwise products."""
    if outer.dim_in != inner.dim_out:
        raise DimensionMismatch("channels cannot be composed: dimensions differ")
    ops = [a @ b for a in outer.kraus_operators for b in inner.kraus_operators]
    return KrausChannel(tuple(ops), label or f"{outer.label}*{inner.label}")


def identity_channel(d):
    return KrausChannel((np.eye(d),), "id")


def dephasing_channel(basis):
    """Non-revealing projective measurement ``rho -> sum_j X_j rho X_j``."""
    return KrausChannel(tuple(basis.projectors()), f"dephase[{basis.label}]")


def double_dephasing(x, y):
    """``Phi_Y o Phi_X``; maps every state to ``I/d`` when ``x`` and ``y`` are MU."""
    if x.dim != y.dim:
        raise DimensionMismatch(f"basis dims {x.dim} and {y.dim} differ")
    return compose(dephasing_channel(y), dephasing_channel(x), f"dephase[{y.label}.{x.label}]")


def _check_eps(eps):
    if not 0.0 <= eps <= 1.0:
        raise BadParameter(f"eps={eps} outside [0, 1]")


def _mixture(eps, destroyer, label):
    d = destroyer.dim_in
    ops = [np.sqrt(1 - eps) * np.eye(d)]
    ops += [np.sqrt(eps) * k for k in destroyer.kraus_operators]
    return KrausChannel(tuple(ops), label)


def require_mu(x, y, tol=MU_TOL):
    if x.dim != y.dim:
        raise DimensionMismatch(f"basis dims {x.dim} and {y.dim} differ")
    dev = mu_deviation(x, y)
    if dev > tol:
        raise NotMutuallyUnbiased(f"bases {x.label!r}, {y.label!r}: overlap deviation {dev:.3e}")


def monitoring_lambda(x, y, eps):
    """``rho -> (1-eps) rho + eps Phi_XY(rho)``, which erases predictability at eps=1."""
    require_mu(x, y)
    _check_eps(eps)
    return _mixture(eps, double_dephasing(x, y), f"Lambda[{eps:g}]")


def monitoring_theta(x, eps):
    """``rho -> (1-eps) rho + eps Phi_X(rho)``, which never changes predictability."""
    _check_eps(eps)
    return _mixture(eps, dephasing_channel(x), f"Theta[{eps:g}]")


def diagonal_unitary_channel(x, phases):
    """Single Kraus operator ``sum_j exp(i phases_j) |x_j><x_j|``."""
    phases = np.asarray(phases, dtype=float).ravel()
    if phases.shape != (x.dim,):
        raise BadParameter(f"expected {x.dim} phases, got {phases.shape[0]}")
    u = x.vectors @ np.diag(np.exp(1j * phases)) @ x.vectors.conj().T
    return KrausChannel((u,), "diag-unitary")


def is_cptp(ch, tol=CPTP_TOL):
    dev = np.linalg.norm(ch.completeness() - np.eye(ch.dim_in))
    return bool(dev <= tol)


def check_commuting_condition(x, y, eps, samples=50, seed=0):
    """Largest ``||Lambda(Phi_XY(rho)) - Phi_XY(Lambda(rho))||_F`` over random states."""
    lam = monitoring_lambda(x, y, eps)
    destroy = double_dephasing(x, y)
    worst = 0.0
    for s in range(samples):
        rho = random_density(x.dim, seed + s)
        diff = apply(lam, apply(destroy, rho)) - apply(destroy, apply(lam, rho))
        worst = max(worst, float(np.linalg.norm(diff)))
    return worst
