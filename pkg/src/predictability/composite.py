"""Predictability of bipartite systems.

Subsystem A is the left tensor factor: product index ``(j, k)`` is row
``j * d_b + k``. Joint quantities use the product basis ``x (x) y``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, TooLarge
from .linalg import partial_trace, shannon_entropy, validate_density
from .measures import predictability_vn, TOL


@dataclass(frozen=True)
class BipartiteState:
    state: np.ndarray
    d_a: int
    d_b: int

    def __post_init__(self):
        rho = validate_density(self.state)
        if rho.shape[0] != self.d_a * self.d_b:
            raise DimensionMismatch(
                f"state dim {rho.shape[0]} != d_a * d_b = {self.d_a * self.d_b}"
            )
        rho = np.array(rho)
        rho.flags.writeable = False
        object.__setattr__(self, "state", rho)

    @property
    def rho_a(self):
        return partial_trace(self.state, [self.d_a, self.d_b], [0])

    @property
    def rho_b(self):
        return partial_trace(self.state, [self.d_a, self.d_b], [1])


def _product_diagonal(s, x, y):
    if x.dim != s.d_a or y.dim != s.d_b:
        raise DimensionMismatch(
            f"basis dims ({x.dim}, {y.dim}) vs subsystem dims ({s.d_a}, {s.d_b})"
        )
    return x.tensor(y).diagonal(s.state).reshape(s.d_a, s.d_b)


def joint_predictability(s, x, y):
    """``log2(d_a d_b) - H(diag_{x(x)y} rho_AB)``."""
    p = _product_diagonal(s, x, y)
    return float(np.log2(s.d_a * s.d_b)) - shannon_entropy(p.ravel())


def mutual_information_diag(s, x, y):
    """Classical mutual information of the doubly dephased joint state."""
    p = _product_diagonal(s, x, y)
    value = shannon_entropy(p.sum(1)) + shannon_entropy(p.sum(0)) - shannon_entropy(p.ravel())
    return max(value, 0.0) if value > -TOL else value


def conditional_entropy_diag(s, x, y):
    """``S(A|B)`` of the doubly dephased joint state."""
    p = _product_diagonal(s, x, y)
    return shannon_entropy(p.ravel()) - shannon_entropy(p.sum(0))


def check_joint_decomposition(s, x, y):
    """Residual of ``P_AB = P_A + P_B + I_{A:B}``."""
    lhs = joint_predictability(s, x, y)
    rhs = (
        predictability_vn(s.rho_a, x)
        + predictability_vn(s.rho_b, y)
        + mutual_information_diag(s, x, y)
    )
    return abs(lhs - rhs)


def conditional_predictability(s, x, y):
    """``P(rho_AB) - P(rho_B)``."""
    return joint_predictability(s, x, y) - predictability_vn(s.rho_b, y)


def conditional_predictability_relative(s, x, y):
    """The same quantity as the divergence ``D(p_AB || u_A (x) p_B)``."""
    p = _product_diagonal(s, x, y)
    ref = np.outer(np.full(s.d_a, 1.0 / s.d_a), p.sum(0))
    mask = p > 0
    return float(np.sum(p[mask] * np.log2(p[mask] / ref[mask])))


def check_additivity(rho, x, n):
    """``|P(rho^{(x)n}) - n P(rho)|`` with the n-fold product basis."""
    d = x.dim
    if n < 1 or d**n > 64:
        raise TooLarge(f"d^n = {d}^{n} exceeds 64")
    big, basis = rho, x
    for _ in range(n - 1):
        big = np.kron(big, rho)
        basis = basis.tensor(x)
    return abs(predictability_vn(big, basis) - n * predictability_vn(rho, x))


def check_conditional_cr(s, x, y):
    """Residual of ``P(A|B) + S(A|B) = log2 d_a``.

    Raises ``ArithmeticError`` if the classical conditional entropy comes
    out negative, which would mean the dephasing went wrong.
    """
    cond = conditional_entropy_diag(s, x, y)
    if cond < -TOL:
        raise ArithmeticError(f"conditional entropy {cond:.3e} of a classical state is negative")
    return abs(conditional_predictability(s, x, y) + cond - np.log2(s.d_a))


def maximally_entangled(d):
    psi = np.eye(d).ravel() / np.sqrt(d)
    return np.outer(psi, psi.conj())
