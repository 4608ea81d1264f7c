"""States, observable eigenbases, mutually unbiased partners and Gell-Mann geometry."""

from dataclasses import dataclass, field

import numpy as np

from .errors import BadDimension, BadParameter, DimensionMismatch, NotNormalized
from .linalg import as_matrix, validate_density

GRAM_TOL = 1e-10


def _rng(seed):
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def _frozen(a):
    a = np.array(a, dtype=np.complex128)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class ObservableBasis:
    """Ordered orthonormal eigenbasis ``{|x_j>}`` of a discrete observable.

    ``vectors`` is the unitary whose ``j``-th column is ``|x_j>``. Only the
    eigenprojectors enter any measure, so eigenvalues are not stored.
    """

    vectors: np.ndarray
    label: str = ""

    def __post_init__(self):
        v = as_matrix(self.vectors)
        if v.shape[0] != v.shape[1]:
            raise DimensionMismatch(f"basis matrix must be square, got {v.shape}")
        dev = np.linalg.norm(v.conj().T @ v - np.eye(v.shape[0]))
        if dev > GRAM_TOL:
            raise BadParameter(f"basis vectors are not orthonormal (Gram deviation {dev:.3e})")
        object.__setattr__(self, "vectors", _frozen(v))

    @property
    def dim(self):
        return self.vectors.shape[0]

    def vector(self, j):
        return self.vectors[:, j]

    def projectors(self):
        v = self.vectors
        return [np.outer(v[:, j], v[:, j].conj()) for j in range(self.dim)]

    def diagonal(self, rho):
        """Probabilities ``<x_j|rho|x_j>``."""
        rho = as_matrix(rho)
        if rho.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"state shape {rho.shape} vs basis dim {self.dim}")
        v = self.vectors
        return np.einsum("ij,ik,kj->j", v.conj(), rho, v).real

    def to_basis(self, rho):
        """Matrix elements ``<x_j|rho|x_k>``."""
        return self.vectors.conj().T @ as_matrix(rho) @ self.vectors

    def from_basis(self, m):
        return self.vectors @ as_matrix(m) @ self.vectors.conj().T

    def tensor(self, other, label=None):
        lab = label if label is not None else f"{self.label}(x){other.label}"
        return ObservableBasis(np.kron(self.vectors, other.vectors), lab)


def computational_basis(d):
    if d < 2:
        raise BadDimension(f"dimension must be >= 2, got {d}")
    return ObservableBasis(np.eye(d), "computational")


def pure_state(amplitudes, tol=1e-10):
    psi = np.asarray(amplitudes, dtype=np.complex128).ravel()
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise NotNormalized(f"state vector has norm {norm!r}")
    return np.outer(psi, psi.conj())


def haar_random_vector(d, seed):
    if d < 2:
        raise BadDimension(f"dimension must be >= 2, got {d}")
    rng = _rng(seed)
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def haar_random_pure(d, seed):
    """Haar-distributed pure density operator, deterministic in ``seed``."""
    return pure_state(haar_random_vector(d, seed))


def haar_random_unitary(d, seed):
    """Haar unitary from the QR decomposition of a Ginibre matrix (phase-corrected)."""
    if d < 2:
        raise BadDimension(f"dimension must be >= 2, got {d}")
    rng = _rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_basis(d, seed):
    return ObservableBasis(haar_random_unitary(d, seed), f"haar[{seed}]")


def random_density(d, seed, rank=None):
    """Random mixed state ``G G^dagger / Tr`` with ``G`` a ``d x rank`` Ginibre matrix."""
    if d < 2:
        raise BadDimension(f"dimension must be >= 2, got {d}")
    rank = d if rank is None else int(rank)
    if not 1 <= rank <= d:
        raise BadParameter(f"rank must lie in [1, {d}], got {rank}")
    rng = _rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def fourier_mub_partner(basis):
    """The discrete-Fourier basis ``|y_k> = d^-1/2 sum_j exp(2 pi i jk/d) |x_j>``."""
    d = basis.dim
    j = np.arange(d)
    f = np.exp(2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)
    return ObservableBasis(basis.vectors @ f, f"fourier({basis.label})")


def _sx_eigen():
    s = 1 / np.sqrt(2)
    return np.array([s, s]), np.array([s, -s])


def _sy_eigen():
    s = 1 / np.sqrt(2)
    return np.array([s, 1j * s]), np.array([s, -1j * s])


def b2_basis():
    """Two-qubit basis mutually unbiased to the computational one.

    Built from the sigma_x eigenstates ``|0_0>, |1_0>`` and the sigma_y
    eigenstates ``|0_1>, |1_1>``::

        (|0_1 0_0> + i|1_1 1_0>)/sqrt2, (|0_1 0_0> - i|1_1 1_0>)/sqrt2,
        (|1_1 0_0> + i|0_1 1_0>)/sqrt2, (|1_1 0_0> - i|0_1 1_0>)/sqrt2
    """
    x0, x1 = _sx_eigen()
    y0, y1 = _sy_eigen()
    s = 1 / np.sqrt(2)
    cols = [
        s * (np.kron(y0, x0) + 1j * np.kron(y1, x1)),
        s * (np.kron(y0, x0) - 1j * np.kron(y1, x1)),
        s * (np.kron(y1, x0) + 1j * np.kron(y0, x1)),
        s * (np.kron(y1, x0) - 1j * np.kron(y0, x1)),
    ]
    return ObservableBasis(np.column_stack(cols), "B2")


def overlap_coefficient(x, y):
    """``max_{j,k} |<x_j|y_k>|^2``."""
    if x.dim != y.dim:
        raise DimensionMismatch(f"basis dims {x.dim} and {y.dim} differ")
    return float(np.max(np.abs(x.vectors.conj().T @ y.vectors) ** 2))


def mu_deviation(x, y):
    """Largest departure of any squared overlap from ``1/d``."""
    if x.dim != y.dim:
        raise DimensionMismatch(f"basis dims {x.dim} and {y.dim} differ")
    return float(np.max(np.abs(np.abs(x.vectors.conj().T @ y.vectors) ** 2 - 1.0 / x.dim)))


def free_state(d, p, phases, basis):
    """Maximally coherent mixed state ``(1-p) I/d + p |psi_d><psi_d|``.

    ``|psi_d> = d^-1/2 sum_j exp(i phases_j) |x_j>``.
    """
    if basis.dim != d:
        raise DimensionMismatch(f"basis dim {basis.dim} vs d={d}")
    if not 0.0 <= p <= 1.0:
        raise BadParameter(f"mixing weight p={p} outside [0, 1]")
    phases = np.asarray(phases, dtype=float).ravel()
    if phases.shape != (d,):
        raise BadParameter(f"expected {d} phases, got {phases.shape[0]}")
    psi = basis.vectors @ (np.exp(1j * phases) / np.sqrt(d))
    return (1 - p) * np.eye(d) / d + p * np.outer(psi, psi.conj())


def is_free_state(rho, basis, tol=1e-10):
    """True iff every diagonal element of ``rho`` in ``basis`` is ``1/d`` within ``tol``."""
    diag = basis.diagonal(rho)
    return bool(np.all(np.abs(diag - 1.0 / basis.dim) <= tol))


@dataclass(frozen=True)
class GellMannBasis:
    """Generalized Gell-Mann generators built on a reference basis.

    ``symmetric`` and ``antisymmetric`` are keyed by the 0-based pair
    ``(j, k)`` with ``j < k``; ``diagonal[m-1]`` is the ``m``-th diagonal
    generator.
    """

    dim: int
    diagonal: tuple
    symmetric: dict = field(repr=False)
    antisymmetric: dict = field(repr=False)
    identity: np.ndarray = field(repr=False)

    def generators(self):
        """All non-identity generators: diagonal, then symmetric, then antisymmetric."""
        return (
            list(self.diagonal)
            + [self.symmetric[k] for k in sorted(self.symmetric)]
            + [self.antisymmetric[k] for k in sorted(self.antisymmetric)]
        )


def gell_mann_basis(d, basis=None):
    if d < 2:
        raise BadDimension(f"dimension must be >= 2, got {d}")
    basis = computational_basis(d) if basis is None else basis
    if basis.dim != d:
        raise DimensionMismatch(f"basis dim {basis.dim} vs d={d}")
    v = basis.vectors

    def ket_bra(j, k):
        return np.outer(v[:, j], v[:, k].conj())

    diagonal = []
    for m in range(1, d):
        g = sum(ket_bra(l, l) for l in range(m)) - m * ket_bra(m, m)
        diagonal.append(_frozen(np.sqrt(2.0 / (m * (m + 1))) * g))
    sym, anti = {}, {}
    for j in range(d):
        for k in range(j + 1, d):
            sym[(j, k)] = _frozen(ket_bra(j, k) + ket_bra(k, j))
            anti[(j, k)] = _frozen(-1j * (ket_bra(j, k) - ket_bra(k, j)))
    identity = _frozen(sum(ket_bra(j, j) for j in range(d)))
    return GellMannBasis(d, tuple(diagonal), sym, anti, identity)


@dataclass(frozen=True)
class GellMannCoefficients:
    """Hilbert-Schmidt coefficients ``Tr(Gamma^dagger rho)`` of a state."""

    diagonal: np.ndarray
    symmetric: dict
    antisymmetric: dict

    def bloch_vector(self):
        """Coefficient vector in the order of :meth:`GellMannBasis.generators`."""
        return np.concatenate(
            [
                self.diagonal,
                [self.symmetric[k] for k in sorted(self.symmetric)],
                [self.antisymmetric[k] for k in sorted(self.antisymmetric)],
            ]
        )


def gell_mann_decompose(rho, g):
    rho = as_matrix(rho)
    if rho.shape != (g.dim, g.dim):
        raise DimensionMismatch(f"state shape {rho.shape} vs Gell-Mann dim {g.dim}")

    def coeff(gamma):
        return float(np.real(np.trace(gamma.conj().T @ rho)))

    return GellMannCoefficients(
        np.array([coeff(gm) for gm in g.diagonal]),
        {k: coeff(m) for k, m in g.symmetric.items()},
        {k: coeff(m) for k, m in g.antisymmetric.items()},
    )


def gell_mann_reconstruct(c, g):
    """Inverse of :func:`gell_mann_decompose`: ``I/d + 1/2 sum <Gamma|rho> Gamma``."""
    rho = g.identity / g.dim
    rho = rho + 0.5 * sum(cm * gm for cm, gm in zip(c.diagonal, g.diagonal))
    rho = rho + 0.5 * sum(c.symmetric[k] * g.symmetric[k] for k in g.symmetric)
    rho = rho + 0.5 * sum(c.antisymmetric[k] * g.antisymmetric[k] for k in g.antisymmetric)
    return np.asarray(rho)


def check_state(rho, tol=1e-10):
    """Raise :class:`InvalidState` unless ``rho`` is a density operator."""
    return validate_density(rho, tol)
