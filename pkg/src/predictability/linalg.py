"""Dense complex linear algebra, entropies and distances.

Every entropy is in bits. Matrices are plain ``numpy`` arrays; the helpers
here validate shape and Hermiticity where the maths needs it and otherwise
stay out of the way.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadIndex,
    ConvergenceFailure,
    DimensionMismatch,
    InvalidState,
    NonHermitian,
    SupportViolation,
)

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
# eigenvalues this close to 0 or 1 are clipped onto the boundary
CLIP_TOL = 1e-12
# eigenvalues of the second argument of a relative entropy below this count as zero
SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order and matching orthonormal eigenvectors.

    ``eigenvectors[:, k]`` belongs to ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def _square(m):
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def _same_shape(a, b):
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch: {a.shape} vs {b.shape}")


def _fix_phase(v, tol=1e-12):
    # make the first non-negligible entry real and positive
    for k in range(v.shape[0]):
        if abs(v[k]) > tol:
            return v * (abs(v[k]) / v[k])
    return v


def hermitian_eigendecompose(m, tol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix with a deterministic output.

    Eigenvalues come out descending. Each eigenvector is phase-fixed so its
    first nonzero entry is real positive, and eigenvalues equal within
    ``tol`` are ordered by the lexicographic order of their eigenvectors'
    ``(real, imag)`` entries.
    """
    m = _square(m)
    dev = np.linalg.norm(m - m.conj().T)
    if dev > tol:
        raise NonHermitian(f"||m - m^dagger||_F = {dev:.3e} exceeds {tol:.1e}")
    h = 0.5 * (m + m.conj().T)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceFailure(str(exc)) from exc
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    v = np.column_stack([_fix_phase(v[:, k]) for k in range(v.shape[1])])

    def lex_key(k):
        col = v[:, k]
        return tuple(np.column_stack([col.real, col.imag]).ravel())

    final = []
    start = 0
    n = len(w)
    while start < n:
        stop = start + 1
        while stop < n and w[stop - 1] - w[stop] <= tol:
            stop += 1
        final.extend(sorted(range(start, stop), key=lex_key))
        start = stop
    final = np.asarray(final, dtype=int)
    return Spectrum(w[final], v[:, final])


def validate_density(rho, tol=TRACE_TOL):
    """Return ``rho`` as a complex array after checking it is a density operator."""
    rho = _square(rho)
    dev = np.linalg.norm(rho - rho.conj().T)
    if dev > tol:
        raise InvalidState(f"state is not Hermitian (deviation {dev:.3e})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise InvalidState(f"trace {tr!r} differs from 1")
    wmin = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if wmin < -tol:
        raise InvalidState(f"negative eigenvalue {wmin:.3e}")
    return rho


def _clip_probabilities(p):
    p = np.asarray(p, dtype=float)
    if np.any(p < -CLIP_TOL) or np.any(p > 1 + CLIP_TOL):
        raise InvalidState(f"eigenvalues {p} fall outside [0, 1]")
    return np.clip(p, 0.0, 1.0)


def shannon_entropy(p):
    """Shannon entropy ``-sum p log2 p`` with ``0 log 0 = 0``."""
    p = _clip_probabilities(p)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def density_eigenvalues(rho, tol=TRACE_TOL):
    rho = validate_density(rho, tol)
    return _clip_probabilities(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)))


def von_neumann_entropy(rho, tol=TRACE_TOL):
    """Von Neumann entropy in bits."""
    return shannon_entropy(density_eigenvalues(rho, tol))


def relative_entropy(rho, sigma, tol=TRACE_TOL):
    """Quantum relative entropy ``Tr rho (log2 rho - log2 sigma)`` in bits.

    Raises :class:`SupportViolation` when ``rho`` has weight outside the
    support of ``sigma`` (the divergence is infinite).
    """
    rho = validate_density(rho, tol)
    sigma = validate_density(sigma, tol)
    _same_shape(rho, sigma)
    ws, vs = np.linalg.eigh(0.5 * (sigma + sigma.conj().T))
    # weights of rho along sigma's eigenvectors
    weights = np.einsum("ik,ij,jk->k", vs.conj(), rho, vs).real
    null = ws < SUPPORT_TOL
    leak = weights[null].sum() if np.any(null) else 0.0
    if leak > tol:
        raise SupportViolation(f"rho has weight {leak:.3e} outside supp(sigma)")
    cross = float(np.sum(weights[~null] * np.log2(ws[~null])))
    value = -von_neumann_entropy(rho, tol) - cross
    # Klein: the true value is nonnegative; strip float noise below zero
    return max(value, 0.0) if value > -tol else value


def linear_relative_entropy(rho, sigma):
    """Relative linear entropy ``Tr(rho (rho - sigma))``."""
    rho = _square(rho)
    sigma = _square(sigma)
    _same_shape(rho, sigma)
    return float(np.real(np.trace(rho @ (rho - sigma))))


def trace_distance(rho, sigma):
    """Half the trace norm of ``rho - sigma``."""
    rho = _square(rho)
    sigma = _square(sigma)
    _same_shape(rho, sigma)
    diff = rho - sigma
    w = np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))
    return float(0.5 * np.sum(np.abs(w)))


def kron(a, b):
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(rho, dims, keep):
    """Reduce ``rho`` on subsystems ``dims`` to the subsystems in ``keep``.

    Subsystem 0 is the leftmost tensor factor. The kept subsystems stay in
    their original order.
    """
    rho = _square(rho)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != rho.shape[0]:
        raise DimensionMismatch(f"dims {dims} do not factor a {rho.shape[0]}-dim state")
    if isinstance(keep, (int, np.integer)):
        keep = [keep]
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise BadIndex(f"keep indices {keep} out of range for {n} subsystems")
    traced = [k for k in range(n) if k not in keep]
    t = rho.reshape(dims + dims)
    # contract each traced subsystem's row index with its column index
    for offset, k in enumerate(traced):
        axis = k - offset
        t = np.trace(t, axis1=axis, axis2=axis + t.ndim // 2)
    dk = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(dk, dk)
