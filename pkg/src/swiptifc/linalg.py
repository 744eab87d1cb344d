"""Dense complex linear algebra kernels with fixed conventions.

Every factorization used by the library funnels through this module so the
conventions are decided exactly once: spectra come back in descending order,
QR carries a real nonnegative diagonal on R, and Hermitian inputs are
symmetrized before factorization so downstream code never depends on where
rounding noise landed.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError, RankDeficiencyError, SingularMatrixError

__all__ = [
    "Tolerances",
    "TOL",
    "as_matrix",
    "hermitian_part",
    "spectral_norm",
    "svd",
    "hermitian_eig",
    "qrd",
    "inv_sqrt_psd",
    "is_psd",
]


@dataclass(frozen=True)
class Tolerances:
    """Global numeric tolerances; the shared instance is `TOL`."""

    factorization: float = 1e-10  # residual bound on decomposition identities
    invariant: float = 1e-8       # looser bound for derived-property checks
    psd: float = 1e-9             # slack accepted when validating PSD matrices
    rank: float = 1e-12           # relative cutoff declaring numerical rank loss


TOL = Tolerances()


def as_matrix(a, name="matrix"):
    """Validate `a` as a finite 2-D array and return it as complex128."""
    arr = np.asarray(a)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D, got shape {arr.shape}")
    arr = arr.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return arr


def hermitian_part(a):
    """(A + A^H)/2, the projection onto Hermitian matrices."""
    return (a + a.conj().T) / 2.0


def spectral_norm(a):
    """Largest singular value of A."""
    return float(np.linalg.norm(as_matrix(a), 2))


def svd(a):
    """Full SVD A = U diag(s) V^H with s descending.

    Returns (U, s, V).  V holds right singular vectors as columns, so the
    transmit direction aimed at the k-th gain is ``V[:, k]`` and the least
    leaking direction into A is ``V[:, -1]``.
    """
    a = as_matrix(a)
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    return u, s, vh.conj().T


def hermitian_eig(a):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    The input is symmetrized before factorization.  Deviation from Hermitian
    beyond TOL.factorization (relative to ||A||_F, floored at 1) is treated
    as a caller bug rather than silently averaged away.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"hermitian_eig needs a square matrix, got {a.shape}")
    dev = np.linalg.norm(a - a.conj().T)
    if dev > TOL.factorization * max(1.0, np.linalg.norm(a)):
        raise InvalidInputError(f"matrix is not Hermitian (deviation {dev:.3e})")
    w, v = np.linalg.eigh(hermitian_part(a))
    return w[::-1].copy(), v[:, ::-1].copy()


def qrd(a):
    """Thin QR factorization A = Q R with real nonnegative diag(R).

    Requires rows >= cols and full column rank; rank deficiency raises
    RankDeficiencyError carrying the achieved numerical rank.
    """
    a = as_matrix(a)
    m, n = a.shape
    if m < n:
        raise InvalidInputError(f"qrd needs rows >= cols, got {a.shape}")
    q, r = np.linalg.qr(a, mode="reduced")
    d = np.diagonal(r)
    mags = np.abs(d)
    cutoff = TOL.rank * max(float(mags.max(initial=0.0)), 1e-300)
    if n and mags.min() <= cutoff:
        rank = int(np.count_nonzero(mags > cutoff))
        raise RankDeficiencyError(
            f"matrix of shape {a.shape} has numerical rank {rank}", numerical_rank=rank
        )
    phase = d / mags
    q = q * phase[None, :]
    r = r * phase.conj()[:, None]
    # exact real diagonal, killing the rounding residue of the phase rotation
    r[np.arange(n), np.arange(n)] = mags
    return q, r


def inv_sqrt_psd(a, ridge=0.0):
    """Hermitian inverse square root B with B A B = I.

    `ridge` is added to every eigenvalue before inversion; if the smallest
    eigenvalue plus ridge is still below 1e-12 the matrix is declared
    singular.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"inv_sqrt_psd needs a square matrix, got {a.shape}")
    w, v = np.linalg.eigh(hermitian_part(a))
    w = w + ridge
    if w[0] < 1e-12:
        raise SingularMatrixError(
            f"matrix is not positive definite (smallest eigenvalue {w[0]:.3e})"
        )
    b = (v / np.sqrt(w)[None, :]) @ v.conj().T
    return hermitian_part(b)


def is_psd(a, tol=TOL.psd):
    """True iff A is Hermitian within `tol` and has min eigenvalue >= -tol.

    Both checks are relative to max(1, ||A||_F) so power-scaled covariances
    are judged at their own magnitude.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"is_psd needs a square matrix, got {a.shape}")
    scale = max(1.0, float(np.linalg.norm(a)))
    if np.linalg.norm(a - a.conj().T) > tol * scale:
        return False
    w = np.linalg.eigvalsh(hermitian_part(a))
    return bool(w[0] >= -tol * scale)
