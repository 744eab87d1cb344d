"""Independent verification routes for the closed-form optimizers.

Nothing here shares code paths with the constructions under test: the
generalized eigenvalue solve whitens explicitly instead of calling the
generalized LAPACK driver, covariance search samples the feasible set
blindly, and the stationarity check probes the objective with random
feasible perturbations.  Tests compare the production answers against these
slower routes.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError
from .linalg import as_matrix, hermitian_eig, hermitian_part, inv_sqrt_psd
from .metrics import canonical_beam

__all__ = [
    "random_psd_search",
    "generalized_eig_max",
    "P3Problem",
    "grid_kkt_check",
]


def random_psd_search(objective, m, p, rank, trials, seed, batch=16384):
    """Best objective value over random PSD covariances of a given rank.

    Directions are Haar-random `rank`-frames (QR of complex Gaussians) and
    powers are Dirichlet simplex splits scaled to trace exactly P.  The
    `objective` must be vectorized: it receives a stacked (k, m, m) array and
    returns k real values.  Returns (best value, best Q).
    """
    if rank < 1 or rank > m:
        raise InvalidInputError(f"rank must lie in [1, {m}], got {rank}")
    if trials < 1:
        raise InvalidInputError("trials must be >= 1")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    best_val = -np.inf
    best_q = None
    left = int(trials)
    while left > 0:
        k = min(left, batch)
        left -= k
        z = rng.standard_normal((k, m, rank, 2))
        frames, _ = np.linalg.qr(z[..., 0] + 1j * z[..., 1])
        splits = rng.dirichlet(np.ones(rank), size=k) * p
        qs = np.einsum("kmr,kr,knr->kmn", frames, splits, frames.conj())
        vals = np.asarray(objective(qs), dtype=float)
        if vals.shape != (k,):
            raise InvalidInputError(
                f"objective returned shape {vals.shape}, expected ({k},)"
            )
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best_q = hermitian_part(qs[i])
    return best_val, best_q


def generalized_eig_max(a_num, a_den):
    """Top generalized eigenpair of (A_num, A_den) by explicit whitening.

    Whitens with A_den^{-1/2}, takes the ordinary Hermitian eigendecomposition
    and maps the winner back; A_den must be Hermitian PD.  Returns
    (max Rayleigh quotient, unit maximizer with canonical phase).
    """
    a_num = as_matrix(a_num, "a_num")
    w = inv_sqrt_psd(a_den)
    vals, vecs = hermitian_eig(hermitian_part(w @ a_num @ w))
    vec = w @ vecs[:, 0]
    return float(vals[0]), canonical_beam(vec, 1.0).v


@dataclass(frozen=True)
class P3Problem:
    """Rate maximization for the decoding user under an energy floor.

    maximize  log det(I + H22t Q H22t^H)
    s.t.      tr(H12 Q H12^H) >= e_target,  tr(Q) <= p,  Q PSD
    """

    h22_tilde: np.ndarray
    h12: np.ndarray
    e_target: float
    p: float

    def objective(self, qs):
        """Vectorized log-det objective over stacked covariances (nats)."""
        qs = np.asarray(qs)
        h = self.h22_tilde
        s = np.einsum("ij,kjl,ml->kim", h, qs, h.conj())
        eye = np.eye(h.shape[0])
        _, logdet = np.linalg.slogdet(eye[None] + (s + s.conj().transpose(0, 2, 1)) / 2)
        return logdet

    def energy(self, qs):
        """Vectorized delivered energy tr(H12 Q H12^H)."""
        qs = np.asarray(qs)
        g = self.h12.conj().T @ self.h12
        return np.einsum("ij,kji->k", g, qs).real

    def feasible(self, qs, slack=1e-9):
        qs = np.asarray(qs)
        traces = np.einsum("kii->k", qs).real
        ok_tr = traces <= self.p * (1.0 + slack) + 1e-15
        ok_e = self.energy(qs) >= self.e_target - slack * max(1.0, self.e_target)
        return ok_tr & ok_e


def grid_kkt_check(problem, q_candidate, perturbations=64, step=1e-4, seed=0, margin=1e-7):
    """Local-optimality probe for a P3 candidate.

    Draws random Hermitian perturbations of Frobenius size `step`, projects
    each perturbed matrix back to PSD with trace at most p, discards those
    violating the energy floor, and reports False as soon as one feasible
    neighbor improves the objective by more than `margin`.
    """
    if hasattr(q_candidate, "q"):
        q_candidate = q_candidate.q
    q = as_matrix(q_candidate, "q_candidate")
    m = q.shape[0]
    if not bool(problem.feasible(q[None])[0]):
        return False
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    base = float(problem.objective(q[None])[0])
    z = rng.standard_normal((perturbations, m, m, 2))
    deltas = (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)
    deltas = (deltas + deltas.conj().transpose(0, 2, 1)) / 2.0
    norms = np.linalg.norm(deltas, axis=(1, 2), keepdims=True)
    deltas = deltas * (step / np.maximum(norms, 1e-300))
    cands = q[None] + deltas
    # PSD projection by eigenvalue clipping, then scale into the trace ball
    w, v = np.linalg.eigh((cands + cands.conj().transpose(0, 2, 1)) / 2.0)
    w = np.maximum(w, 0.0)
    cands = np.einsum("kmr,kr,knr->kmn", v, w, v.conj())
    traces = np.einsum("kii->k", cands).real
    scale = np.minimum(1.0, problem.p / np.maximum(traces, 1e-300))
    cands = cands * scale[:, None, None]
    keep = problem.feasible(cands)
    if not np.any(keep):
        return True
    vals = problem.objective(cands[keep])
    return bool(np.max(vals) <= base + margin)
