"""Transmit covariance constructions: water-filling and rank-one beam families.

Strategy identifiers used across the library:

* ``meb``       maximum-energy beam, top right singular vector of the direct link
* ``mlb``       minimum-leakage beam, least right singular vector of the cross link
* ``sler``      signal-to-leakage-and-energy-ratio beam (QR + SVD construction)
* ``slnr``      signal-to-leakage-plus-noise-ratio beam
* ``meb_rank2`` two-stream energy beam with a fixed power split
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .channel import stacked_channel
from .exceptions import DegenerateChannelError, InvalidInputError, RankDeficiencyError
from .linalg import as_matrix, hermitian_part, inv_sqrt_psd, qrd, spectral_norm, svd
from .metrics import Beamformer, TxCovariance, achievable_rate, canonical_beam, interference_cov

__all__ = [
    "STRATEGIES",
    "check_strategy",
    "waterfill",
    "IwfResult",
    "iterative_waterfilling",
    "eh_eh_optimal",
    "meb",
    "mlb",
    "meb_rank2",
    "sler_beam",
    "slnr_beam",
]

STRATEGIES = ("meb", "mlb", "sler", "slnr", "meb_rank2")

# convergence floor for the water-level bisection, relative to the budget
_WF_TOL = 1e-10


def check_strategy(strategy):
    """Validate a strategy id, returning it unchanged."""
    if strategy not in STRATEGIES:
        raise InvalidInputError(
            f"unknown strategy {strategy!r}; valid ids: {', '.join(STRATEGIES)}"
        )
    return strategy


def waterfill(h, r_noise, p):
    """Water-filling covariance for log det(I + H^H R^{-1} H Q), tr(Q) <= P.

    Eigenmodes come from H^H R^{-1} H = U D U^H; powers are (mu - 1/d_i)^+
    with the water level mu found by bisection until the spent power matches
    P within 1e-10 * P.  The full budget is always spent.
    """
    h = as_matrix(h, "h")
    p = float(p)
    if not np.isfinite(p) or p < 0:
        raise InvalidInputError(f"power budget must be finite nonnegative, got {p!r}")
    m_t = h.shape[1]
    if p == 0.0:
        return TxCovariance(np.zeros((m_t, m_t), dtype=np.complex128), 0.0)
    b = h if r_noise is None else inv_sqrt_psd(as_matrix(r_noise, "r_noise")) @ h
    _, s, v = svd(b)
    d = np.zeros(m_t)
    d[: s.size] = s**2
    if d[0] <= 0.0:
        raise DegenerateChannelError("channel is numerically zero; no mode to fill")
    active = d > d[0] * 1e-15
    inv = 1.0 / d[active]
    lo = float(inv.min())  # water at the best mode's floor: zero power
    hi = lo + p            # enough water to overfill by construction
    spent = 0.0
    for _ in range(200):
        mu = 0.5 * (lo + hi)
        spent = float(np.sum(np.maximum(mu - inv, 0.0)))
        if abs(spent - p) <= _WF_TOL * p:
            break
        if spent > p:
            hi = mu
        else:
            lo = mu
    powers = np.zeros(m_t)
    powers[active] = np.maximum(mu - inv, 0.0)
    q = (v * powers[None, :]) @ v.conj().T
    return TxCovariance(hermitian_part(q), p)


@dataclass
class IwfResult:
    """Outcome of the selfish rate game between the two transmitters."""

    q1: TxCovariance
    q2: TxCovariance
    rates: tuple
    deltas: list
    iterations: int
    converged: bool


def iterative_waterfilling(cs, p, n_max=20, update="simultaneous"):
    """Iterative water-filling for the (decode, decode) operating mode.

    Starting from uniform covariances (P/M_t) I, each transmitter repeatedly
    water-fills against the other's interference.  `update` chooses whether
    both react to the previous round ("simultaneous") or transmitter 2 sees
    transmitter 1's fresh answer ("sequential").  Runs until the covariance
    movement stalls or `n_max` rounds.
    """
    if update not in ("simultaneous", "sequential"):
        raise InvalidInputError(f"update must be simultaneous or sequential, got {update!r}")
    if n_max < 1:
        raise InvalidInputError("n_max must be >= 1")
    p = float(p)
    q1 = q2 = (p / cs.m_t) * np.eye(cs.m_t, dtype=np.complex128)
    deltas = []
    converged = False
    it = 0
    for it in range(1, n_max + 1):
        q1_new = waterfill(cs.h11, interference_cov(cs.h12, q2), p).q
        partner = q1_new if update == "sequential" else q1
        q2_new = waterfill(cs.h22, interference_cov(cs.h21, partner), p).q
        delta = max(
            float(np.linalg.norm(q1_new - q1)), float(np.linalg.norm(q2_new - q2))
        )
        deltas.append(delta)
        q1, q2 = q1_new, q2_new
        if delta < 1e-10 * max(p, 1.0):
            converged = True
            break
    rates = (
        achievable_rate(cs.h11, interference_cov(cs.h12, q2), q1),
        achievable_rate(cs.h22, interference_cov(cs.h21, q1), q2),
    )
    return IwfResult(
        q1=TxCovariance(q1, p),
        q2=TxCovariance(q2, p),
        rates=rates,
        deltas=deltas,
        iterations=it,
        converged=converged,
    )


def eh_eh_optimal(cs, p):
    """Optimal covariances for the (harvest, harvest) mode.

    Each transmitter beams all power along the top right singular vector of
    its stacked two-receiver channel; the summed harvested energy
    P (sigma_1^2 + sigma_2^2) of those stacked gains is the maximum over all
    PSD covariance pairs.  Returns (Q1, Q2, total_energy).
    """
    p = float(p)
    if not np.isfinite(p) or p < 0:
        raise InvalidInputError(f"power budget must be finite nonnegative, got {p!r}")
    covs = []
    total = 0.0
    for tx in (1, 2):
        hbar = stacked_channel(cs, tx)
        _, s, v = svd(hbar)
        covs.append(canonical_beam(v[:, 0], p).covariance())
        total += p * float(s[0] ** 2)
    return covs[0], covs[1], total


def meb(h11, p1):
    """Maximum-energy beam: all of P1 along the top right singular vector."""
    h11 = as_matrix(h11, "h11")
    _, _, v = svd(h11)
    return canonical_beam(v[:, 0], float(p1))


def mlb(h_cross, p1):
    """Minimum-leakage beam: P1 along the least right singular vector of the
    cross link (exactly its null space when one exists)."""
    h_cross = as_matrix(h_cross, "h_cross")
    _, _, v = svd(h_cross)
    return canonical_beam(v[:, -1], float(p1))


def meb_rank2(h11, p1, split=0.5):
    """Two-stream energy covariance P1 (split v1 v1^H + (1-split) v2 v2^H)."""
    h11 = as_matrix(h11, "h11")
    if h11.shape[1] < 2:
        raise InvalidInputError("meb_rank2 needs at least two transmit antennas")
    split = float(split)
    if not 0.0 <= split <= 1.0:
        raise InvalidInputError(f"split must lie in [0, 1], got {split!r}")
    p1 = float(p1)
    if not np.isfinite(p1) or p1 < 0:
        raise InvalidInputError(f"power must be finite nonnegative, got {p1!r}")
    _, _, v = svd(h11)
    v1 = canonical_beam(v[:, 0], 1.0).v
    v2 = canonical_beam(v[:, 1], 1.0).v
    q = p1 * (split * np.outer(v1, v1.conj()) + (1.0 - split) * np.outer(v2, v2.conj()))
    return TxCovariance(hermitian_part(q), p1)


def sler_floor(h11, e_bar, p1):
    """Energy-shortfall floor max(e_bar / P1 - ||H11||_2^2, 0) in the SLER
    denominator (per unit transmit power)."""
    return max(float(e_bar) / float(p1) - spectral_norm(h11) ** 2, 0.0)


def sler_beam(h11, h21, e_bar, p1):
    """Maximum-SLER beamformer via one QR and one small SVD.

    Stack K = [H11; H21; sqrt(floor) I] and factor K = [P_a; P_b] Rbar.  The
    top block of P_a carries the signal part, so the best direction in the
    whitened coordinates is its top right singular vector u, and the beam is
    Rbar^{-1} u renormalized.  When the floor is active, Rbar^{-1} u equals
    P_b u / sqrt(floor), so no triangular solve is needed.
    """
    h11 = as_matrix(h11, "h11")
    h21 = as_matrix(h21, "h21")
    p1 = float(p1)
    if not np.isfinite(p1) or p1 <= 0:
        raise InvalidInputError(f"P1 must be positive, got {p1!r}")
    e_bar = float(e_bar)
    if not np.isfinite(e_bar) or e_bar < 0:
        raise InvalidInputError(f"e_bar must be finite nonnegative, got {e_bar!r}")
    m_r, m_t = h11.shape
    floor = sler_floor(h11, e_bar, p1)
    k = np.vstack((h11, h21, np.sqrt(floor) * np.eye(m_t, dtype=np.complex128)))
    try:
        q, rbar = qrd(k)
    except RankDeficiencyError:
        # floor = 0 with jointly rank-deficient links; a tiny ridge restores
        # an invertible stack
        warnings.warn("sler_beam: links share a null direction, using 1e-12 ridge")
        k = np.vstack((h11, h21, np.sqrt(1e-12) * np.eye(m_t, dtype=np.complex128)))
        q, rbar = qrd(k)
    _, _, v_alpha = svd(q[:m_r])
    u = v_alpha[:, 0]
    if floor > 0.0:
        vbar = q[2 * m_r :] @ u / np.sqrt(floor)
    else:
        vbar = scipy.linalg.solve_triangular(rbar, u)
    return canonical_beam(vbar, p1)


def slnr_beam(h11, h21, p1):
    """Maximum-SLNR beamformer: top generalized eigenvector of
    (H11^H H11, H21^H H21 + (M_r / P1) I)."""
    h11 = as_matrix(h11, "h11")
    h21 = as_matrix(h21, "h21")
    p1 = float(p1)
    if not np.isfinite(p1) or p1 <= 0:
        raise InvalidInputError(f"P1 must be positive, got {p1!r}")
    num = hermitian_part(h11.conj().T @ h11)
    den = hermitian_part(h21.conj().T @ h21) + (h11.shape[0] / p1) * np.eye(
        h11.shape[1], dtype=np.complex128
    )
    _, vecs = scipy.linalg.eigh(num, den)
    return canonical_beam(vecs[:, -1], p1)  # scipy orders ascending
