"""Rate, harvested-energy and leakage-ratio metrics plus their input types.

Rates are reported in bits (log base 2) throughout.  Harvested energy uses
unit conversion efficiency and ignores the noise contribution, so receiver i
collects sum_j tr(H_ij Q_j H_ij^H).
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError
from .linalg import as_matrix, hermitian_part, inv_sqrt_psd, is_psd, spectral_norm

__all__ = [
    "TxCovariance",
    "Beamformer",
    "canonical_beam",
    "interference_cov",
    "achievable_rate",
    "harvested_energy",
    "sler",
    "slnr",
]

_LN2 = float(np.log(2.0))

# relative slack accepted on the trace budget and on unit norms
_BUDGET_SLACK = 1e-9
_UNIT_SLACK = 1e-10


def _cov_array(q, name="Q"):
    """Accept a TxCovariance or a raw array; return the matrix."""
    if isinstance(q, TxCovariance):
        return q.q
    return as_matrix(q, name)


@dataclass(frozen=True)
class TxCovariance:
    """Transmit covariance with the power budget it was built against.

    Invariants: Q Hermitian PSD within 1e-9 and tr(Q) <= budget*(1+1e-9).
    """

    q: np.ndarray
    budget: float

    def __post_init__(self):
        q = as_matrix(self.q, "Q")
        if q.shape[0] != q.shape[1]:
            raise InvalidInputError(f"Q must be square, got {q.shape}")
        object.__setattr__(self, "q", q)
        budget = float(self.budget)
        if not np.isfinite(budget) or budget < 0:
            raise InvalidInputError(f"budget must be a finite nonnegative real, got {budget!r}")
        object.__setattr__(self, "budget", budget)
        if not is_psd(q):
            raise InvalidInputError("Q is not Hermitian PSD within tolerance")
        tr = float(np.trace(q).real)
        if tr > budget * (1.0 + _BUDGET_SLACK) + 1e-15:
            raise InvalidInputError(f"tr(Q) = {tr!r} exceeds budget {budget!r}")

    @property
    def trace(self):
        return float(np.trace(self.q).real)


@dataclass(frozen=True)
class Beamformer:
    """Unit-norm transmit direction and the power sent along it."""

    v: np.ndarray
    power: float

    def __post_init__(self):
        v = np.asarray(self.v, dtype=np.complex128)
        if v.ndim != 1:
            raise InvalidInputError(f"beamformer must be 1-D, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("beamformer contains non-finite entries")
        nrm = float(np.linalg.norm(v))
        if abs(nrm - 1.0) > _UNIT_SLACK:
            raise InvalidInputError(f"beamformer norm is {nrm!r}, expected 1")
        object.__setattr__(self, "v", v)
        power = float(self.power)
        if not np.isfinite(power) or power < 0:
            raise InvalidInputError(f"power must be a finite nonnegative real, got {power!r}")
        object.__setattr__(self, "power", power)

    def covariance(self):
        """Rank-one covariance power * v v^H."""
        return TxCovariance(self.power * np.outer(self.v, self.v.conj()), self.power)


def canonical_beam(v, power):
    """Normalize a direction and fix its phase so the first entry above
    1e-12 * ||v|| is real positive; returns a Beamformer."""
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    nrm = float(np.linalg.norm(v))
    if nrm <= 0 or not np.isfinite(nrm):
        raise InvalidInputError("cannot normalize a zero or non-finite direction")
    v = v / nrm
    idx = np.flatnonzero(np.abs(v) > 1e-12)
    if idx.size:
        pivot = v[idx[0]]
        v = v * (pivot.conj() / abs(pivot))
        v[idx[0]] = abs(pivot)  # exact, not just up to rounding
    return Beamformer(v, power)


def interference_cov(h_cross, q_other):
    """Interference-plus-noise covariance I + H Q H^H (Hermitian PD)."""
    h = as_matrix(h_cross, "h_cross")
    q = _cov_array(q_other)
    r = np.eye(h.shape[0], dtype=np.complex128) + h @ q @ h.conj().T
    return hermitian_part(r)


def achievable_rate(h_own, r_minus, q):
    """Achievable rate log2 det(I + H^H R^{-1} H Q) in bits.

    Evaluated through the symmetrized form
    log2 det(I + R^{-1/2} H Q H^H R^{-1/2}) so the determinant argument is
    Hermitian PSD.  Raises SingularMatrixError if R is singular.
    """
    h = as_matrix(h_own, "h_own")
    b = inv_sqrt_psd(as_matrix(r_minus, "r_minus")) @ h
    s = b @ _cov_array(q) @ b.conj().T
    sign, logdet = np.linalg.slogdet(
        np.eye(h.shape[0], dtype=np.complex128) + hermitian_part(s)
    )
    if sign.real <= 0:
        raise InvalidInputError("rate determinant is not positive; Q is not PSD")
    return max(float(logdet) / _LN2, 0.0)


def harvested_energy(cs, q1, q2, receiver):
    """Energy collected at `receiver`: sum_j tr(H_rj Q_j H_rj^H)."""
    if receiver not in (1, 2):
        raise InvalidInputError(f"receiver must be 1 or 2, got {receiver!r}")
    h1 = cs.h11 if receiver == 1 else cs.h21
    h2 = cs.h12 if receiver == 1 else cs.h22
    total = 0.0
    for h, q in ((h1, q1), (h2, q2)):
        qm = _cov_array(q)
        total += float(np.einsum("ij,jk,ik->", h, qm, h.conj()).real)
    return max(total, 0.0)


def sler(v, h_own, h_cross, e_bar, with_floor=True):
    """Signal-to-leakage-and-energy ratio of a beamformer.

    ratio = P1 ||H_own v||^2 / (P1 ||H_cross v||^2 + floor), with
    floor = max(e_bar - P1 ||H_own||_2^2, 0) when `with_floor`, else 0.
    A vanishing denominator returns +inf.
    """
    if not isinstance(v, Beamformer):
        raise InvalidInputError("v must be a Beamformer")
    h_own = as_matrix(h_own, "h_own")
    h_cross = as_matrix(h_cross, "h_cross")
    e_bar = float(e_bar)
    if not np.isfinite(e_bar) or e_bar < 0:
        raise InvalidInputError(f"e_bar must be a finite nonnegative real, got {e_bar!r}")
    p1 = v.power
    num = p1 * float(np.linalg.norm(h_own @ v.v) ** 2)
    den = p1 * float(np.linalg.norm(h_cross @ v.v) ** 2)
    if with_floor:
        den += max(e_bar - p1 * spectral_norm(h_own) ** 2, 0.0)
    if den < 1e-15:
        return float("inf")
    return num / den


def slnr(v, h_own, h_cross, noise_floor):
    """Signal-to-leakage-plus-noise ratio ||H_own v||^2 / (||H_cross v||^2 + noise_floor)."""
    if not isinstance(v, Beamformer):
        raise InvalidInputError("v must be a Beamformer")
    noise_floor = float(noise_floor)
    if not np.isfinite(noise_floor) or noise_floor <= 0:
        raise InvalidInputError(f"noise_floor must be positive, got {noise_floor!r}")
    h_own = as_matrix(h_own, "h_own")
    h_cross = as_matrix(h_cross, "h_cross")
    num = float(np.linalg.norm(h_own @ v.v) ** 2)
    den = float(np.linalg.norm(h_cross @ v.v) ** 2) + noise_floor
    return num / den
