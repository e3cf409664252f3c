"""Coherent-drive master equation for the two-atom system.

This is the beyond-one-photon verifier: a weak coherent tone replaces the
single photon, the two qubits evolve under a Lindblad generator with
individual and collective decay plus the photon-mediated exchange coupling,
and input-output relations convert steady-state atomic moments into
transmission, reflection, and the inelastically scattered flux.  Photon
number conservation (F / |alpha|^2 = 1 - T - R) and the weak-drive limit
against the one-photon amplitudes are the headline cross-checks.

Basis ordering is fixed as {gg, ge, eg, ee} (first letter = atom a) and the
Liouvillian acts on column-stacked density matrices, so the 16 x 16 generator
is reproducible bit-for-bit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import GawqedError, SystemConfig, characteristics, detunings

#: eigenvalues with modulus below this count as stationary directions
STATIONARY_TOL = 1e-10

BASIS = ("gg", "ge", "eg", "ee")

_SM = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |g><e|
_ID2 = np.eye(2, dtype=complex)
SIGMA_MINUS_A = np.kron(_SM, _ID2)
SIGMA_MINUS_B = np.kron(_ID2, _SM)


class SteadyStateError(GawqedError):
    """The steady state is missing, degenerate, or unphysical."""


class SpectrumSingularError(GawqedError):
    """The correlation resolvent is singular at a requested frequency."""


@dataclass(frozen=True)
class DriveSpec:
    """Coherent drive: photon flux |alpha|^2 (units of the rate unit) and
    its detuning from atom a."""

    amplitude_sq: float
    frequency_detuning: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.amplitude_sq) and self.amplitude_sq >= 0.0):
            raise GawqedError(f"amplitude_sq must be >= 0, got {self.amplitude_sq}")

    @property
    def alpha(self) -> float:
        return math.sqrt(self.amplitude_sq)


@dataclass(frozen=True)
class SteadyState:
    """Steady-state density matrix over {gg, ge, eg, ee}."""

    rho: np.ndarray

    def population(self, state: str) -> float:
        return float(self.rho[BASIS.index(state), BASIS.index(state)].real)


@dataclass(frozen=True)
class LindbladResult:
    steady: SteadyState
    t: complex
    r: complex
    T: float
    R: float
    inelastic_flux: float
    conservation_residual: float


@dataclass(frozen=True)
class SpectrumResult:
    """Per-channel inelastic power spectra on a caller-supplied frequency grid.

    Normalised so that the integral over nu of each channel equals that
    channel's incoherent flux <db' db>.
    """

    nu: np.ndarray
    s_transmit: np.ndarray
    s_reflect: np.ndarray

    @property
    def s_total(self) -> np.ndarray:
        return self.s_transmit + self.s_reflect


def _vec(rho: np.ndarray) -> np.ndarray:
    return rho.reshape(-1, order="F")


def _unvec(x: np.ndarray) -> np.ndarray:
    return x.reshape(4, 4, order="F")


def _left_multiply(op: np.ndarray) -> np.ndarray:
    return np.kron(np.eye(4, dtype=complex), op)


def _right_multiply(op: np.ndarray) -> np.ndarray:
    return np.kron(op.T, np.eye(4, dtype=complex))


def _sandwich(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Superoperator for rho -> left @ rho @ right."""
    return np.kron(right.T, left)


def _rabi_amplitudes(cfg: SystemConfig, alpha: float) -> tuple[complex, complex]:
    """Drive amplitudes Omega_j = sum_n sqrt(2 gamma_jn) alpha e^{i phase from a1}."""
    theta_ref = cfg.atom_a.points[0].phase_coord
    omegas = []
    for atom in (cfg.atom_a, cfg.atom_b):
        om = 0.0 + 0.0j
        for p in atom.points:
            om += math.sqrt(2.0 * p.bare_rate) * alpha * cmath.exp(
                1j * (p.phase_coord - theta_ref)
            )
        omegas.append(om)
    return omegas[0], omegas[1]


def build_liouvillian(cfg: SystemConfig, drive: DriveSpec) -> np.ndarray:
    """Assemble the 16 x 16 Lindblad generator in the drive rotating frame.

    The Hamiltonian carries the Lamb-shifted detunings, the exchange coupling
    g_ab and the position-phased Rabi drives; dissipation consists of the two
    individual decays and the collective cross terms weighted by Gamma_ab.
    """
    ch = characteristics(cfg)
    d_a, d_b = detunings(cfg, drive.frequency_detuning)
    om_a, om_b = _rabi_amplitudes(cfg, drive.alpha)

    n_a = SIGMA_MINUS_A.conj().T @ SIGMA_MINUS_A
    n_b = SIGMA_MINUS_B.conj().T @ SIGMA_MINUS_B
    h = (
        -(d_a - ch.lamb_a) * n_a
        - (d_b - ch.lamb_b) * n_b
        + ch.g_ab
        * (
            SIGMA_MINUS_A.conj().T @ SIGMA_MINUS_B
            + SIGMA_MINUS_B.conj().T @ SIGMA_MINUS_A
        )
    )
    for om, sm in ((om_a, SIGMA_MINUS_A), (om_b, SIGMA_MINUS_B)):
        h += -0.5j * (om * sm.conj().T - np.conj(om) * sm)

    liouv = -1j * (_left_multiply(h) - _right_multiply(h))
    for gamma, sm in ((ch.gamma_a, SIGMA_MINUS_A), (ch.gamma_b, SIGMA_MINUS_B)):
        k = sm.conj().T @ sm
        liouv += gamma * (
            _sandwich(sm, sm.conj().T)
            - 0.5 * (_left_multiply(k) + _right_multiply(k))
        )
    for sj, sk in (
        (SIGMA_MINUS_A, SIGMA_MINUS_B),
        (SIGMA_MINUS_B, SIGMA_MINUS_A),
    ):
        k = sj.conj().T @ sk
        liouv += ch.gamma_ab * (
            _sandwich(sj, sk.conj().T)
            - 0.5 * (_left_multiply(k) + _right_multiply(k))
        )
    return liouv


def steady_state(liouvillian: np.ndarray) -> SteadyState:
    """Unique stationary density matrix of the generator.

    Solves the null-space problem with the trace condition replacing the
    first (redundant) row.  Raises :class:`SteadyStateError` if the zero
    eigenvalue is degenerate (e.g. a decoherence-free configuration whose
    dynamics is purely Hamiltonian) or the solution is unphysical.
    """
    eigvals = np.linalg.eigvals(liouvillian)
    n_zero = int(np.sum(np.abs(eigvals) < STATIONARY_TOL))
    if n_zero != 1:
        raise SteadyStateError(
            f"steady state is not unique: {n_zero} stationary directions "
            "(decoupled or purely Hamiltonian dynamics)"
        )
    mat = liouvillian.copy()
    trace_row = _vec(np.eye(4, dtype=complex)).conj()
    mat[0, :] = trace_row
    rhs = np.zeros(16, dtype=complex)
    rhs[0] = 1.0
    rho = _unvec(np.linalg.solve(mat, rhs))

    residual = np.linalg.norm(liouvillian @ _vec(rho))
    scale = max(1.0, np.linalg.norm(liouvillian))
    if residual > 1e-9 * scale:
        raise SteadyStateError(f"stationarity residual {residual:.2e} too large")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise SteadyStateError("steady state is not Hermitian")
    if abs(np.trace(rho) - 1.0) > 1e-12:
        raise SteadyStateError("steady state trace deviates from 1")
    if np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))) < -1e-10:
        raise SteadyStateError("steady state has a negative eigenvalue")
    return SteadyState(rho=0.5 * (rho + rho.conj().T))


def _output_coefficients(cfg: SystemConfig) -> tuple[np.ndarray, np.ndarray, complex]:
    """Per-atom coefficients of the transmitted/reflected output operators.

    b_t = alpha e^{i (theta_last - theta_first)} + sum_j c_t[j] sigma_j^-,
    b_r = sum_j c_r[j] sigma_j^-, with phases referenced to the leftmost
    point and the transmitted output evaluated at the rightmost one.
    """
    pts = cfg.sorted_points()
    theta_first = pts[0][0]
    theta_last = pts[-1][0]
    c_t = np.zeros(2, dtype=complex)
    c_r = np.zeros(2, dtype=complex)
    for j, atom in enumerate((cfg.atom_a, cfg.atom_b)):
        for p in atom.points:
            amp = math.sqrt(p.bare_rate / 2.0)
            c_t[j] += amp * cmath.exp(1j * (theta_last - p.phase_coord))
            c_r[j] += amp * cmath.exp(1j * (p.phase_coord - theta_first))
    return c_t, c_r, cmath.exp(1j * (theta_last - theta_first))


def _channel_operator(coeffs: np.ndarray) -> np.ndarray:
    return coeffs[0] * SIGMA_MINUS_A + coeffs[1] * SIGMA_MINUS_B


def scattering_from_master(cfg: SystemConfig, drive: DriveSpec) -> LindbladResult:
    """Steady-state transmission, reflection, and inelastic flux.

    t and r come from the coherent part of the output fields; the inelastic
    flux F is the frequency-integrated incoherent output, computed from the
    equal-time second moments (for a stationary process this equals the
    integral of the inelastic power spectrum).  ``conservation_residual`` is
    |F / |alpha|^2 - (1 - T - R)|.
    """
    if drive.amplitude_sq <= 0.0:
        raise GawqedError("scattering_from_master requires a nonzero drive")
    steady = steady_state(build_liouvillian(cfg, drive))
    rho = steady.rho
    alpha = drive.alpha

    c_t, c_r, through_phase = _output_coefficients(cfg)
    flux = 0.0
    amplitudes = []
    for coeffs, offset in ((c_t, through_phase * alpha), (c_r, 0.0)):
        op = _channel_operator(coeffs)
        mean = complex(np.trace(rho @ op))
        second = float(np.real(np.trace(rho @ op.conj().T @ op)))
        flux += second - abs(mean) ** 2
        amplitudes.append((offset + mean) / alpha)
    t, r = amplitudes

    big_t, big_r = abs(t) ** 2, abs(r) ** 2
    residual = abs(flux / drive.amplitude_sq - (1.0 - big_t - big_r))
    return LindbladResult(
        steady=steady,
        t=t,
        r=r,
        T=big_t,
        R=big_r,
        inelastic_flux=flux,
        conservation_residual=residual,
    )


def inelastic_spectrum(
    cfg: SystemConfig, drive: DriveSpec, nu_grid: np.ndarray
) -> SpectrumResult:
    """Inelastic power spectrum of each output channel on ``nu_grid``.

    Computes S(nu) = (1/pi) Re tr[dB' (i nu - L)^{-1} (dB rho_ss)] per channel
    via the quantum regression theorem, with dB the incoherent part of the
    output operator; the resolvent is evaluated through one eigendecomposition
    of the Liouvillian.  Raises :class:`SpectrumSingularError` if nu hits an
    undamped Liouvillian eigenfrequency that actually contributes.
    """
    nu = np.asarray(nu_grid, dtype=float)
    liouv = build_liouvillian(cfg, drive)
    steady = steady_state(liouv)
    rho = steady.rho

    eigvals, eigvecs = np.linalg.eig(liouv)
    c_t, c_r, _ = _output_coefficients(cfg)

    channels = []
    scale = max(1.0, float(np.linalg.norm(liouv)))
    for coeffs in (c_t, c_r):
        op = _channel_operator(coeffs)
        mean = complex(np.trace(rho @ op))
        fluct = op - mean * np.eye(4, dtype=complex)
        x0 = _vec(fluct @ rho)
        mode_amp = np.linalg.solve(eigvecs, x0)
        observer = np.array(
            [complex(np.trace(fluct.conj().T @ _unvec(eigvecs[:, k]))) for k in range(16)]
        )
        weights = observer * mode_amp  # C(t) = sum_k weights_k e^{lambda_k t}

        denom = 1j * nu[:, None] - eigvals[None, :]
        close = np.abs(denom) < 1e-12 * scale
        if np.any(close & (np.abs(weights)[None, :] > 1e-12 * scale)):
            bad_nu = nu[np.any(close & (np.abs(weights)[None, :] > 1e-12 * scale), axis=1)]
            raise SpectrumSingularError(
                f"resolvent singular at nu={bad_nu[:3]} (undamped eigenfrequency)"
            )
        terms = np.where(close, 0.0, weights[None, :] / np.where(close, 1.0, denom))
        channels.append(np.real(terms.sum(axis=1)) / math.pi)

    return SpectrumResult(nu=nu, s_transmit=channels[0], s_reflect=channels[1])


def incoherent_channel_flux(cfg: SystemConfig, drive: DriveSpec) -> tuple[float, float]:
    """Equal-time incoherent flux of each channel (the spectrum's integral)."""
    steady = steady_state(build_liouvillian(cfg, drive))
    rho = steady.rho
    c_t, c_r, _ = _output_coefficients(cfg)
    out = []
    for coeffs in (c_t, c_r):
        op = _channel_operator(coeffs)
        mean = complex(np.trace(rho @ op))
        second = float(np.real(np.trace(rho @ op.conj().T @ op)))
        out.append(second - abs(mean) ** 2)
    return out[0], out[1]
