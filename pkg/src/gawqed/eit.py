"""Control-field-free EIT analysis for the double-giant-atom system.

Transparency without an external control field needs a dark mode (decoupled
from the guide), a bright mode (coupled), no cross decay between them, and a
coherent coupling that plays the control-field role.  Two realisations exist
here:

* the collective scheme, where the dark/bright modes are the symmetric and
  antisymmetric combinations (sigma_a -+ sigma_b)/sqrt(2), with the detuning
  mismatch acting as control, and
* the single-atom scheme, where one atom's own interference turns off its
  decay and the photon-mediated exchange g_ab acts as control (possible for
  braided and nested geometries only).

Both reduce exactly to a driven three-level Lambda atom in the single-photon
sector; :func:`lambda_reference` provides that reference system.  The EIT/ATS
distinction follows the denominator-root criterion: transparency counts as
interference-driven (EIT) while the roots stay purely imaginary, i.e. while
4 |control| < bright width.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .core import (
    GawqedError,
    SystemConfig,
    Topology,
    atom_phasor,
    characteristics,
    classify_topology,
    detunings,
)
from .scattering import ScatterPoint, _scatter_point

#: "numerically zero" rate for scheme preconditions, in units of rate_unit
ZERO_RATE_TOL = 1e-9

#: half-width of the Boundary band around 4 |control| = bright width
BOUNDARY_TOL = 1e-9


class EitPreconditionError(GawqedError):
    """A dark/bright-mode precondition does not hold for this configuration."""


class Scheme(Enum):
    COLLECTIVE_SA = "CollectiveSA"
    SINGLE_ATOM = "SingleAtom"
    NONE = "None"


class DarkState(Enum):
    S = "S"
    A = "A"
    EG = "eg"  # atom a excited: atom a is the dark atom
    GE = "ge"  # atom b excited: atom b is the dark atom
    NONE = "none"


class Regime(Enum):
    EIT = "EIT"
    ATS = "ATS"
    BOUNDARY = "Boundary"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class SABasisQuantities:
    """Couplings, decays and drives in the symmetric/antisymmetric basis."""

    g_sa: float
    gamma_s: float
    gamma_a_mode: float
    gamma_sa: float
    delta_s: float
    delta_a_mode: float
    omega_s: complex
    omega_a_mode: complex


@dataclass(frozen=True)
class EitVerdict:
    scheme: Scheme
    dark_state: DarkState
    regime: Regime
    control_strength: float
    bright_width: float
    transparency_delta_a: float | None
    note: str | None = None


def sa_basis(cfg: SystemConfig, delta_a: float) -> SABasisQuantities:
    """Quantities of the master equation rewritten in the S/A collective basis.

    With sigma_S,A = (sigma_a +- sigma_b)/sqrt(2):
    g_SA = -(delta'_a - delta'_b)/2 (primes: Lamb-shifted detunings),
    Gamma_S,A = (Gamma_a + Gamma_b)/2 +- Gamma_ab,
    Gamma_SA = (Gamma_a - Gamma_b)/2,
    Delta_S,A = (delta'_a + delta'_b)/2 -+ g_ab, and
    Omega_S,A = (Omega_a +- Omega_b)/sqrt(2) at unit drive amplitude.
    """
    ch = characteristics(cfg)
    d_a, d_b = detunings(cfg, delta_a)
    eff_a = d_a - ch.lamb_a
    eff_b = d_b - ch.lamb_b
    theta_ref = min(p for atom in (cfg.atom_a, cfg.atom_b) for p in atom.phases)
    omega_a = math.sqrt(2.0) * cmath.exp(-1j * theta_ref) * atom_phasor(cfg.atom_a)
    omega_b = math.sqrt(2.0) * cmath.exp(-1j * theta_ref) * atom_phasor(cfg.atom_b)
    return SABasisQuantities(
        g_sa=-0.5 * (eff_a - eff_b),
        gamma_s=0.5 * (ch.gamma_a + ch.gamma_b) + ch.gamma_ab,
        gamma_a_mode=0.5 * (ch.gamma_a + ch.gamma_b) - ch.gamma_ab,
        gamma_sa=0.5 * (ch.gamma_a - ch.gamma_b),
        delta_s=0.5 * (eff_a + eff_b) - ch.g_ab,
        delta_a_mode=0.5 * (eff_a + eff_b) + ch.g_ab,
        omega_s=(omega_a + omega_b) / math.sqrt(2.0),
        omega_a_mode=(omega_a - omega_b) / math.sqrt(2.0),
    )


def collective_eit_amplitudes(
    q: SABasisQuantities,
    dark: DarkState,
    delta_a: float = math.nan,
    r_phase: complex = 1.0,
    rate_unit: float = 1.0,
) -> ScatterPoint:
    """Two-mode EIT amplitudes with the dark collective mode ``dark``.

    Requires the dark mode's width and the cross decay Gamma_SA to vanish and
    a nonzero control g_SA.  ``r_phase`` multiplies r: the printed two-mode
    form fixes r only up to the configuration's overall reflection phase
    exp(i alpha_a); pass that phasor to reproduce the general amplitudes
    exactly, including phase.
    """
    ztol = ZERO_RATE_TOL * rate_unit
    if dark is DarkState.S:
        g_dark, g_bright = q.gamma_s, q.gamma_a_mode
        d_dark, d_bright = q.delta_s, q.delta_a_mode
    elif dark is DarkState.A:
        g_dark, g_bright = q.gamma_a_mode, q.gamma_s
        d_dark, d_bright = q.delta_a_mode, q.delta_s
    else:
        raise EitPreconditionError(f"dark collective mode must be S or A, got {dark}")
    if abs(g_dark) > ztol:
        raise EitPreconditionError(f"dark mode width {g_dark} is not zero")
    if abs(q.gamma_sa) > ztol:
        raise EitPreconditionError(f"cross decay Gamma_SA = {q.gamma_sa} is not zero")
    if abs(q.g_sa) <= ztol:
        raise EitPreconditionError("control coupling g_SA is zero")
    den = 1j * d_dark * (1j * d_bright - 0.5 * g_bright) + q.g_sa**2
    t = (-d_dark * d_bright + q.g_sa**2) / den
    r = r_phase * (0.5j * g_bright * d_dark) / den
    return _scatter_point(delta_a, t, r)


def single_atom_eit_amplitudes(cfg: SystemConfig, delta_a: float) -> ScatterPoint:
    """EIT amplitudes when one atom is interference-decoupled from the guide.

    Requires one atom's decay and the collective decay to vanish while the
    exchange coupling g_ab stays nonzero; transparency sits at the dark
    atom's Lamb-shifted resonance.  The reflection carries the bright atom's
    phase factor, so the result matches the general amplitudes exactly.
    """
    ch = characteristics(cfg)
    ztol = ZERO_RATE_TOL * cfg.rate_unit
    d_a, d_b = detunings(cfg, delta_a)
    eff_a, eff_b = d_a - ch.lamb_a, d_b - ch.lamb_b
    if ch.gamma_a <= ztol and ch.gamma_b > ztol:
        d_dark, d_bright, g_bright = eff_a, eff_b, ch.gamma_b
        w_bright = atom_phasor(cfg.atom_b)
    elif ch.gamma_b <= ztol and ch.gamma_a > ztol:
        d_dark, d_bright, g_bright = eff_b, eff_a, ch.gamma_a
        w_bright = atom_phasor(cfg.atom_a)
    else:
        raise EitPreconditionError(
            f"need exactly one decoupled atom; Gamma_a={ch.gamma_a}, Gamma_b={ch.gamma_b}"
        )
    if abs(ch.gamma_ab) > ztol:
        raise EitPreconditionError(f"collective decay {ch.gamma_ab} is not zero")
    if abs(ch.g_ab) <= ztol:
        if classify_topology(cfg) is Topology.SEPARATE:
            raise EitPreconditionError(
                "separate topology: decoupling one atom always kills g_ab, "
                "single-atom EIT is impossible"
            )
        raise EitPreconditionError("exchange coupling g_ab is zero")
    den = 1j * d_dark * (1j * d_bright - 0.5 * g_bright) + ch.g_ab**2
    t = (-d_dark * d_bright + ch.g_ab**2) / den
    phase = w_bright**2 / abs(w_bright) ** 2
    r = phase * (0.5j * g_bright * d_dark) / den
    return _scatter_point(delta_a, t, r)


def _root_regime(control: float, bright_width: float, rate_unit: float) -> Regime:
    """EIT/ATS label from the sign of the two-mode denominator-root discriminant.

    The roots are -i Gamma/4 +- sqrt(16 g^2 - Gamma^2)/4: purely imaginary
    (destructive interference, EIT) for 4 |g| < Gamma, split into two dressed
    resonances (ATS) for 4 |g| > Gamma.
    """
    gap = 4.0 * abs(control) - bright_width
    if abs(gap) <= BOUNDARY_TOL * rate_unit:
        return Regime.BOUNDARY
    return Regime.EIT if gap < 0.0 else Regime.ATS


def _maximum_symmetric_geometry(cfg: SystemConfig) -> tuple[Topology, float] | None:
    """(topology, phi) if cfg has equal rates and equal spacing from phase 0."""
    rates = cfg.atom_a.rates + cfg.atom_b.rates
    if max(rates) - min(rates) > 1e-9 * cfg.rate_unit:
        return None
    phases = sorted(p for atom in (cfg.atom_a, cfg.atom_b) for p in atom.phases)
    phi = phases[1] - phases[0]
    tol = 1e-9 * max(1.0, abs(phi))
    if abs(phases[0]) > tol:
        return None
    if any(abs(phases[k] - k * phi) > tol for k in range(4)):
        return None
    try:
        return classify_topology(cfg), phi
    except GawqedError:
        return None


def maximum_symmetric_quantities(
    topology: Topology, phi: float, delta_ab: float, gamma: float = 1.0
) -> SABasisQuantities:
    """Published per-topology closed forms of the S/A quantities.

    Equal bare rates gamma, equal spacing phi, leftmost point at phase 0.
    Detunings and drives are reported at probe detuning delta_a = 0 and unit
    drive amplitude.  Note: for the nested topology the published
    g_SA = delta_ab/2 + gamma (sin phi - sin 3 phi)/2 carries the opposite
    Lamb-shift sign from the general basis change in :func:`sa_basis`; this
    function reproduces the published form.
    """
    c1, c2, c3 = math.cos(phi), math.cos(2 * phi), math.cos(3 * phi)
    gamma_s = gamma * (2 + 3 * c1 + 2 * c2 + c3)
    if topology is Topology.SEPARATE:
        g_sa = 0.5 * delta_ab
        gamma_a_mode = gamma * (2 + c1 - 2 * c2 - c3)
        gamma_sa = 0.0
        lamb_a = lamb_b = gamma * math.sin(phi)
        g_ab = 0.5 * gamma * (math.sin(phi) + 2 * math.sin(2 * phi) + math.sin(3 * phi))
    elif topology is Topology.BRAIDED:
        g_sa = 0.5 * delta_ab
        gamma_a_mode = gamma * (2 - 3 * c1 + 2 * c2 - c3)
        gamma_sa = 0.0
        lamb_a = lamb_b = gamma * math.sin(2 * phi)
        g_ab = 0.5 * gamma * (3 * math.sin(phi) + math.sin(3 * phi))
    elif topology is Topology.NESTED:
        g_sa = 0.5 * delta_ab + 0.5 * gamma * (math.sin(phi) - math.sin(3 * phi))
        gamma_a_mode = gamma * (2 - c1 - 2 * c2 + c3)
        gamma_sa = gamma * (c3 - c1)
        lamb_a, lamb_b = gamma * math.sin(3 * phi), gamma * math.sin(phi)
        g_ab = gamma * (math.sin(phi) + math.sin(2 * phi))
    else:  # pragma: no cover - Enum is closed
        raise GawqedError(f"unknown topology {topology!r}")
    eff_a, eff_b = -lamb_a, (delta_ab - lamb_b)
    mean = 0.5 * (eff_a + eff_b)
    phase_pairs = {
        Topology.SEPARATE: ((0.0, phi), (2 * phi, 3 * phi)),
        Topology.BRAIDED: ((0.0, 2 * phi), (phi, 3 * phi)),
        Topology.NESTED: ((0.0, 3 * phi), (phi, 2 * phi)),
    }[topology]
    w_a, w_b = (
        math.sqrt(gamma) * (cmath.exp(1j * p[0]) + cmath.exp(1j * p[1]))
        for p in phase_pairs
    )
    omega_a, omega_b = math.sqrt(2.0) * w_a, math.sqrt(2.0) * w_b
    return SABasisQuantities(
        g_sa=g_sa,
        gamma_s=gamma_s,
        gamma_a_mode=gamma_a_mode,
        gamma_sa=gamma_sa,
        delta_s=mean - g_ab,
        delta_a_mode=mean + g_ab,
        omega_s=(omega_a + omega_b) / math.sqrt(2.0),
        omega_a_mode=(omega_a - omega_b) / math.sqrt(2.0),
    )


def classify_eit(cfg: SystemConfig) -> EitVerdict:
    """Detect which EIT scheme (if any) the configuration supports.

    Checks the collective-mode preconditions first, then the single-atom
    ones; if both hold simultaneously the collective scheme is reported with
    a note.  For maximum-symmetric geometries the control strength follows
    the published closed forms (see :func:`maximum_symmetric_quantities`).
    The regime label comes from the root criterion; a vanishing control
    coupling (no effective control field) is reported as NotApplicable even
    when the dark/bright structure exists.
    """
    ch = characteristics(cfg)
    ztol = ZERO_RATE_TOL * cfg.rate_unit
    q = sa_basis(cfg, 0.0)
    sym = _maximum_symmetric_geometry(cfg)
    g_sa = q.g_sa
    if sym is not None:
        g_sa = maximum_symmetric_quantities(
            sym[0], sym[1], cfg.delta_ab, cfg.atom_a.points[0].bare_rate
        ).g_sa

    mean_lamb = 0.5 * (ch.lamb_a + ch.lamb_b)

    collective_dark: DarkState | None = None
    if abs(q.gamma_sa) <= ztol:
        if abs(q.gamma_s) <= ztol and q.gamma_a_mode > ztol:
            collective_dark = DarkState.S
        elif abs(q.gamma_a_mode) <= ztol and q.gamma_s > ztol:
            collective_dark = DarkState.A

    single_dark: DarkState | None = None
    if abs(ch.gamma_ab) <= ztol:
        if ch.gamma_a <= ztol and ch.gamma_b > ztol:
            single_dark = DarkState.EG
        elif ch.gamma_b <= ztol and ch.gamma_a > ztol:
            single_dark = DarkState.GE

    if collective_dark is not None:
        note = None
        if single_dark is not None and abs(ch.g_ab) > ztol:
            note = "single-atom scheme preconditions hold simultaneously"
        bright = q.gamma_a_mode if collective_dark is DarkState.S else q.gamma_s
        sign = 1.0 if collective_dark is DarkState.S else -1.0
        transparency = mean_lamb + sign * ch.g_ab - 0.5 * cfg.delta_ab
        if abs(g_sa) <= ztol:
            return EitVerdict(
                Scheme.COLLECTIVE_SA, collective_dark, Regime.NOT_APPLICABLE,
                control_strength=abs(g_sa), bright_width=bright,
                transparency_delta_a=None,
                note=note or "control coupling g_SA vanishes",
            )
        return EitVerdict(
            Scheme.COLLECTIVE_SA, collective_dark,
            _root_regime(g_sa, bright, cfg.rate_unit),
            control_strength=abs(g_sa), bright_width=bright,
            transparency_delta_a=transparency, note=note,
        )

    if single_dark is not None:
        bright = ch.gamma_b if single_dark is DarkState.EG else ch.gamma_a
        transparency = (
            ch.lamb_a if single_dark is DarkState.EG else ch.lamb_b - cfg.delta_ab
        )
        if abs(ch.g_ab) <= ztol:
            return EitVerdict(
                Scheme.SINGLE_ATOM, single_dark, Regime.NOT_APPLICABLE,
                control_strength=abs(ch.g_ab), bright_width=bright,
                transparency_delta_a=None, note="exchange coupling g_ab vanishes",
            )
        return EitVerdict(
            Scheme.SINGLE_ATOM, single_dark,
            _root_regime(ch.g_ab, bright, cfg.rate_unit),
            control_strength=abs(ch.g_ab), bright_width=bright,
            transparency_delta_a=transparency, note=None,
        )

    return EitVerdict(
        Scheme.NONE, DarkState.NONE, Regime.NOT_APPLICABLE,
        control_strength=0.0, bright_width=0.0, transparency_delta_a=None,
    )


def lambda_reference(
    delta_p: float,
    delta_c: float,
    omega_c: float,
    gamma_20: float,
    gamma_21: float = 0.0,
) -> ScatterPoint:
    """Weak-probe amplitudes of a waveguide-driven three-level Lambda atom.

    Probe on |0> <-> |2| (detuning delta_p, decay gamma_20), control on
    |1> <-> |2| (detuning delta_c, Rabi amplitude omega_c); gamma_21 is the
    excited-to-metastable decay.  With gamma_21 = 0 and the identifications
    g_SA <-> omega_c / 2, Delta_S <-> delta_p - delta_c, Delta_A <-> delta_p,
    Gamma_A <-> gamma_20, this reproduces the collective EIT amplitudes.
    """
    if gamma_20 <= 0.0:
        raise EitPreconditionError(f"gamma_20 must be positive, got {gamma_20}")
    two_photon = delta_p - delta_c
    den = 1j * two_photon * (1j * delta_p - 0.5 * (gamma_20 + gamma_21)) + 0.25 * omega_c**2
    t = (1j * two_photon * (1j * delta_p - 0.5 * gamma_21) + 0.25 * omega_c**2) / den
    r = 0.5j * gamma_20 * two_photon / den
    return _scatter_point(delta_p, t, r)
