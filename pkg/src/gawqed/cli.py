"""Command-line interface: config ingestion, sweep orchestration, output.

Configurations are JSON documents holding either two explicit atoms (two
coupling points each, as ``{"phase": ..., "rate": ...}``) or a ``symmetric``
shortcut (topology, phi, gamma) that expands to the canonical four-point
geometry.  Sweeps are dispatched over an optional worker pool and rows are
always written in grid order, so output files are deterministic.

Exit codes: 0 success, 2 config/usage violation, 3 numerical failure from a
module (error forwarded verbatim), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import jsonschema
import numpy as np

from . import eit, fano, lindblad
from .core import (
    ConfigError,
    CouplingPoint,
    GawqedError,
    GiantAtom,
    SystemConfig,
    Topology,
    characteristics,
    classify_topology,
    symmetric_config,
)
from .scattering import amplitudes_general, peak_minimum_loci, solve_real_space

DEFAULT_ORACLE_TOL = 1e-10

COMMANDS = (
    "characteristics",
    "spectrum",
    "loci",
    "fano",
    "eit-classify",
    "eit-spectrum",
    "master-sweep",
    "inelastic-spectrum",
    "oracle-check",
)

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "atoms": {
            "type": "array",
            "minItems": 2,
            "maxItems": 2,
            "items": {
                "type": "object",
                "properties": {
                    "points": {
                        "type": "array",
                        "minItems": 2,
                        "maxItems": 2,
                        "items": {
                            "type": "object",
                            "properties": {
                                "phase": {"type": "number"},
                                "rate": {"type": "number", "minimum": 0},
                            },
                            "required": ["phase", "rate"],
                            "additionalProperties": False,
                        },
                    }
                },
                "required": ["points"],
                "additionalProperties": False,
            },
        },
        "delta_ab": {"type": "number"},
        "drive": {
            "type": "object",
            "properties": {
                "alpha_sq": {"type": "number", "minimum": 0},
                "detuning": {"type": "number"},
            },
            "required": ["alpha_sq"],
            "additionalProperties": False,
        },
        "symmetric": {
            "type": "object",
            "properties": {
                "topology": {"enum": ["separate", "braided", "nested"]},
                "phi": {"type": "number"},
                "gamma": {"type": "number", "exclusiveMinimum": 0},
            },
            "required": ["topology", "phi"],
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
    "oneOf": [{"required": ["atoms"]}, {"required": ["symmetric"]}],
}

#: sweep variables each command accepts (None = runs without a sweep)
SWEEP_VARIABLES = {
    "characteristics": {None, "phi"},
    "spectrum": {None, "delta_a", "phi"},
    "loci": {"phi"},
    "fano": {"phi"},
    "eit-classify": {None},
    "eit-spectrum": {None, "delta_a"},
    "master-sweep": {None, "delta_a"},
    "inelastic-spectrum": {"nu"},
    "oracle-check": {None, "delta_a"},
}


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    points: int

    def __post_init__(self) -> None:
        if self.points < 2:
            raise ConfigError("sweep needs at least 2 points")
        if not self.start < self.stop:
            raise ConfigError("sweep start must be below stop")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class RunSpec:
    config_path: str | None
    command: str
    sweep: SweepSpec | None
    out_path: str | None
    fmt: str
    jobs: int


def oracle_tolerance() -> float:
    raw = os.environ.get("GAWQED_TOL")
    if raw is None:
        return DEFAULT_ORACLE_TOL
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"GAWQED_TOL is not a number: {raw!r}") from exc


def expand_symmetric(shortcut: dict) -> dict:
    """Expand the symmetric shortcut into an explicit two-atom geometry.

    Points sit at phases (0, phi, 2 phi, 3 phi), all with rate gamma,
    assigned to the atoms per topology with the leftmost point on atom a.
    """
    topology = Topology(shortcut["topology"])
    cfg = symmetric_config(topology, float(shortcut["phi"]), float(shortcut.get("gamma", 1.0)))
    return {
        "atoms": [
            {"points": [{"phase": p.phase_coord, "rate": p.bare_rate} for p in atom.points]}
            for atom in (cfg.atom_a, cfg.atom_b)
        ]
    }


def validate_config(raw: dict) -> None:
    try:
        jsonschema.validate(raw, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config schema violation: {exc.message}") from exc


def build_system(raw: dict, phi_override: float | None = None) -> SystemConfig:
    """SystemConfig from a validated raw config document.

    ``phi_override`` re-expands the symmetric shortcut at a different spacing
    (used by phi sweeps); it is rejected for explicit-geometry configs.
    """
    delta_ab = float(raw.get("delta_ab", 0.0))
    if "symmetric" in raw:
        shortcut = dict(raw["symmetric"])
        if phi_override is not None:
            shortcut["phi"] = phi_override
        atoms = expand_symmetric(shortcut)["atoms"]
    else:
        if phi_override is not None:
            raise ConfigError("phi sweeps need the symmetric shortcut in the config")
        atoms = raw["atoms"]
    built = []
    for label, spec in zip("ab", atoms):
        pts = sorted(spec["points"], key=lambda p: p["phase"])
        built.append(
            GiantAtom(
                label,
                (
                    CouplingPoint(float(pts[0]["phase"]), float(pts[0]["rate"])),
                    CouplingPoint(float(pts[1]["phase"]), float(pts[1]["rate"])),
                ),
            )
        )
    return SystemConfig(atom_a=built[0], atom_b=built[1], delta_ab=delta_ab)


def _drive_from(raw: dict, detuning: float | None = None) -> lindblad.DriveSpec:
    drive = raw.get("drive")
    if drive is None:
        raise ConfigError("this command needs a 'drive' entry in the config")
    det = detuning if detuning is not None else float(drive.get("detuning", 0.0))
    return lindblad.DriveSpec(amplitude_sq=float(drive["alpha_sq"]), frequency_detuning=det)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


# ---------------------------------------------------------------------------
# Per-row workers (module level so they pickle for the process pool)
# ---------------------------------------------------------------------------


def _spectrum_row(args: tuple[dict, float]) -> list:
    raw, delta = args
    pt = amplitudes_general(build_system(raw), delta)
    return [delta, pt.t.real, pt.t.imag, pt.r.real, pt.r.imag, pt.T, pt.R]


def _spectrum_phi_row(args: tuple[dict, float, float]) -> list:
    raw, phi, delta = args
    pt = amplitudes_general(build_system(raw, phi_override=phi), delta)
    return [phi, pt.t.real, pt.t.imag, pt.r.real, pt.r.imag, pt.T, pt.R]


def _characteristics_row(args: tuple[dict, float | None]) -> list:
    raw, phi = args
    ch = characteristics(build_system(raw, phi_override=phi))
    head = [] if phi is None else [phi]
    return head + [
        ch.lamb_a, ch.lamb_b, ch.gamma_a, ch.gamma_b,
        ch.g_ab, ch.gamma_ab, ch.alpha_a, ch.alpha_b,
    ]


def _loci_row(args: tuple[dict, float]) -> list:
    raw, phi = args
    cfg = build_system(raw, phi_override=phi)
    loci = peak_minimum_loci(
        classify_topology(cfg), phi, cfg.atom_a.points[0].bare_rate
    )
    peaks = list(loci.peaks) + [math.nan] * (2 - len(loci.peaks))
    return [phi, peaks[0], peaks[1], math.nan if loci.minimum is None else loci.minimum]


def _fano_row(args: tuple[dict, float]) -> list:
    raw, phi = args
    cfg = build_system(raw, phi_override=phi)
    topology = classify_topology(cfg)
    gamma = cfg.atom_a.points[0].bare_rate
    pair = fano.lorentz_decompose(topology, phi, gamma)
    regime = fano.fano_regime(topology, phi, gamma)
    q = f_scale = center = width = math.nan
    if regime != "none":
        fit = fano.fano_fit(pair)
        q, f_scale, center, width = fit.q, fit.f_scale, fit.center, fit.width
    return [
        phi, pair.delta_plus, pair.delta_minus, pair.gamma_plus, pair.gamma_minus,
        pair.chi_plus.real, pair.chi_plus.imag, pair.chi_minus.real, pair.chi_minus.imag,
        regime, q, f_scale, center, width,
    ]


def _eit_spectrum_row(args: tuple[dict, float]) -> list:
    raw, delta = args
    cfg = build_system(raw)
    verdict = eit.classify_eit(cfg)
    if verdict.scheme is eit.Scheme.SINGLE_ATOM:
        pt = eit.single_atom_eit_amplitudes(cfg, delta)
    elif verdict.scheme is eit.Scheme.COLLECTIVE_SA:
        ch = characteristics(cfg)
        pt = eit.collective_eit_amplitudes(
            eit.sa_basis(cfg, delta),
            verdict.dark_state,
            delta_a=delta,
            r_phase=cmath.exp(1j * ch.alpha_a),
            rate_unit=cfg.rate_unit,
        )
    else:
        raise eit.EitPreconditionError(
            "configuration supports no EIT scheme; use 'spectrum' instead"
        )
    return [delta, pt.t.real, pt.t.imag, pt.r.real, pt.r.imag, pt.T, pt.R]


def _master_row(args: tuple[dict, float]) -> list:
    raw, delta = args
    cfg = build_system(raw)
    res = lindblad.scattering_from_master(cfg, _drive_from(raw, detuning=delta))
    return [delta, res.T, res.R, res.inelastic_flux, res.conservation_residual]


def _random_system(rng: np.random.Generator) -> SystemConfig:
    kind = (Topology.SEPARATE, Topology.BRAIDED, Topology.NESTED)[int(rng.integers(3))]
    th = np.sort(rng.uniform(0.0, 4.0 * math.pi, 4))
    rates = rng.uniform(0.05, 3.0, 4)
    if kind is Topology.SEPARATE:
        pa, pb = (th[0], th[1]), (th[2], th[3])
    elif kind is Topology.BRAIDED:
        pa, pb = (th[0], th[2]), (th[1], th[3])
    else:
        pa, pb = (th[0], th[3]), (th[1], th[2])
    atom_a = GiantAtom("a", (CouplingPoint(pa[0], rates[0]), CouplingPoint(pa[1], rates[1])))
    atom_b = GiantAtom("b", (CouplingPoint(pb[0], rates[2]), CouplingPoint(pb[1], rates[3])))
    return SystemConfig(atom_a, atom_b, delta_ab=float(rng.uniform(-4.0, 4.0)))


# ---------------------------------------------------------------------------
# Command execution
# ---------------------------------------------------------------------------


def _map_rows(worker, payloads, jobs: int) -> list[list]:
    if jobs <= 1:
        return [worker(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk = max(1, len(payloads) // (4 * jobs))
        return list(pool.map(worker, payloads, chunksize=chunk))


def run(spec: RunSpec) -> int:
    """Execute a command; returns the process exit status."""
    if spec.command not in COMMANDS:
        raise ConfigError(f"unknown command {spec.command!r}; choose from {COMMANDS}")
    variable = spec.sweep.variable if spec.sweep else None
    if variable not in SWEEP_VARIABLES[spec.command]:
        allowed = sorted(str(v) for v in SWEEP_VARIABLES[spec.command])
        raise ConfigError(
            f"command {spec.command!r} accepts sweep variables {allowed}, got {variable!r}"
        )

    raw = None
    if spec.command != "oracle-check":
        if spec.config_path is None:
            raise ConfigError(f"command {spec.command!r} needs --config")
        raw = _read_config(spec.config_path)

    if spec.command == "oracle-check":
        return _run_oracle_check(spec)
    if spec.command == "eit-classify":
        verdict = eit.classify_eit(build_system(raw))
        payload = {
            "scheme": verdict.scheme.value,
            "dark_state": verdict.dark_state.value,
            "regime": verdict.regime.value,
            "control_strength": verdict.control_strength,
            "bright_width": verdict.bright_width,
            "transparency_delta_a": verdict.transparency_delta_a,
            "note": verdict.note,
        }
        _write_json(spec.out_path, payload)
        return 0

    default_grid = np.linspace(-6.0, 6.0, 2001)
    if spec.command == "spectrum":
        if variable == "phi":
            delta = float(raw.get("drive", {}).get("detuning", 0.0))
            payloads = [(raw, float(p), delta) for p in spec.sweep.grid()]
            header = ["phi", "re_t", "im_t", "re_r", "im_r", "T", "R"]
            rows = _map_rows(_spectrum_phi_row, payloads, spec.jobs)
        else:
            grid = spec.sweep.grid() if spec.sweep else default_grid
            payloads = [(raw, float(d)) for d in grid]
            header = ["delta_a", "re_t", "im_t", "re_r", "im_r", "T", "R"]
            rows = _map_rows(_spectrum_row, payloads, spec.jobs)
    elif spec.command == "characteristics":
        names = ["lamb_a", "lamb_b", "gamma_a", "gamma_b", "g_ab", "gamma_ab", "alpha_a", "alpha_b"]
        if variable == "phi":
            payloads = [(raw, float(p)) for p in spec.sweep.grid()]
            header = ["phi"] + names
        else:
            payloads = [(raw, None)]
            header = names
        rows = _map_rows(_characteristics_row, payloads, spec.jobs)
    elif spec.command == "loci":
        payloads = [(raw, float(p)) for p in spec.sweep.grid()]
        header = ["phi", "peak_1", "peak_2", "minimum"]
        rows = _map_rows(_loci_row, payloads, spec.jobs)
    elif spec.command == "fano":
        payloads = [(raw, float(p)) for p in spec.sweep.grid()]
        header = [
            "phi", "delta_plus", "delta_minus", "gamma_plus", "gamma_minus",
            "re_chi_plus", "im_chi_plus", "re_chi_minus", "im_chi_minus",
            "regime", "q", "f_scale", "center", "width",
        ]
        rows = _map_rows(_fano_row, payloads, spec.jobs)
    elif spec.command == "eit-spectrum":
        grid = spec.sweep.grid() if spec.sweep else default_grid
        payloads = [(raw, float(d)) for d in grid]
        header = ["delta_a", "re_t", "im_t", "re_r", "im_r", "T", "R"]
        rows = _map_rows(_eit_spectrum_row, payloads, spec.jobs)
    elif spec.command == "master-sweep":
        grid = spec.sweep.grid() if spec.sweep else default_grid
        payloads = [(raw, float(d)) for d in grid]
        header = ["delta_a", "T", "R", "F", "residual"]
        rows = _map_rows(_master_row, payloads, spec.jobs)
    elif spec.command == "inelastic-spectrum":
        cfg = build_system(raw)
        result = lindblad.inelastic_spectrum(cfg, _drive_from(raw), spec.sweep.grid())
        header = ["nu", "s_transmit", "s_reflect", "s_total"]
        rows = [
            [float(n), float(st), float(sr), float(st + sr)]
            for n, st, sr in zip(result.nu, result.s_transmit, result.s_reflect)
        ]
    else:  # pragma: no cover - command list is closed
        raise ConfigError(f"unhandled command {spec.command!r}")

    _write_rows(spec.out_path, spec.fmt, header, rows)
    return 0


def _run_oracle_check(spec: RunSpec) -> int:
    count = spec.sweep.points if spec.sweep else 100
    tol = oracle_tolerance()
    rng = np.random.default_rng(0)
    rows = []
    worst = 0.0
    for index in range(count):
        cfg = _random_system(rng)
        delta = float(rng.uniform(-6.0, 6.0))
        gen = amplitudes_general(cfg, delta)
        orc = solve_real_space(cfg, delta)
        dev_t, dev_r = abs(gen.t - orc.t), abs(gen.r - orc.r)
        worst = max(worst, dev_t, dev_r)
        rows.append([index, classify_topology(cfg).value, delta, dev_t, dev_r])
    header = ["index", "topology", "delta_a", "dev_t", "dev_r"]
    if spec.fmt == "json":
        _write_json(
            spec.out_path,
            {
                "tolerance": tol,
                "max_deviation": worst,
                "rows": [dict(zip(header, row)) for row in rows],
            },
        )
    else:
        _write_rows(spec.out_path, "csv", header, rows)
    if worst >= tol:
        raise GawqedError(
            f"oracle deviation {worst:.3e} exceeds tolerance {tol:.3e}"
        )
    return 0


# ---------------------------------------------------------------------------
# I/O
# ---------------------------------------------------------------------------


def _read_config(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    validate_config(raw)
    return raw


def _open_out(path: str | None):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _write_rows(path: str | None, fmt: str, header: list[str], rows: list[list]) -> None:
    out, owned = _open_out(path)
    try:
        if fmt == "json":
            def clean(value):
                if isinstance(value, float) and not math.isfinite(value):
                    return None
                return value

            json.dump(
                [{k: clean(v) for k, v in zip(header, row)} for row in rows],
                out,
                indent=2,
            )
            out.write("\n")
        else:
            out.write(",".join(header) + "\n")
            for row in rows:
                out.write(",".join(_fmt(v) for v in row) + "\n")
    finally:
        if owned:
            out.close()


def _write_json(path: str | None, payload) -> None:
    out, owned = _open_out(path)
    try:
        json.dump(payload, out, indent=2)
        out.write("\n")
    finally:
        if owned:
            out.close()


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _parse_sweep(text: str) -> SweepSpec:
    parts = text.split(":")
    if len(parts) != 4:
        raise ConfigError("--sweep must look like VAR:START:STOP:POINTS")
    var, start, stop, points = parts
    try:
        return SweepSpec(var, float(start), float(stop), int(points))
    except ValueError as exc:
        raise ConfigError(f"bad sweep specification {text!r}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gawqed",
        description="Single-photon scattering and EIT analysis for two giant atoms "
        "coupled to a 1D waveguide.",
    )
    parser.add_argument("--config", help="path to the JSON system configuration")
    parser.add_argument("--command", required=True, choices=COMMANDS)
    parser.add_argument("--sweep", help="sweep grid VAR:START:STOP:POINTS")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default=None)
    parser.add_argument("--jobs", type=int, default=1, help="worker pool size")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format
    if fmt is None:
        fmt = "json" if args.command == "eit-classify" else "csv"
    try:
        sweep = _parse_sweep(args.sweep) if args.sweep else None
        spec = RunSpec(
            config_path=args.config,
            command=args.command,
            sweep=sweep,
            out_path=args.out,
            fmt=fmt,
            jobs=max(1, args.jobs),
        )
        return run(spec)
    except ConfigError as exc:
        _emit_error("config", exc)
        return 2
    except GawqedError as exc:
        _emit_error(type(exc).__name__, exc)
        return 3
    except OSError as exc:
        _emit_error("io", exc)
        return 4


def _emit_error(kind: str, exc: Exception) -> None:
    json.dump({"error": kind, "message": str(exc)}, sys.stderr)
    sys.stderr.write("\n")


if __name__ == "__main__":
    sys.exit(main())
