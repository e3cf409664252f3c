import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gawqed import (
    CouplingPoint,
    GiantAtom,
    SystemConfig,
    Topology,
    amplitudes_general,
    amplitudes_topology,
    characteristics,
    peak_minimum_loci,
    solve_real_space,
    symmetric_config,
)
from gawqed.scattering import SymmetryError, _topology_amplitude_arrays

from conftest import random_system


class TestGeneralAmplitudes:
    def test_separate_phi0_full_reflection(self):
        pt = amplitudes_general(symmetric_config(Topology.SEPARATE, 0.0), 0.0)
        assert abs(pt.t) == pytest.approx(0.0, abs=1e-14)
        assert pt.R == pytest.approx(1.0, abs=1e-12)

    def test_braided_decoupling_point(self):
        cfg = symmetric_config(Topology.BRAIDED, np.pi / 2)
        for delta in (-3.0, 0.0, 0.77):
            pt = amplitudes_general(cfg, delta)
            assert pt.t == 1.0 + 0.0j
            assert pt.r == 0.0j

    def test_single_invisible_atom_reduces(self):
        # atom a interference-decoupled and uncoupled: spectrum is atom b's
        atom_a = GiantAtom("a", (CouplingPoint(0.0, 1.0), CouplingPoint(np.pi, 1.0)))
        atom_b = GiantAtom("b", (CouplingPoint(np.pi, 1.0), CouplingPoint(3 * np.pi, 1.0)))
        cfg = SystemConfig(atom_a, atom_b)  # g_ab = 0 by the (2n+1)pi spacing
        ch = characteristics(cfg)
        assert ch.gamma_a == pytest.approx(0.0, abs=1e-12)
        assert ch.g_ab == pytest.approx(0.0, abs=1e-12)
        pt = amplitudes_general(cfg, ch.lamb_b)  # dark atom's 0/0 point is removable
        assert pt.R == pytest.approx(1.0, abs=1e-10)
        assert pt.T + pt.R == pytest.approx(1.0, abs=1e-10)

    @settings(max_examples=300, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(-6.0, 6.0))
    def test_unitarity(self, seed, delta):
        cfg = random_system(np.random.default_rng(seed))
        pt = amplitudes_general(cfg, delta)
        assert pt.T + pt.R == pytest.approx(1.0, abs=1e-10)


class TestOracle:
    def test_example_nested_unequal_rates(self):
        atom_a = GiantAtom("a", (CouplingPoint(0.0, 1.0), CouplingPoint(np.pi, 1.0)))
        atom_b = GiantAtom("b", (CouplingPoint(0.25 * np.pi, 10.0), CouplingPoint(0.75 * np.pi, 10.0)))
        cfg = SystemConfig(atom_a, atom_b)
        gen = amplitudes_general(cfg, 0.3)
        orc = solve_real_space(cfg, 0.3)
        assert abs(gen.t - orc.t) < 1e-10
        assert abs(gen.r - orc.r) < 1e-10

    def test_full_reflection_point(self):
        sol = solve_real_space(symmetric_config(Topology.SEPARATE, 0.0), 0.0)
        assert abs(sol.t) == pytest.approx(0.0, abs=1e-12)
        assert abs(sol.r) == pytest.approx(1.0, abs=1e-12)

    def test_braided_random_detunings(self):
        rng = np.random.default_rng(7)
        cfg = symmetric_config(Topology.BRAIDED, np.pi / 10)
        for delta in rng.uniform(-6, 6, 50):
            gen = amplitudes_general(cfg, float(delta))
            orc = solve_real_space(cfg, float(delta))
            assert abs(gen.t - orc.t) < 1e-10

    def test_degenerate_inner_atom(self):
        # nested configuration collapsed to a point-like atom inside a giant one
        atom_a = GiantAtom("a", (CouplingPoint(0.0, 1.0), CouplingPoint(2.4, 1.0)))
        atom_b = GiantAtom("b", (CouplingPoint(1.1, 0.7), CouplingPoint(1.1, 1.3)))
        cfg = SystemConfig(atom_a, atom_b, delta_ab=0.8)
        for delta in (-2.0, 0.3, 1.7):
            gen = amplitudes_general(cfg, delta)
            orc = solve_real_space(cfg, delta)
            assert abs(gen.t - orc.t) < 1e-10
            assert abs(gen.r - orc.r) < 1e-10

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(-6.0, 6.0))
    def test_oracle_equivalence_randomized(self, seed, delta):
        cfg = random_system(np.random.default_rng(seed))
        gen = amplitudes_general(cfg, delta)
        orc = solve_real_space(cfg, delta)
        assert abs(gen.t - orc.t) < 1e-10
        assert abs(gen.r - orc.r) < 1e-10

    def test_segments_returned(self):
        sol = solve_real_space(symmetric_config(Topology.NESTED, 0.9), 0.4)
        assert len(sol.segment_t) == 3
        assert len(sol.segment_r) == 3
        assert np.isfinite([abs(sol.f_a), abs(sol.f_b)]).all()


class TestTopologyForms:
    @pytest.mark.parametrize("kind", list(Topology))
    def test_matches_general(self, kind):
        for phi in np.linspace(0.02, 2 * np.pi - 0.02, 41):
            cfg = symmetric_config(kind, phi)
            for delta in (-4.2, -0.7, 0.0, 1.3, 5.1):
                spec = amplitudes_topology(cfg, delta, phi)
                gen = amplitudes_general(cfg, delta)
                assert abs(spec.t - gen.t) <= 1e-12 * max(1.0, abs(gen.t))
                assert abs(spec.r - gen.r) <= 1e-12 * max(1.0, abs(gen.r))

    def test_rejects_detuned_atoms(self):
        cfg = symmetric_config(Topology.SEPARATE, 0.4, delta_ab=0.5)
        with pytest.raises(SymmetryError):
            amplitudes_topology(cfg, 0.0, 0.4)

    def test_rejects_unequal_rates(self):
        atom_a = GiantAtom("a", (CouplingPoint(0.0, 1.0), CouplingPoint(0.4, 2.0)))
        atom_b = GiantAtom("b", (CouplingPoint(0.8, 1.0), CouplingPoint(1.2, 1.0)))
        with pytest.raises(SymmetryError):
            amplitudes_topology(SystemConfig(atom_a, atom_b), 0.0, 0.4)

    def test_reflection_zeros(self):
        # separate: R = 0 at delta = -gamma (sin phi + sin 2 phi) / cos 2 phi
        phi = 0.05 * np.pi
        delta = -(np.sin(phi) + np.sin(2 * phi)) / np.cos(2 * phi)
        cfg = symmetric_config(Topology.SEPARATE, phi)
        assert amplitudes_topology(cfg, delta, phi).R == pytest.approx(0.0, abs=1e-12)
        # braided: R = 0 at delta = -gamma tan phi
        phi = np.pi / 10
        cfg = symmetric_config(Topology.BRAIDED, phi)
        assert amplitudes_topology(cfg, -np.tan(phi), phi).R == pytest.approx(0.0, abs=1e-12)
        # nested: R = 0 at delta = 0 for phi = pi/3
        phi = np.pi / 3
        cfg = symmetric_config(Topology.NESTED, phi)
        assert amplitudes_topology(cfg, 0.0, phi).R == pytest.approx(0.0, abs=1e-24)

    def test_mirror_symmetry(self):
        for kind, mirror in (
            (Topology.SEPARATE, lambda p: 2 * np.pi - p),
            (Topology.NESTED, lambda p: 2 * np.pi - p),
            (Topology.BRAIDED, lambda p: np.pi - p),
        ):
            for phi in (0.23, 0.9, 1.4):
                for delta in (-2.1, 0.6, 3.3):
                    r1 = amplitudes_general(symmetric_config(kind, phi), delta).R
                    r2 = amplitudes_general(symmetric_config(kind, mirror(phi)), -delta).R
                    assert r2 == pytest.approx(r1, abs=1e-10)

    def test_super_gaussian_peak(self):
        # near the reflection peak 1 - R ~ dp^4 / (4 g_ab^4 + Gamma_ab^2 g_ab^2)
        phi = np.pi / 4
        cfg = symmetric_config(Topology.SEPARATE, phi)
        ch = characteristics(cfg)
        scale = 4 * ch.g_ab**4 + ch.gamma_ab**2 * ch.g_ab**2
        for dp in np.linspace(-0.2, 0.2, 21):
            if abs(dp) < 0.02:
                continue  # both sides vanish; relative error unstable
            exact = 1.0 - amplitudes_topology(cfg, ch.lamb_a + dp, phi).R
            approx = dp**4 / scale
            assert exact == pytest.approx(approx, rel=0.05)


class TestLoci:
    def test_separate_peak(self):
        loci = peak_minimum_loci(Topology.SEPARATE, np.pi / 2)
        assert loci.peaks == (pytest.approx(1.0),)

    def test_braided_phi0_single_lorentzian(self):
        loci = peak_minimum_loci(Topology.BRAIDED, 0.0)
        assert loci.peaks[0] == pytest.approx(0.0, abs=1e-12)
        assert loci.peaks[1] == pytest.approx(0.0, abs=1e-12)
        assert loci.minimum is None

    def test_separate_divergent_minimum(self):
        assert peak_minimum_loci(Topology.SEPARATE, np.pi / 4).minimum is None

    def test_braided_divergent_minimum(self):
        assert peak_minimum_loci(Topology.BRAIDED, np.pi / 2).minimum is None

    def test_peaks_reach_unity(self):
        for kind in Topology:
            for phi in (0.13, 0.77, 2.2):
                for peak in peak_minimum_loci(kind, phi).peaks:
                    cfg = symmetric_config(kind, phi)
                    assert amplitudes_general(cfg, peak).R == pytest.approx(1.0, abs=1e-10)

    def test_nested_minimum_matches_grid_argmin(self):
        # independent oracle: brute-force argmin of R on a 1e-4 gamma grid
        phi = np.pi / 10
        loci = peak_minimum_loci(Topology.NESTED, phi)
        grid = np.arange(loci.minimum - 0.5, loci.minimum + 0.5, 1e-4)
        _, r = _topology_amplitude_arrays(Topology.NESTED, phi, grid)
        argmin = grid[np.argmin(np.abs(r) ** 2)]
        assert abs(argmin - loci.minimum) <= 2e-4
