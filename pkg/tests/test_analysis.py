import math

import pytest

from casimag.analysis import (
    LocusPoint,
    RepulsionMetrics,
    find_max_repulsion,
    find_transition,
    solve_locus,
    sweep,
)
from casimag.errors import (
    ConfigurationError,
    LocusRangeError,
    NoTransitionError,
)
from casimag.lifshitz import CavityConfig, DEFAULT_SETTINGS, total_pressure, pressure_term
from casimag.materials import (
    Material,
    QuasistaticMagnetic,
    default_yig_like,
    gold_drude,
    gold_plasma,
    with_mu0,
)
from casimag.reflection import TE


def au_yig_cavity(b=1e-6, T=300.0, mu0=None):
    right = default_yig_like() if mu0 is None else with_mu0(default_yig_like(), mu0)
    return CavityConfig(gold_plasma(), right, b, T)


class TestFindTransition:
    def test_micron_slab_room_temperature(self):
        d_t = find_transition(au_yig_cavity())
        assert 1.92e-6 <= d_t <= 2.60e-6
        # the root really is a sign change
        eng = DEFAULT_SETTINGS.tightened()
        assert total_pressure(d_t * 0.99, au_yig_cavity(), eng).total < 0
        assert total_pressure(d_t * 1.01, au_yig_cavity(), eng).total > 0

    def test_explicit_bracket_is_used(self):
        d_t = find_transition(au_yig_cavity(), 1.5e-6, 3.0e-6)
        assert d_t == pytest.approx(find_transition(au_yig_cavity()), rel=1e-5)

    def test_drude_is_purely_attractive(self):
        cav = CavityConfig(gold_drude(), default_yig_like(), 1e-6, 300.0)
        with pytest.raises(NoTransitionError, match="attractive"):
            find_transition(cav)

    def test_nonmagnetic_slab_has_no_transition(self):
        with pytest.raises(NoTransitionError):
            find_transition(au_yig_cavity(mu0=1.0))

    def test_thin_slab_transition_scale(self):
        d_t = find_transition(au_yig_cavity(b=1e-9))
        assert 180e-9 <= d_t <= 300e-9


class TestFindMaxRepulsion:
    def test_micron_slab_metrics(self):
        metrics = find_max_repulsion(au_yig_cavity())
        assert 2.52e-6 <= metrics.d_at_max_repulsion <= 3.40e-6
        assert metrics.d_transition < metrics.d_at_max_repulsion
        assert metrics.p_max > 0.0

    def test_maximum_beats_neighbours(self):
        metrics = find_max_repulsion(au_yig_cavity())
        eng = DEFAULT_SETTINGS.tightened()
        p = lambda d: total_pressure(d, au_yig_cavity(), eng).total
        assert metrics.p_max >= p(metrics.d_at_max_repulsion * 0.99)
        assert metrics.p_max >= p(metrics.d_at_max_repulsion * 1.01)

    def test_p_max_monotone_in_mu0(self):
        values = [find_max_repulsion(au_yig_cavity(b=1e-8, mu0=m)).p_max
                  for m in (20.0, 160.0, 1000.0)]
        assert values[0] < values[1] < values[2]

    def test_d_transition_monotone_decreasing_in_mu0(self):
        values = [find_max_repulsion(au_yig_cavity(b=1e-8, mu0=m)).d_transition
                  for m in (20.0, 160.0, 1000.0)]
        assert values[0] > values[1] > values[2]

    def test_metrics_invariant_enforced(self):
        with pytest.raises(ValueError):
            RepulsionMetrics(2e-6, 1e-6, 1.0)


class TestThermalTrend:
    def test_transition_decreases_with_temperature(self):
        d_ts = [find_transition(au_yig_cavity(b=1e-9, mu0=20.0, T=T))
                for T in (300.0, 305.0, 310.0)]
        assert d_ts[0] > d_ts[1] > d_ts[2]


class TestSolveLocus:
    def test_eps0_one_needs_no_magnetism(self):
        point = solve_locus(1.0, 6e-6, 1e-9, 300.0)
        assert point.mu0 == pytest.approx(1.0, abs=1e-9)

    def test_unit_slope_regime(self):
        lo = solve_locus(5.0, 6e-6, 1e-9, 300.0)
        hi = solve_locus(20.0, 6e-6, 1e-9, 300.0)
        slope = (hi.mu0 - lo.mu0) / (20.0 - 5.0)
        assert 0.9 <= slope <= 1.1
        # static offsets agree within 5% of the permeability scale
        assert abs((hi.mu0 - hi.eps0) - (lo.mu0 - lo.eps0)) <= 0.05 * hi.mu0

    def test_zero_pressure_residual_bound(self):
        point = solve_locus(10.0, 6e-6, 1e-9, 300.0)
        from casimag.materials import rescale_to_eps0
        eps = rescale_to_eps0(default_yig_like().epsilon, 10.0)
        cav = CavityConfig(gold_plasma(),
                           Material(eps, QuasistaticMagnetic(point.mu0)),
                           1e-9, 300.0)
        eng = DEFAULT_SETTINGS.tightened()
        dec = total_pressure(6e-6, cav, eng)
        assert abs(dec.total) < 1e-4 * abs(dec.te_zero)

    def test_bulk_asymptote_near_eps0_eight(self):
        # for a half-space slab the saturated static TE mode cannot beat
        # the attraction beyond eps0 ~ 8: the root escapes the ceiling
        grows = [solve_locus(e, 6e-6, math.inf, 300.0).mu0 for e in (7.0, 8.0)]
        assert grows[0] < grows[1]
        assert grows[1] > 100.0
        with pytest.raises(LocusRangeError) as err:
            solve_locus(8.4, 6e-6, math.inf, 300.0)
        assert err.value.pressure_hi < 0.0

    def test_invalid_eps0(self):
        with pytest.raises(ConfigurationError):
            solve_locus(0.5, 6e-6, 1e-9, 300.0)


class TestSweep:
    def test_temperature_sweep_records(self):
        records = sweep("temperature", [300.0, 305.0, 310.0],
                        au_yig_cavity(b=1e-9, mu0=160.0))
        assert [r["value"] for r in records] == [300.0, 305.0, 310.0]
        assert all(r["error"] is None for r in records)
        d_ts = [r["d_T"] for r in records]
        assert d_ts[0] > d_ts[1] > d_ts[2]

    def test_rows_match_independent_evaluation(self):
        base = au_yig_cavity(b=1e-9, mu0=160.0)
        full = sweep("temperature", [300.0, 310.0], base)
        solo = sweep("temperature", [310.0], base)
        assert full[1]["d_T"] == solo[0]["d_T"]
        assert full[1]["p_max"] == solo[0]["p_max"]

    def test_separation_sweep_emits_decomposition(self):
        records = sweep("separation", [1e-6, 2e-6], au_yig_cavity())
        assert set(records[0]) >= {"total", "te_zero", "tm_zero",
                                   "te_pos", "tm_pos", "n_terms"}

    def test_failures_recorded_per_row(self):
        records = sweep("mu0", [1.0, 160.0], au_yig_cavity(b=1e-9))
        assert records[0]["error"] is not None
        assert records[1]["error"] is None
        assert records[1]["d_T"] > 0

    def test_grid_validation(self):
        with pytest.raises(ConfigurationError):
            sweep("mu0", [], au_yig_cavity())
        with pytest.raises(ConfigurationError):
            sweep("mu0", [5.0, 2.0], au_yig_cavity())
        with pytest.raises(ConfigurationError):
            sweep("voltage", [1.0], au_yig_cavity())
