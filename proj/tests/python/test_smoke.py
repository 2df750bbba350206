import math

import pytest

import fsosec


def test_normalized_second_moment():
    p = fsosec.normalized(2.3, 4.6)
    assert fsosec.ew_moment(2, p) == pytest.approx(1.0, abs=1e-9)


def test_quantile_inverts_cdf():
    p = fsosec.normalized(1.8, 3.1)
    for u in (0.01, 0.5, 0.99):
        i = fsosec.ew_quantile(u, p)
        assert fsosec.ew_cdf_snr(i * i, 1.0, p) == pytest.approx(u, rel=1e-12)


def test_uplink_series_matches_quadrature():
    p = fsosec.normalized(2.31, 4.62)
    b = fsosec.LinkBudget.from_snrs(1000.0, 10.0)
    series = fsosec.sop_uplink_series(b, p, 0.01)
    quad = fsosec.sop_uplink_quadrature(b, p, 0.01)
    assert series == pytest.approx(quad, rel=1e-6)


def test_downlink_closed_form_within_mc_interval():
    p = fsosec.normalized(1.94, 6.34)
    b = fsosec.LinkBudget.from_snrs(12.0, 10.0)
    closed = fsosec.sop_downlink(b, p, 0.01)
    est, ci = fsosec.mc_sop(b, p, False, 0.01, samples=200_000)
    assert abs(est - closed) <= max(0.02 * closed, 3 * ci)


def test_budget_invariant_raises():
    with pytest.raises(fsosec.ConfigError, match=r"r_e\+r_b <= 1"):
        fsosec.LinkBudget.from_fractions(100.0, 0.7, 0.5)


def test_fig2_preset_sweeps():
    text = fsosec.preset_text("fig2")
    t = fsosec.run_sweep(text, mc_samples=2000)
    assert t["names"][0] == "sweep_snr_db"
    assert not t["failures"]
    col = t["columns"]["sop_ul_closed__re0.1_rs0.01"]
    assert all(0.0 <= v <= 1.0 for v in col)
    assert all(a > b for a, b in zip(col, col[1:]))


def test_syntax_error_reports_position():
    with pytest.raises(fsosec.ParseError, match=r"line 2"):
        fsosec.run_sweep('{\n  "name": ,\n}')


def test_presets_listed():
    assert fsosec.preset_names() == ["fig2", "fig3", "fig4", "fig5"]
    assert math.isfinite(fsosec.asc_downlink(fsosec.LinkBudget.from_snrs(100.0, 1.0)))
