"""End-to-end tests of the named experiments on reduced grids."""
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent
sys.path.insert(0, str(ROOT))

from logfrac_nls.config import build_config  # noqa: E402
from logfrac_nls.experiments import EXPERIMENTS, CutoffZeta, _evolve_resolved, run_experiment  # noqa: E402
from logfrac_nls.grid import make_grid  # noqa: E402
from logfrac_nls.initial_data import gaussian  # noqa: E402
from logfrac_nls.persistence import (  # noqa: E402
    digest_outputs,
    load_report_json,
    read_snapshot,
    read_table_csv,
    write_snapshot,
)
from logfrac_nls.sim_types import ESTIMATES, ExperimentReport, Verdict  # noqa: E402


SMALL_PARAMS = {"dt": 0.01, "T": 0.2, "sample_every": 5}


def _verdicts(report):
    return {a.name: a.verdict for a in report.assertions}


def test_registry_lists_all_experiments():
    assert set(EXPERIMENTS) == {
        "conservation",
        "growth_bounds",
        "eps_cauchy",
        "weighted_moment",
        "commutator_scan",
        "gausson",
        "operator_crossval",
        "inequality_suite",
        "l2_stability",
    }


def test_cutoff_zeta():
    grid = make_grid(1, 128, 32.0)
    values = CutoffZeta(2.0).values(grid)
    x = np.abs(grid.axis)
    assert np.all(values[x <= 2.0] == 1.0)
    assert np.all(values[x >= 4.0] == 0.0)
    with pytest.raises(ValueError):
        CutoffZeta(0.0)


def test_conservation_small(tmp_path):
    cfg = build_config(
        "conservation",
        {
            "grid": {"n": 128},
            "params": {"dt": 1e-3, "T": 0.2, "sample_every": 10},
            "sweeps": {"lam": [-1.0], "eps": [0.1, 0.01, 0.001]},
        },
        output_dir=tmp_path,
    )
    report = run_experiment(cfg)
    verdicts = _verdicts(report)
    assert verdicts["mass_drift[strang,lam=-1]"] == Verdict.PASS
    assert verdicts["mass_drift[lie,lam=-1]"] == Verdict.PASS
    assert verdicts["energy_drift_ratio[strang,lam=-1]"] == Verdict.PASS
    assert verdicts["energy_drift_ratio[lie,lam=-1]"] == Verdict.PASS
    assert verdicts["energy_drift[lam=0]"] == Verdict.PASS
    assert verdicts["energy_limit"] == Verdict.DIAGNOSTIC
    assert verdicts["energy_split_sign[lam=-1]"] == Verdict.PASS
    assert verdicts["energy_space[lam=-1]"] == Verdict.DIAGNOSTIC
    assert report.measured["tail_warnings"]["strang,lam=-1"] == 0
    header, _ = read_table_csv(tmp_path / "conservation" / "series_strang_lam-1.csv")
    assert header[-3:] == ["w1", "f1_eps", "f2_eps"]
    assert (tmp_path / "conservation" / "series_strang_lam-1.csv").exists()
    header, rows = read_table_csv(tmp_path / "conservation" / "energy_limit.csv")
    assert header == ["eps", "energy_eps", "energy", "gap"]
    assert len(rows) == 3
    saved = load_report_json(tmp_path / "conservation" / "report.json")
    assert saved["name"] == "conservation"
    assert "conservation/report.json" in saved["artifacts"]


def test_l2_stability_is_deterministic(tmp_path):
    overrides = {"grid": {"n": 128}, "params": SMALL_PARAMS, "sweeps": {"lam": [-1.0], "eps": [0.1]}}
    digests = []
    for run in ("a", "b"):
        cfg = build_config("l2_stability", overrides, output_dir=tmp_path / run)
        report = run_experiment(cfg)
        assert report.passed
        digests.append(digest_outputs(tmp_path / run))
    assert digests[0] == digests[1]
    assert "l2_stability/stability_lam-1_eps+0p1.csv" in digests[0]


def test_gausson_writes_snapshots(tmp_path):
    cfg = build_config("gausson", {"params": {"T": 0.1, "sample_every": 50}}, output_dir=tmp_path)
    report = run_experiment(cfg)
    assert report.passed, [a.message for a in report.failures]
    final, meta = read_snapshot(tmp_path / "gausson" / "final.bin")
    assert final.grid == make_grid(1, 512, 24.0)
    assert meta == {"s": 1.0, "lam": -1.0, "eps": 0.0, "t": 0.1}
    datum, _ = read_snapshot(tmp_path / "gausson" / "datum.bin")
    assert abs(final.l2_norm() - datum.l2_norm()) < 1e-12


def test_snapshot_layout(tmp_path):
    grid = make_grid(2, 8, 4.0)
    u = gaussian(grid, phase_k=1.0)
    path = write_snapshot(tmp_path / "u.bin", u, 0.5, -1.0, 0.1, 2.0)
    assert path.stat().st_size == 2 * 8 + 5 * 8 + 64 * 16
    back, meta = read_snapshot(path)
    assert np.array_equal(back.values, u.values)
    assert meta["t"] == 2.0
    path.write_bytes(path.read_bytes()[:-16])
    with pytest.raises(ValueError):
        read_snapshot(path)


def test_domain_error_is_reported_not_raised(tmp_path):
    cfg = build_config("gausson", {"params": {"s": 0.5, "T": 0.1}}, output_dir=tmp_path)
    report = run_experiment(cfg)
    assert not report.passed
    assert report.error.startswith("ValueError")
    saved = load_report_json(tmp_path / "gausson" / "report.json")
    assert saved["passed"] is False
    assert saved["error"] == report.error


def test_commutator_scan_small(tmp_path):
    cfg = build_config(
        "commutator_scan",
        {"grid": {"n": 128}, "sweeps": {"s": [0.5], "alpha": [0.5, 1.0]}},
        output_dir=tmp_path,
    )
    report = run_experiment(cfg)
    verdicts = _verdicts(report)
    assert verdicts["identity_weight_controls"] == Verdict.PASS
    assert verdicts["refinement_stability"] == Verdict.PASS
    inadmissible = next(a for a in report.assertions if a.name == "inadmissible_pairs")
    assert list(inadmissible.measured["changes"]) == ["s=0.5,alpha=1"]


def test_weighted_moment_small(tmp_path):
    cfg = build_config(
        "weighted_moment",
        {"grid": {"n": 128}, "params": SMALL_PARAMS, "sweeps": {"s": [0.7], "alpha": [1.0], "lam": [-1.0]}},
        output_dir=tmp_path,
    )
    verdicts = _verdicts(run_experiment(cfg))
    assert verdicts["identity_weight[s=0.7,alpha=0,lam=-1]"] == Verdict.PASS
    assert verdicts["moment_derivative[s=0.7,alpha=1,lam=-1]"] == Verdict.PASS
    assert "moment_bound[s=0.7,alpha=1,lam=-1]" in verdicts
    assert (tmp_path / "weighted_moment" / "moment_s+0p7_a+1_lam-1.csv").exists()


def test_inequality_suite(tmp_path):
    report = run_experiment(build_config("inequality_suite", output_dir=tmp_path))
    assert report.passed, [a.message for a in report.failures]


def test_pdf_report(tmp_path):
    pytest.importorskip("reportlab")
    cfg = build_config("gausson", {"params": {"T": 0.01, "sample_every": 5}}, output_dir=tmp_path)
    report = run_experiment(cfg, pdf=True)
    pdf = tmp_path / "gausson" / "report.pdf"
    assert pdf.exists()
    assert pdf.read_bytes().startswith(b"%PDF")
    assert "gausson/report.pdf" in report.artifacts


def test_growth_bounds_small(tmp_path):
    cfg = build_config(
        "growth_bounds",
        {"grid": {"n": 128}, "params": SMALL_PARAMS, "sweeps": {"s": [0.5], "lam": [-1.0, 1.0], "eps": [0.1]}},
        output_dir=tmp_path,
    )
    report = run_experiment(cfg)
    assert report.passed, [a.message for a in report.failures]
    verdicts = _verdicts(report)
    assert verdicts["gronwall[s=0.5,lam=-1,eps=0.1]"] == Verdict.PASS
    assert verdicts["gronwall[s=0.5,lam=1,eps=0.1]"] == Verdict.PASS
    assert verdicts["constant_norms[s=0.5,lam=0,eps=0.1]"] == Verdict.PASS
    gronwall = next(a for a in report.assertions if a.name == "gronwall[s=0.5,lam=-1,eps=0.1]")
    assert gronwall.measured["tail_warnings"] == 0
    assert gronwall.measured["n"] == 128
    header, rows = read_table_csv(tmp_path / "growth_bounds" / "ratios_summary.csv")
    assert header[4] == "n"
    assert len(rows) == 3


def test_under_resolved_run_is_refined(tmp_path):
    cfg = build_config(
        "growth_bounds",
        {"grid": {"n": 16}, "params": {"dt": 0.01, "T": 0.02, "sample_every": 1}},
        output_dir=tmp_path,
    )
    report = ExperimentReport(name=cfg.name, config=cfg.to_dict())
    traj, used = _evolve_resolved(cfg, report, cfg.grid.build(), cfg.params, "coarse")
    assert used.n == 32
    assert traj.final.grid == used
    diag = next(a for a in report.assertions if a.name == "spectral_resolution[coarse]")
    assert diag.verdict == Verdict.DIAGNOSTIC
    assert diag.measured["n"] == 16 and diag.measured["refined_n"] == 32
    assert diag.measured["tail_warnings"] == 3
    assert set(report.measured["tail_warnings"]) == {"coarse", "coarse,n=32"}


def test_eps_cauchy_small(tmp_path):
    cfg = build_config(
        "eps_cauchy",
        {"grid": {"n": 128}, "params": SMALL_PARAMS, "sweeps": {"eps": [0.1, 0.01, 0.001]}},
        output_dir=tmp_path,
    )
    report = run_experiment(cfg)
    verdicts = _verdicts(report)
    assert verdicts["cauchy_monotone[R=4]"] == Verdict.PASS
    assert verdicts["cauchy_monotone[R=8]"] == Verdict.PASS
    assert verdicts["cauchy_bound_form"] == Verdict.DIAGNOSTIC
    header, rows = read_table_csv(tmp_path / "eps_cauchy" / "sup_differences.csv")
    assert header == ["eps", "mu", "R", "sup_difference"]
    assert len(rows) == 6


def test_operator_crossval(tmp_path):
    report = run_experiment(build_config("operator_crossval", output_dir=tmp_path))
    assert report.passed, [a.message for a in report.failures]
    verdicts = _verdicts(report)
    for name in (
        "gagliardo_ratio_spread[s=0.5]",
        "gagliardo_ratio_refinement[s=0.5]",
        "singular_integral_agreement[s=0.5]",
        "plane_wave_eigenvalue[s=0.5]",
    ):
        assert verdicts[name] == Verdict.PASS
    assert (tmp_path / "operator_crossval" / "crossval.csv").exists()


def test_every_assertion_names_one_estimate(tmp_path):
    report = run_experiment(build_config("inequality_suite", output_dir=tmp_path))
    saved = load_report_json(tmp_path / "inequality_suite" / "report.json")
    assert all(a["ref"] in ESTIMATES for a in saved["assertions"])
    assert set(saved["references"]) == {a.ref for a in report.assertions}
    assert saved["references"]["log_lipschitz"] == ESTIMATES["log_lipschitz"]
    with pytest.raises(KeyError):
        report.check("orphan", True, "no estimate", ref="not_an_estimate")
