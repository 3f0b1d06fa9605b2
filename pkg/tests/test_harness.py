import json
import math

import numpy as np
import pytest

from thinpart.harness.cli import main as cli_main
from thinpart.harness.config import (
    ConfigError,
    ExperimentConfig,
    config_from_dict,
    derive_group,
    load_config,
)
from thinpart.harness.experiments import (
    InsufficientDataError,
    WalkCapError,
    drift_parameters,
    expansion_indicator,
    run_evanescence,
    run_expansion_probability,
    run_grassmann,
    run_integrability,
    run_key_inequality,
    run_stationary_bound,
)
from thinpart.harness.report import (
    ExperimentReport,
    Verdict,
    render_report_json,
    render_samples_csv,
    write_report,
)

_SMALL = ExperimentConfig(n_base_points=6, n_mc_samples=30, walk_length=300)


class TestConfig:
    def test_defaults(self):
        cfg = ExperimentConfig()
        assert cfg.group_n == 2
        assert cfg.lambda_ == 55.0
        assert cfg.x0 == pytest.approx(math.exp(-1.0))
        assert cfg.workers == 1

    def test_json_round_trip_uses_bare_lambda(self, tmp_path):
        cfg = ExperimentConfig(lambda_=60.0)
        doc = cfg.to_json_dict()
        assert doc["lambda"] == 60.0
        assert "lambda_" not in doc
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(doc))
        assert load_config(path) == cfg

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError, match="unknown"):
            config_from_dict({"lambda": 55.0, "bogus": 1})

    def test_validation(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(x0=1.5)
        with pytest.raises(ConfigError):
            ExperimentConfig(a1=1.0)
        with pytest.raises(ConfigError):
            ExperimentConfig(n_base_points=0)
        with pytest.raises(ConfigError):
            ExperimentConfig(seed=-1)
        with pytest.raises(ConfigError):
            ExperimentConfig(eps_grid=(1e-3, 1e-3))

    def test_eps_grid_must_sit_below_rho(self):
        with pytest.raises(ConfigError, match="search radius"):
            derive_group(ExperimentConfig(eps_grid=(0.1, 0.01)))

    def test_replace_revalidates(self):
        cfg = ExperimentConfig()
        assert cfg.replace(seed=5).seed == 5
        with pytest.raises(ConfigError):
            cfg.replace(walk_length=0)


class TestReport:
    def _tiny_report(self):
        return ExperimentReport(
            experiment="demo",
            config=ExperimentConfig(),
            revision="deadbeef",
            columns=("a", "b"),
            samples=[(1, 0.5), (2, None)],
            summary={"x": 1.0, "nested": {"flag": True, "items": [1, 2.5]}},
            verdicts=[Verdict("check-one", True, 0.25), Verdict("check-two", False, None)],
        )

    def test_json_is_stable_and_parseable(self):
        rep = self._tiny_report()
        text = render_report_json(rep)
        assert text == render_report_json(rep)
        doc = json.loads(text)
        assert doc["experiment"] == "demo"
        assert doc["summary"]["nested"]["items"] == [1, 2.5]
        assert doc["verdicts"][1]["margin"] is None

    def test_float_round_trip_precision(self):
        rep = self._tiny_report()
        rep.summary = {"v": 0.1 + 0.2}
        doc = json.loads(render_report_json(rep))
        assert doc["summary"]["v"] == 0.1 + 0.2

    def test_csv_cells(self):
        rep = self._tiny_report()
        rep.columns = ("a", "b", "c")
        rep.samples = [(1, True, None), (2, False, 0.25)]
        text = render_samples_csv(rep)
        assert text == "a,b,c\n1,1,\n2,0,0.25\n"

    def test_csv_rejects_ragged_rows(self):
        rep = self._tiny_report()
        rep.samples = [(1,)]
        with pytest.raises(ValueError):
            render_samples_csv(rep)

    def test_non_finite_floats_refused(self):
        rep = self._tiny_report()
        rep.summary = {"v": math.inf}
        with pytest.raises(ValueError):
            render_report_json(rep)

    def test_write_report_creates_files(self, tmp_path):
        json_path, csv_path = write_report(self._tiny_report(), tmp_path / "out")
        assert json_path.read_text().startswith("{")
        assert csv_path.read_text().startswith("a,b")


class TestRunners:
    def test_expansion_summary_recomputable_from_samples(self):
        rep = run_expansion_probability(_SMALL)
        flags = [row[4] for row in rep.samples]
        assert rep.summary["p_hat"] == pytest.approx(np.mean(flags), abs=0.0)
        assert rep.summary["n_pairs"] == len(rep.samples)
        assert rep.summary["per_model"] == 3

    def test_expansion_indicator_threshold(self):
        assert expansion_indicator(2.0, 1.0)
        assert not expansion_indicator(1.99, 1.0)

    def test_thin_filter_failure_is_config_error(self):
        # at this scale rho is so small that no conjugator in the sampler's
        # conditioning window can be thin
        cfg = ExperimentConfig(
            lambda_=math.exp(10.0) + 1.0,
            n_base_points=1,
            n_mc_samples=10,
            eps_grid=(1.2e-5, 1e-5),
        )
        with pytest.raises(ConfigError, match="conditioning"):
            run_expansion_probability(cfg)

    def test_key_inequality_supplied_p_hat(self):
        rep = run_key_inequality(_SMALL, p_hat=0.88)
        assert rep.summary["p_hat_source"] == "supplied"
        assert rep.summary["pass_fraction"] >= 0.95
        assert rep.all_passed()
        # f = radius^-delta is recomputable from the stored columns
        for row in rep.samples[:10]:
            assert row[3] == pytest.approx(row[2] ** -rep.summary["delta"], rel=1e-12)

    def test_key_inequality_balance_failure_report(self):
        rep = run_key_inequality(_SMALL, p_hat=0.88, delta_factor=10.0)
        assert not rep.all_passed()
        assert rep.summary["balance_failed"]
        assert "lambda" in rep.summary["advice"]
        assert rep.samples == []
        assert [v.check for v in rep.verdicts] == ["drift-balance"]

    def test_degenerate_p_hat_rejected(self):
        with pytest.raises(ConfigError):
            run_key_inequality(_SMALL, p_hat=1.5)
        rep = run_key_inequality(_SMALL, p_hat=1.0)  # boundary: no balance
        assert not rep.all_passed()

    def test_drift_parameters_match_manual_calculus(self):
        from thinpart.contraction import delta_opt, phi

        _, rp = derive_group(_SMALL)
        cp = drift_parameters(_SMALL, rp, 0.88)
        a2 = 55.0**-1
        delta = delta_opt(2.0, a2, 0.88)
        assert cp.a2 == pytest.approx(a2, rel=1e-15)
        assert cp.delta == pytest.approx(delta, rel=1e-15)
        assert cp.c == pytest.approx(phi(delta, 2.0, a2, 0.88), rel=1e-15)
        assert cp.b == pytest.approx((a2 * rp.rho / 2.0) ** -delta, rel=1e-15)

    def test_stationary_levels_recomputable(self):
        rep = run_stationary_bound(_SMALL, p_hat=0.88)
        radii = [r for _, r, kept in rep.samples if kept]
        assert len(radii) == rep.summary["retained"]
        lv = rep.summary["levels"][0]
        assert lv["fraction"] == pytest.approx(np.mean(np.array(radii) < lv["eps"]), abs=0.0)

    def test_stationary_symmetrized_changes_trajectory(self):
        plain = run_stationary_bound(_SMALL, p_hat=0.88)
        mixed = run_stationary_bound(_SMALL, p_hat=0.88, symmetrized=True)
        assert plain.summary["symmetrized"] is False
        assert mixed.summary["symmetrized"] is True
        assert any(a != b for a, b in zip(plain.samples, mixed.samples))

    def test_integrability_insufficient_data(self):
        with pytest.raises(InsufficientDataError):
            run_integrability(_SMALL.replace(walk_length=1), p_hat=0.88)

    def test_integrability_diagnostic_run_has_no_verdicts(self):
        rep = run_integrability(_SMALL, p_hat=0.88, exponent_factor=3.0)
        assert rep.verdicts == []
        assert rep.all_passed()

    def test_integrability_walk_matches_stationary_walk(self):
        # both experiments deliberately share the walk stream
        stat = run_stationary_bound(_SMALL, p_hat=0.88)
        integ = run_integrability(_SMALL, p_hat=0.88)
        stat_radii = {t: r for t, r, kept in stat.samples if kept}
        for t, r, _, _ in integ.samples[:50]:
            assert stat_radii[t] == r

    def test_evanescence_needs_n2(self):
        cfg = ExperimentConfig(group_n=3, eps_grid=(1e-7, 1e-8))
        with pytest.raises(ConfigError, match="n = 2"):
            run_evanescence(cfg)

    def test_walk_cap_error_carries_stats(self):
        err = WalkCapError(steps_done=50, incidents=6, required=2_000_000, cap=1_000_000)
        assert err.incidents == 6
        assert "entry window" in str(err)


class TestDeterminism:
    def test_reports_are_byte_identical(self):
        cfg = ExperimentConfig(n_mc_samples=60)
        first = run_grassmann(cfg)
        second = run_grassmann(cfg)
        assert render_report_json(first) == render_report_json(second)
        assert render_samples_csv(first) == render_samples_csv(second)

    def test_worker_count_does_not_change_summaries(self):
        one = run_expansion_probability(_SMALL)
        two = run_expansion_probability(_SMALL.replace(workers=2))
        assert one.summary == two.summary
        assert one.samples == two.samples

    def test_seed_changes_samples(self):
        base = run_expansion_probability(_SMALL)
        moved = run_expansion_probability(_SMALL.replace(seed=1))
        assert base.samples != moved.samples


class TestCli:
    def test_constants_exit_zero(self, tmp_path, capsys):
        code = cli_main(["constants", "--out", str(tmp_path / "c")])
        out = capsys.readouterr().out
        assert code == 0
        assert "[PASS] delta-table-n2" in out
        assert (tmp_path / "c" / "report.json").exists()

    def test_verdict_failure_exit_two(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(_SMALL.to_json_dict()))
        code = cli_main([
            "key-inequality", "--config", str(cfg_path),
            "--p-hat", "0.88", "--delta-factor", "10",
            "--out", str(tmp_path / "k"),
        ])
        assert code == 2

    def test_config_error_exit_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"bogus": 1}')
        code = cli_main(["constants", "--config", str(bad)])
        assert code == 1
        assert "unknown config keys" in capsys.readouterr().err

    def test_seed_override_applies(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(_SMALL.to_json_dict()))
        out = tmp_path / "g"
        code = cli_main([
            "grassmann", "--config", str(cfg_path), "--seed", "9", "--out", str(out),
        ])
        assert code == 0
        doc = json.loads((out / "report.json").read_text())
        assert doc["seed"] == 9
