import json

import numpy as np
import pytest

from app.bvp.green import green_grid
from app.bvp.inequality import hw_check
from app.bvp.reduction import CABRERA_CASES, golden_checks
from app.bvp.solver import critical_lambda, has_nontrivial_solution
from app.schemas import GridFunction, PotentialSpec, Verdict
from app.utils.io import dump_bvp_config, load_bvp_config, read_grid_csv, write_grid_csv
from main import main


@pytest.mark.integration
class TestReductionWorkflow:
    """Integration tests for the Riemann-Liouville golden suite"""

    def test_golden_checks_pass(self):
        """Test every reduction check against its closed form"""
        checks = golden_checks()
        failed = [(c.name, c.error, c.tol) for c in checks if not c.passed]
        assert failed == []
        names = {c.name for c in checks}
        assert "green_rl_max_abs" in names
        assert sum(name.startswith("cabrera") for name in names) == len(CABRERA_CASES)

    def test_reduce_check_command(self, capsys):
        """Test the reduce-check command end to end"""
        assert main(["reduce-check"]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        payload = json.loads(out[-1])
        assert payload["passed"] is True
        assert all(check["passed"] for check in payload["checks"])
        assert not any(line.startswith("FAIL") for line in out)

    def test_reduce_check_reports_failure(self, capsys, monkeypatch):
        """Test exit status 5 when a golden value is off"""
        from app.bvp import reduction

        monkeypatch.setattr(reduction, "hw_lhs", lambda q, config: 1.0)
        assert main(["reduce-check"]) == 5
        assert "FAIL hw_lhs[q=1]" in capsys.readouterr().out


@pytest.mark.integration
class TestBVPWorkflow:
    """Integration tests for configuration files and the certificate workflow"""

    def test_config_round_trip(self, tmp_path, prabhakar_config):
        """Test that a dumped configuration loads back unchanged"""
        path = tmp_path / "config.json"
        path.write_text(dump_bvp_config(prabhakar_config), encoding="utf-8")
        document = json.loads(path.read_text(encoding="utf-8"))
        assert document["schema"] == 1
        assert set(document) == {"schema", "a", "b", "xi", "eta", "k", "rho", "beta", "gamma", "omega"}
        assert load_bvp_config(path) == prabhakar_config

    def test_grid_csv_potential(self, tmp_path, uncoupled_config):
        """Test a tabulated potential read back from CSV"""
        nodes = np.linspace(0.0, 1.0, 11)
        grid = GridFunction(nodes=tuple(nodes), values=tuple(1.0 + nodes))
        path = tmp_path / "q.csv"
        write_grid_csv(path, grid)
        loaded = read_grid_csv(path)
        assert loaded == grid
        tabulated = hw_check(PotentialSpec.tabulated(loaded), uncoupled_config)
        polynomial = hw_check(PotentialSpec.poly([1.0, 1.0]), uncoupled_config)
        assert tabulated.lhs == pytest.approx(polynomial.lhs, rel=1e-8)

    def test_certificate_is_one_sided(self, uncoupled_config):
        """Test the certificate below, at and above the critical constant"""
        lam = critical_lambda(uncoupled_config, 128)

        at_critical = hw_check(PotentialSpec.const(lam), uncoupled_config)
        assert at_critical.verdict is Verdict.NECESSARY_CONDITION_HOLDS
        assert at_critical.margin >= -1e-4

        # No solution at lambda*/2, whatever the certificate says
        half = PotentialSpec.const(0.5 * lam)
        assert not has_nontrivial_solution(uncoupled_config, half, 128).exists
        assert hw_check(half, uncoupled_config).lhs == pytest.approx(0.5 * at_critical.lhs, rel=1e-9)

        small = PotentialSpec.const(1.0)
        assert hw_check(small, uncoupled_config).verdict is Verdict.NO_NONTRIVIAL_SOLUTION_CERTIFIED
        assert not has_nontrivial_solution(uncoupled_config, small, 128).exists

    def test_green_export_matches_library(self, tmp_path, capsys, config_file, prabhakar_config):
        """Test the exported CSV against green_grid"""
        out = tmp_path / "g.csv"
        assert main(["green", "--config", config_file(prabhakar_config), "--grid", "8", "--out", str(out)]) == 0
        data = np.loadtxt(out, delimiter=",", skiprows=1)
        nodes, grid = green_grid(prabhakar_config, 8)
        np.testing.assert_array_equal(data[:, 2].reshape(9, 9), grid)
        np.testing.assert_array_equal(data[:9, 1], nodes)


if __name__ == "__main__":
    pytest.main([__file__])
