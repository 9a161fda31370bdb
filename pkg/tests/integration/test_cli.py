"""Integration tests for the mixlab command line"""

from unittest.mock import Mock

import pytest

from src.cli import EXIT_INTERNAL, EXIT_INVALID_INPUT, EXIT_OK, main
from src.commands.commands import COMMANDS_REGISTRY
from src.groups.core import InternalConsistencyError


@pytest.mark.integration
class TestListingAndChecks:
    """Test commands that run to completion"""

    def test_instances(self, run_cli):
        status, body = run_cli("instances")
        assert status == EXIT_OK
        assert body["outcome"]["kind"] == "InstanceList"
        assert [i["id"] for i in body["outcome"]["instances"]][0] == "f2-cyclic"
        assert len(body["outcome"]["instances"]) == 8

    def test_check_st_wreath(self, run_cli):
        status, body = run_cli("check", "st", "--instance", "wreath-z2-z", "--radius", "6")
        assert status == EXIT_OK
        assert body["outcome"]["status"] == "Holds"
        assert body["outcome"]["method"] == "ClosedForm"
        assert body["budget"]["radius"] == 6

    def test_check_ss_with_a_set(self, run_cli):
        status, body = run_cli(
            "check", "ss", "--instance", "rotation4", "--set", "(1,0);(0,1);(-1,0);(0,-1)"
        )
        assert status == EXIT_OK
        verdict = body["outcome"]
        assert verdict["status"] == "Fails"
        assert verdict["certificate"]["kind"] == "RefutedWithin"
        assert verdict["certificate"]["rule"] == "finite-order-matrix"
        assert verdict["certificate"]["evidence"] == [[[1, 0], 0], [[0, 1], 0], [[-1, 0], 0], [[0, -1], 0]]

    def test_check_wss(self, run_cli):
        status, body = run_cli(
            "check", "wss", "--instance", "rotation4", "--set", "((1,0),0)", "--g", "((1,0),0)"
        )
        assert status == EXIT_OK
        assert body["outcome"]["certificate"]["h"] == [[0, 0], 1]

    def test_check_intersection(self, run_cli):
        status, body = run_cli(
            "check", "st", "--instance", "free-zz", "--g", "b a", "--h", "a b^-1"
        )
        assert status == EXIT_OK
        assert body["outcome"]["kind"] == "IntersectionReport"
        assert body["outcome"]["members"] == [[[1, -2]]]

    def test_qn(self, run_cli):
        status, body = run_cli("qn", "--instance", "free-zz", "--g", "b", "--radius", "6")
        assert status == EXIT_OK
        assert body["outcome"]["verdict"]["kind"] == "IndexAtLeast"
        assert body["outcome"]["verdict"]["n"] == 13

    def test_orbit(self, run_cli):
        status, body = run_cli("orbit", "--instance", "rotation4", "--g", "((1,0),0)")
        assert status == EXIT_OK
        assert body["outcome"]["status"] == "Finite"
        assert len(body["outcome"]["elements"]) == 4

    def test_decay_writes_tsv(self, run_cli, tmp_path):
        tsv = tmp_path / "profile.tsv"
        status, body = run_cli(
            "decay", "--instance", "free-zz", "--x", "b^-1", "--y", "b", "--radius", "20", "--tsv", str(tsv)
        )
        assert status == EXIT_OK
        assert body["outcome"]["exceptional"] == [[]]
        assert len(tsv.read_text(encoding="utf-8").splitlines()) == 42

    def test_counterexample(self, run_cli):
        status, body = run_cli("counterexample", "--instance", "rotation4", "--a0", "1,0")
        assert status == EXIT_OK
        report = body["outcome"]
        assert report["selfadjoint"] and report["orthogonal_to_K"] and report["commutes_with_H_generators"]
        assert report["norm2"] == 4
        assert report["norm"] == "2.000000"

    def test_corollary(self, run_cli):
        status, body = run_cli("corollary", "--instance", "wreath-z2-z")
        assert status == EXIT_OK
        assert body["outcome"]["conclusion_licensed"] is True

    def test_output_is_deterministic(self, capsys):
        argv = ["check", "ss", "--instance", "free-zz", "--set", "b"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first


@pytest.mark.integration
class TestInputErrors:
    """Test exit status 2 and the JSON error object"""

    def test_unknown_instance(self, run_cli):
        status, body = run_cli("check", "ss", "--instance", "nope")
        assert status == EXIT_INVALID_INPUT
        assert body["status"] == "invalid_input"
        assert "nope" in body["error"]

    def test_malformed_literal(self, run_cli):
        status, body = run_cli("qn", "--instance", "free-zz", "--g", "a c")
        assert status == EXIT_INVALID_INPUT
        assert "position" in body["error"]

    def test_non_positive_radius(self, run_cli):
        status, body = run_cli("check", "ss", "--instance", "wreath-z2-z", "--radius", "0")
        assert status == EXIT_INVALID_INPUT
        assert "Invalid budget" in body["error"]

    def test_wss_needs_g(self, run_cli):
        status, body = run_cli("check", "wss", "--instance", "rotation4", "--set", "((1,0),0)")
        assert status == EXIT_INVALID_INPUT

    def test_element_in_k(self, run_cli):
        status, body = run_cli("orbit", "--instance", "rotation4", "--g", "((0,0),1)")
        assert status == EXIT_INVALID_INPUT
        assert "K" in body["error"]

    def test_budget_exceeded(self, run_cli):
        status, body = run_cli("orbit", "--instance", "rotation4", "--max-elements", "3")
        assert status == EXIT_INVALID_INPUT
        assert body["status"] == "budget_exceeded"

    def test_invalid_config(self, run_cli, monkeypatch):
        monkeypatch.setenv("MIXLAB_WORKERS", "0")
        status, body = run_cli("instances")
        assert status == EXIT_INVALID_INPUT
        assert body["status"] == "invalid_config"

    def test_max_elements_from_environment(self, run_cli, monkeypatch):
        monkeypatch.setenv("MIXLAB_MAX_ELEMENTS", "3")
        status, body = run_cli("orbit", "--instance", "rotation4")
        assert status == EXIT_INVALID_INPUT
        assert body["status"] == "budget_exceeded"

    def test_missing_required_flag(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["check", "ss"])
        assert excinfo.value.code == 2

    def test_unknown_condition(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["check", "sst", "--instance", "rotation4"])
        assert excinfo.value.code == 2


@pytest.mark.integration
class TestInternalErrors:
    def test_consistency_violation_exits_3(self, run_cli, mocker):
        mocker.patch.dict(
            COMMANDS_REGISTRY, {"check": Mock(side_effect=InternalConsistencyError("boom"))}
        )
        status, body = run_cli("check", "ss", "--instance", "rotation4")
        assert status == EXIT_INTERNAL
        assert body == {"error": "boom", "status": "internal_consistency"}
