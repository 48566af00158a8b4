import json

import pytest

from projrep.cli import main
from projrep.errors import ConsistencyViolationError


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_trivial_reducible(capsys):
    code, out, _ = run(capsys, "analyze", "-n", "2", "-a", "0", "-b", "0")
    assert code == 0
    assert "verdict: reducible" in out
    assert "first failure degree 1" in out
    assert "composition series" in out
    assert "degree 1: 0 of 2" in out


def test_analyze_json_roundtrip(capsys):
    code, out, _ = run(capsys, "analyze", "-n", "2", "-a", "1", "-b", "1/2", "--json")
    assert code == 0
    doc = json.loads(out)
    assert json.loads(json.dumps(doc)) == doc
    assert doc["highest_weight"] == ["3/4", "-1/4"]
    assert doc["criterion"]["verdict"] == "irreducible"
    assert doc["jordan_holder"] is None
    assert all(row["rank"] == row["full"] for row in doc["ranks_by_degree"])


def test_analyze_table_and_json_agree(capsys):
    code, out_json, _ = run(capsys, "analyze", "-n", "2", "-a", "1", "-b", "1", "--json")
    doc = json.loads(out_json)
    code2, out_tab, _ = run(capsys, "analyze", "-n", "2", "-a", "1", "-b", "1")
    assert code == code2 == 0
    assert doc["jordan_holder"]["residual_weight"] == ["1", "1"]
    assert "residual weight ('1', '1')" in out_tab
    for row in doc["q_table"]:
        assert f"q = {row['q']}" in out_tab


def test_analyze_smallest_case(capsys):
    code, out, _ = run(capsys, "analyze", "-n", "1", "-a", "", "-b", "0")
    assert code == 0
    assert "dim V = 1" in out and "verdict: reducible" in out


def test_analyze_rank3_rational_scalar(capsys):
    code, out, _ = run(capsys, "analyze", "-n", "3", "-a", "2,0", "-b", "1/2", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["highest_weight"] == ["3/2", "-1/2", "-1/2"]
    assert doc["criterion"]["verdict"] == "reducible"
    assert doc["criterion"]["failing_pairs"] == [[2, 2]]
    assert doc["jordan_holder"]["k"] == 1
    assert doc["jordan_holder"]["residual_index"] == 2
    assert doc["jordan_holder"]["corollary_consistent"] is True


def test_decompose_table(capsys):
    code, out, _ = run(capsys, "decompose", "-n", "2", "-a", "1", "-b", "1", "-k", "1")
    assert code == 0
    assert "dim 3  q = 2  projector rank 3" in out
    assert "dim 1  q = 0  projector rank 1" in out


def test_decompose_k0(capsys):
    code, out, _ = run(capsys, "decompose", "-n", "2", "-a", "1", "-b", "1", "-k", "0", "--json")
    doc = json.loads(out)
    assert code == 0
    assert len(doc["summands"]) == 1 and doc["summands"][0]["q"] == "1"


def test_decompose_equal_entries_single_row(capsys):
    code, out, _ = run(capsys, "decompose", "-n", "3", "-a", "0,0", "-b", "0", "-k", "2", "--json")
    doc = json.loads(out)
    assert code == 0
    assert [row["c"] for row in doc["summands"]] == [[2, 0, 0]]


def test_verify_identity(capsys):
    code, out, _ = run(capsys, "verify-identity", "-n", "2", "-a", "1", "-b", "1", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["sigma2"]["residual_zero"] is True
    assert doc["sigma2"]["roots"] == ["2", "0"]
    assert doc["sigma2"]["multiplicities"] == [3, 1]
    assert doc["adjoint"]["residual_zero"] and doc["adjoint_dual"]["residual_zero"]


def test_selfcheck_passes(capsys):
    code, out, _ = run(capsys, "selfcheck", "--n-max", "1")
    assert code == 0
    assert "checks passed" in out


def test_selfcheck_seed_does_not_change_verdicts(capsys):
    _, out1, _ = run(capsys, "selfcheck", "--n-max", "1", "--seed", "1", "--json")
    _, out2, _ = run(capsys, "selfcheck", "--n-max", "1", "--seed", "99", "--json")
    doc1, doc2 = json.loads(out1), json.loads(out2)
    assert doc1["by_check"] == doc2["by_check"]
    assert doc1["failures"] == doc2["failures"] == []


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "-n", "2", "-b", "0", "--bogus"])
    assert exc.value.code == 1


def test_bad_labels_exit_code(capsys):
    code, _, err = run(capsys, "analyze", "-n", "2", "-a", "zzz", "-b", "0")
    assert code == 1 and "error" in err


def test_label_arity_checked(capsys):
    code, _, err = run(capsys, "analyze", "-n", "3", "-a", "1", "-b", "0")
    assert code == 1 and "expects 2" in err


def test_dim_cap_exit_code(capsys):
    code, _, err = run(capsys, "analyze", "-n", "3", "-a", "9,9", "-b", "0", "--dim-cap", "50")
    assert code == 1 and "cap" in err


def test_verify_identity_failure_exits_2(capsys, monkeypatch):
    import projrep.cli as cli

    def wrong_roots(mu):
        from projrep.charident import predicted_sigma2_roots as real

        roots = real(mu)
        roots[0] += 1
        return roots

    monkeypatch.setattr(cli, "predicted_sigma2_roots", wrong_roots)
    code, out, err = run(capsys, "verify-identity", "-n", "2", "-a", "1", "-b", "1")
    assert code == 2
    assert "FAILED" in err


def test_consistency_violation_exit_code(capsys, monkeypatch):
    import projrep.cli as cli

    def boom(V, degree_cap=None):
        raise ConsistencyViolationError("synthetic defect")

    monkeypatch.setattr(cli, "jordan_holder", boom)
    code, _, err = run(capsys, "analyze", "-n", "2", "-a", "0", "-b", "0")
    assert code == 2 and "consistency violation" in err
