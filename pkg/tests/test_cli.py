import io
import json

import pytest

from conftest import FIXTURES
from signdet import cli


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def fx(name):
    return FIXTURES / name


class TestDetsign:
    def test_ex_c(self, capsys):
        code, out, _ = run(capsys, "detsign", fx("exC.csv"))
        assert code == 0
        assert json.loads(out) == {"t": 3, "m_plus": 1, "m_minus": 2, "m": 1, "class": "General", "partial": False}

    def test_ex_b(self, capsys):
        rep = json.loads(run(capsys, "detsign", fx("exB.csv"))[1])
        assert (rep["t"], rep["m"], rep["class"]) == (1, 0, "SNS")

    def test_json_input(self, capsys):
        a = run(capsys, "detsign", fx("exC.csv"))[1]
        b = run(capsys, "detsign", fx("exC.json"))[1]
        assert a == b

    def test_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("1,-1\n1,1\n"))
        code, out, _ = run(capsys, "detsign", "-")
        assert code == 0 and json.loads(out)["class"] == "SNS"

    def test_empty_is_input_error(self, capsys):
        code, out, err = run(capsys, "detsign", fx("empty.csv"))
        assert code == 1 and out == "" and "signdet:" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "detsign", tmp_path / "nope.csv")[0] == 1

    def test_not_square(self, capsys):
        assert run(capsys, "detsign", fx("table11v.csv"))[0] == 2

    def test_oracle_agrees(self, capsys):
        code, out, err = run(capsys, "detsign", fx("exG3.csv"), "--oracle")
        assert code == 0 and err == ""
        assert out == run(capsys, "detsign", fx("exG3.csv"))[1]

    def test_oracle_mismatch(self, capsys, monkeypatch):
        from signdet.matrix_core import SignCounts

        monkeypatch.setattr(cli, "sign_counts", lambda poly: SignCounts(9, 9, 0, 0))
        code, out, err = run(capsys, "detsign", fx("exC.csv"), "--oracle")
        assert code == 3 and "mismatch" in err
        assert json.loads(out)["t"] == 3

    def test_limit_flag_and_env(self, capsys, monkeypatch):
        rep = json.loads(run(capsys, "detsign", fx("exG3.csv"), "--limit", "2")[1])
        assert rep["partial"] is True
        monkeypatch.setenv("SIGNDET_LIMIT", "2")
        assert json.loads(run(capsys, "detsign", fx("exG3.csv"))[1])["partial"] is True
        assert json.loads(run(capsys, "detsign", fx("exG3.csv"), "--limit", "1000")[1])["partial"] is False

    def test_bad_env(self, capsys, monkeypatch):
        monkeypatch.setenv("SIGNDET_LIMIT", "lots")
        assert run(capsys, "detsign", fx("exC.csv"))[0] == 1

    def test_pretty(self, capsys):
        out = run(capsys, "detsign", fx("exC.csv"), "--pretty")[1]
        assert out.startswith("{\n  ")
        assert json.loads(out)["m"] == 1


class TestJacobian:
    def test_reversible(self, capsys):
        rep = json.loads(run(capsys, "jacobian", fx("rev2x2.csv"))[1])
        assert rep["jacobian_has_sign_pattern"] is True
        assert rep["su_sign_pattern"] == [[-1, -1], [-1, -1]]

    def test_two_cycle(self, capsys):
        rep = json.loads(run(capsys, "jacobian", fx("twocycleB.csv"))[1])
        assert rep["jacobian_has_sign_pattern"] is False
        assert rep["witness"]["four_cycle"] == "C1-R1-C2-R2-C1"

    def test_negative_identity(self, capsys):
        rep = json.loads(run(capsys, "jacobian", fx("neg_identity.csv"))[1])
        assert rep["su_sign_pattern"] == [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]
        assert rep["reaction_form"] == "RF"


class TestCoredet:
    def test_tail_cfd(self, capsys):
        code, out, _ = run(capsys, "coredet", fx("tail3.csv"), "--cfd")
        rep = json.loads(out)
        assert code == 0
        assert rep["counts"]["m"] == 1 and rep["cfd"]["counts"]["m"] == 2

    def test_zero_one(self, capsys):
        rep = json.loads(run(capsys, "coredet", fx("param_a1.csv"), "--zero-one")[1])
        assert rep["zero_one_verdict"]["verdict"] == "One"

    def test_inapplicable_exit_zero(self, capsys, tmp_path):
        src = tmp_path / "flat.csv"
        src.write_text("1,1,-1,-1\n1,1,-1,-1\n")
        code, out, _ = run(capsys, "coredet", src, "--zero-one")
        v = json.loads(out)["zero_one_verdict"]
        assert code == 0 and v["verdict"] == "Inapplicable" and v["reason"]

    def test_cf3(self, capsys):
        rep = json.loads(run(capsys, "coredet", fx("cf3_a11_2.csv"))[1])
        assert rep["counts"] == {"t": 5, "m_plus": 1, "m_minus": 4, "m": 1}
        assert all(isinstance(m["coeff"], str) for m in rep["cd_poly"])

    def test_bounds(self, capsys):
        rep = json.loads(run(capsys, "coredet", fx("eight_by_four.csv"), "--bounds")[1])
        assert (rep["bounds"]["lower"], rep["bounds"]["upper"]) == (9, 9)

    def test_oracle(self, capsys):
        code, out, err = run(capsys, "coredet", fx("tail4.csv"), "--cfd", "--oracle")
        assert code == 0 and err == ""
        assert out == run(capsys, "coredet", fx("tail4.csv"), "--cfd")[1]

    def test_oracle_mismatch(self, capsys, monkeypatch):
        from signdet.symexpand import MultilinearPoly

        monkeypatch.setattr(cli, "core_determinant_oracle", lambda S: MultilinearPoly.constant(7))
        assert run(capsys, "coredet", fx("tail3.csv"), "--oracle")[0] == 3


class TestGraph:
    def test_table_summary(self, capsys, tmp_path):
        dest = tmp_path / "g.dot"
        code, out, _ = run(capsys, "graph", fx("table11v.csv"), "--dot", dest)
        rep = json.loads(out)
        assert code == 0
        assert (rep["edges"], rep["negative"], rep["positive"]) == (12, 8, 4)
        text = dest.read_text()
        assert text.count("style=dashed") == 4 and text.count("style=solid") == 8

    def test_zero_matrix_nodes_only(self, capsys):
        out = run(capsys, "graph", fx("zero.csv"))[1]
        assert "--" not in out and out.count("shape=") == 5

    def test_unwritable(self, capsys, tmp_path):
        assert run(capsys, "graph", fx("exC.csv"), "--dot", tmp_path / "no" / "g.dot")[0] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ("detsign", "exG3.csv"),
        ("jacobian", "cf3_a11_2.csv"),
        ("coredet", "eight_by_four.csv", "--cfd", "--bounds", "--zero-one"),
        ("graph", "exG3.csv"),
    ],
)
def test_deterministic(capsys, argv):
    args = [argv[0], fx(argv[1]), *argv[2:]]
    assert run(capsys, *args)[1] == run(capsys, *args)[1]
