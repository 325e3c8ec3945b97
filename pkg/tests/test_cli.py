import json
import random
from pathlib import Path

import pytest

from maxplus import expand, matrix_power
from maxplus.cli import (
    MatrixFormatError,
    dump_expansion,
    load_expansion,
    matrix_digest,
    parse_matrix,
    parse_value_token,
    run_command,
    serialize_matrix,
)
from maxplus.oracle import random_matrix
from fixtures import demo_matrix

FIXTURES = Path(__file__).parent.parent / "fixtures"
DEMO_DENSE = str(FIXTURES / "demo10-dense.mpx")
DEMO_SPARSE = str(FIXTURES / "demo10-sparse.mpx")
ONE = str(FIXTURES / "one.mpx")


class TestValueTokens:
    def test_epsilon_spellings(self):
        assert parse_value_token(".") is None
        assert parse_value_token("-inf") is None

    def test_integers_and_rationals(self):
        assert parse_value_token("-7") == -7
        assert parse_value_token("3/4") == parse_value_token("6/8")

    @pytest.mark.parametrize("bad", ["1.5", "x", "3/", "/4", "3/-2", "1e3", "inf"])
    def test_bad_tokens_rejected(self, bad):
        with pytest.raises(MatrixFormatError):
            parse_value_token(bad)


class TestMatrixFiles:
    def test_shipped_fixtures_agree(self):
        dense = parse_matrix(Path(DEMO_DENSE).read_text())
        sparse = parse_matrix(Path(DEMO_SPARSE).read_text())
        assert dense == sparse == demo_matrix()

    def test_dense_round_trip(self):
        a = demo_matrix()
        assert parse_matrix(serialize_matrix(a)) == a

    def test_sparse_round_trip(self):
        rng = random.Random(127)
        for _ in range(10):
            a = random_matrix(rng, rng.randint(1, 6), 0.5)
            text = serialize_matrix(a, sparse=True)
            assert parse_matrix(text) == a
            assert serialize_matrix(parse_matrix(text), sparse=True) == text

    def test_canonical_dense_is_stable(self):
        a = demo_matrix()
        once = serialize_matrix(a)
        assert serialize_matrix(parse_matrix(once)) == once

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "2\n1 2\n",  # missing row
            "2\n1 2 3\n4 5\n",  # ragged
            "2 1\n3 1 5\n",  # sparse index out of range
            "2 2\n1 1 5\n1 1 6\n",  # duplicate entry
            "2 1\n1 1 .\n",  # sparse entries must be finite
            "1 2 3\nx\n",  # bad header
        ],
    )
    def test_malformed_rejected(self, text):
        with pytest.raises(MatrixFormatError):
            parse_matrix(text)


class TestExpansionDocument:
    def test_round_trip_evaluates_identically(self):
        a = demo_matrix()
        x = expand(a)
        doc = dump_expansion(x, input_digest=matrix_digest(a))
        loaded = load_expansion(json.loads(json.dumps(doc)))
        rng = random.Random(131)
        for _ in range(10):
            t = rng.randint(x.threshold, x.threshold + 400)
            assert loaded.evaluate(t) == x.evaluate(t)

    def test_reduced_round_trip(self):
        a = demo_matrix()
        x = expand(a, reduce_by_cyclicity=True)
        loaded = load_expansion(dump_expansion(x))
        assert loaded.evaluate(220) == x.evaluate(220)

    def test_bad_documents_rejected(self):
        with pytest.raises(MatrixFormatError):
            load_expansion({"format": "something-else"})
        doc = dump_expansion(expand(demo_matrix()))
        doc["terms"][0]["C"]["rows"] = 4  # inconsistent block dimension
        with pytest.raises(MatrixFormatError):
            load_expansion(doc)

    def test_acyclic_document_loses_the_naive_fallback(self):
        # A loaded empty expansion has no source matrix: every power from
        # the order upward is all-bottom either way, and below the order it
        # answers all-bottom too (documented in docs/expansion-format.md).
        from maxplus import TropicalMatrix

        a = parse_matrix("2\n. 1\n. .\n")
        x = expand(a)
        loaded = load_expansion(dump_expansion(x))
        assert loaded.evaluate(8) == x.evaluate(8) == TropicalMatrix.epsilon(2)
        assert x.evaluate(1) == a
        assert loaded.evaluate(1) == TropicalMatrix.epsilon(2)


class TestCommands:
    def test_roots_output(self, capsys):
        assert run_command(["roots", DEMO_DENSE]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[:7] == [
            "8 (x2)",
            "7 (x1)",
            "6 (x1)",
            "4 (x1)",
            "3 (x3)",
            "0 (x1)",
            "-inf (x1)",
        ]
        assert any("M_6" in line for line in out)

    def test_power_one_by_one(self, capsys):
        assert run_command(["power", ONE, "5"]) == 0
        assert capsys.readouterr().out.splitlines() == ["1", "20"]

    def test_power_naive_and_csr_agree(self, capsys):
        assert run_command(["power", DEMO_SPARSE, "200", "--naive"]) == 0
        naive_out = capsys.readouterr().out
        assert run_command(["power", DEMO_SPARSE, "200", "--csr"]) == 0
        csr_out = capsys.readouterr().out
        assert naive_out == csr_out
        assert parse_matrix(naive_out) == matrix_power(demo_matrix(), 200)

    def test_power_huge_exponent(self, capsys):
        assert run_command(["power", ONE, str(10**30)]) == 0
        assert capsys.readouterr().out.splitlines()[-1] == str(4 * 10**30)

    def test_verify_matches(self, capsys):
        assert run_command(["verify", DEMO_DENSE, "--t-range", "200..210"]) == 0
        assert "OK" in capsys.readouterr().out

    def test_verify_threads_env(self, capsys, monkeypatch):
        monkeypatch.setenv("THREADS", "3")
        assert run_command(["verify", DEMO_DENSE, "--t-range", "200..206"]) == 0

    def test_verify_reports_mismatch(self, capsys, monkeypatch):
        import maxplus.cli as cli

        real_expand = cli.expand

        def corrupted(a, **kwargs):
            from dataclasses import replace

            x = real_expand(a, **kwargs)
            bumped = replace(x.terms[0], rate=x.terms[0].rate + 1)
            return cli.CsrExpansion(n=x.n, terms=(bumped,) + x.terms[1:], threshold=x.threshold)

        monkeypatch.setattr(cli, "expand", corrupted)
        assert run_command(["verify", DEMO_DENSE, "--t-range", "200..203", "--seed", "9"]) == 1
        out = capsys.readouterr().out
        assert "MISMATCH" in out and "t = 200" in out and "seed 9" in out

    def test_expand_json_digest(self, capsys):
        assert run_command(["expand", DEMO_DENSE, "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["n"] == 10 and doc["threshold"] == 200
        assert doc["input_digest"] == matrix_digest(demo_matrix())
        assert len(doc["terms"]) == 3

    def test_expand_human_readable(self, capsys):
        assert run_command(["expand", DEMO_DENSE]) == 0
        out = capsys.readouterr().out
        assert "term 1: rate = 8, circuit = (1,2,1)" in out

    def test_expand_reduce_flag(self, capsys):
        assert run_command(["expand", DEMO_DENSE, "--reduce", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert all(term["reduced"] for term in doc["terms"])

    def test_visualize_output(self, capsys):
        assert run_command(["visualize", DEMO_DENSE]) == 0
        out = capsys.readouterr().out
        assert "group 3: nodes (6,7,8,9,10), rate = 3" in out
        assert "d = (0, -3, -3, -2, -4)" in out

    def test_eigen_output(self, capsys):
        assert run_command(["eigen", DEMO_DENSE]) == 0
        out = capsys.readouterr().out
        assert "eigenvalue = 8" in out
        assert "critical nodes: 1, 2" in out

    def test_eigen_acyclic_is_a_domain_error(self, tmp_path, capsys):
        f = tmp_path / "acyclic.mpx"
        f.write_text("2\n. 1\n. .\n")
        assert run_command(["eigen", str(f)]) == 2
        assert "no finite eigenvalue" in capsys.readouterr().err

    def test_missing_file_exits_2(self, capsys):
        assert run_command(["roots", "/nonexistent/zzz.mpx"]) == 2
        assert "cannot read" in capsys.readouterr().err

    def test_malformed_matrix_exits_2(self, tmp_path, capsys):
        f = tmp_path / "bad.mpx"
        f.write_text("2\n1 2\n")
        assert run_command(["roots", str(f)]) == 2
        assert "bad input" in capsys.readouterr().err

    def test_unknown_flag_exits_2(self, capsys):
        assert run_command(["roots", DEMO_DENSE, "--frobnicate"]) == 2

    def test_bad_t_range_exits_2(self, capsys):
        assert run_command(["verify", DEMO_DENSE, "--t-range", "5"]) == 2

    def test_acyclic_expand_mentions_empty(self, tmp_path, capsys):
        f = tmp_path / "acyclic.mpx"
        f.write_text("2\n. 1\n. .\n")
        assert run_command(["expand", str(f)]) == 0
        assert "acyclic" in capsys.readouterr().out


def test_console_entry_point_runs():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "maxplus", "roots", DEMO_DENSE],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("8 (x2)")
