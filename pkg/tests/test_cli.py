from src.Biboundary import Biboundary
from src.ClosureContext import ClosureContext
from src.Derivation import Certificate, Derivation
from src.FabricationRules import SHUFFLE
from src.Formula import parse
from src.cli import (
    EXIT_BUDGET,
    EXIT_OK,
    EXIT_REJECTED,
    EXIT_USAGE,
    CliConfig,
    build_parser,
    parse_shapes,
    run,
)
import sys
from pathlib import Path
import argparse
import json
import tempfile
import pytest

# Add src directory to Python path
sys.path.insert(0, str(Path(__file__).parent.parent))


def test_decide_prints_answer(capsys):
    """Test the decide command on a satisfiable formula and a validity."""
    assert run(["decide", "p", "--query", "sat"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "SAT"
    assert run(["decide", "F F p -> F p"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "VALID"
    assert run(["decide", "F p -> p", "--frame", "hs"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "NOT-VALID"


def test_reflexive_frame(capsys):
    """Test that the reflexive frame name turns on the reflexive rewrite."""
    assert run(["decide", "p -> F p", "--frame", "mink-reflexive"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "VALID"


def test_usage_errors(capsys):
    """Test that bad command lines and formulas exit with status 2."""
    assert run([]) == EXIT_USAGE
    assert run(["decide", "p", "--frame", "lattice"]) == EXIT_USAGE
    assert run(["decide", "p &"]) == EXIT_USAGE
    assert "parse error" in capsys.readouterr().err
    assert run(["--help"]) == EXIT_OK


def test_budget_exit(capsys):
    """Test that an exhausted step budget prints BUDGET and exits with status 3."""
    assert run(["decide", "p", "--query", "sat", "--max-steps", "0"]) == EXIT_BUDGET
    assert capsys.readouterr().out.strip() == "BUDGET"


def test_kt_expansion_budget_exit(capsys):
    """Test that the tableau-expansion budget is settable and exhausts to BUDGET."""
    args = build_parser().parse_args(["decide", "p", "--max-kt-expansions", "5"])
    assert CliConfig.from_args(args).budget().limits["kt_expansions"] == 5
    assert run(["decide", "p", "--query", "sat", "--max-kt-expansions", "0"]) == EXIT_BUDGET
    assert capsys.readouterr().out.strip() == "BUDGET"


def test_witness_and_report_files(capsys):
    """Test writing a witness and a report, then checking the witness."""
    with tempfile.TemporaryDirectory() as temp_dir:
        witness_file = Path(temp_dir) / "witness.json"
        report_file = Path(temp_dir) / "report.txt"
        code = run([
            "decide", "F p -> p", "--witness", str(witness_file), "--report", str(report_file),
        ])
        assert code == EXIT_OK
        assert witness_file.exists()
        assert "Verdict: NOT-VALID" in report_file.read_text()
        capsys.readouterr()

        assert run(["check-cert", str(witness_file)]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "ACCEPTED"

        data = json.loads(witness_file.read_text())
        data["center"] = 1
        witness_file.write_text(json.dumps(data))
        assert run(["check-cert", str(witness_file)]) == EXIT_REJECTED
        assert "does not contain" in capsys.readouterr().out


def test_no_witness_for_validity(capsys):
    """Test that a VALID verdict writes no witness file."""
    with tempfile.TemporaryDirectory() as temp_dir:
        witness_file = Path(temp_dir) / "witness.json"
        assert run(["decide", "F true", "--witness", str(witness_file)]) == EXIT_OK
        assert not witness_file.exists()


def test_check_plain_certificate(capsys):
    """Test checking a certificate without witness fields."""
    context = ClosureContext(parse("F p"))
    certificate = Certificate(
        parse("F p"), "mink", False, {"piece": Derivation(SHUFFLE, Biboundary(0, 1), (), (2,))}, context
    )
    with tempfile.TemporaryDirectory() as temp_dir:
        path = Path(temp_dir) / "cert.json"
        path.write_text(certificate.dumps())
        assert run(["check-cert", str(path)]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "ACCEPTED"

        path.write_text("not json")
        assert run(["check-cert", str(path)]) == EXIT_REJECTED
        assert "REJECTED: malformed certificate" in capsys.readouterr().out

        assert run(["check-cert", str(Path(temp_dir) / "missing.json")]) == EXIT_USAGE


def test_mcs_dump(capsys):
    """Test the MCS table of F p."""
    assert run(["mcs", "F p"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "# mcs: 4" in out
    assert "m2: 0 3 irreflexive" in out
    assert "c0: [0,1] below [1]" in out


def test_fabricate(capsys):
    """Test saturation of a one-shape universe and its budget exit."""
    assert run(["fabricate", "p", "--shapes", "none"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("ground\t")
    assert "# rounds: 1" in lines

    code = run(["fabricate", "F p", "--shapes", "none,N,S", "--max-trace-length", "1", "--max-rounds", "0"])
    assert code == EXIT_BUDGET


def test_fabricate_with_empty_shape_first(capsys):
    """Test that a shape list opening with the empty shape reaches saturation instead of a usage error."""
    args = ["fabricate", "F p", "--shapes", "none,N,S,E,W", "--max-trace-length", "1"]
    assert run(args) == EXIT_OK
    named = capsys.readouterr().out
    assert "# rounds:" in named

    assert run(["fabricate", "F p", "--shapes=-,N,S,E,W", "--max-trace-length", "1"]) == EXIT_OK
    assert capsys.readouterr().out == named


def test_parse_shapes():
    """Test the edge-set list syntax."""
    assert parse_shapes("-,N,NS") == [frozenset(), frozenset("N"), frozenset("NS")]
    assert parse_shapes("none,N,NS") == [frozenset(), frozenset("N"), frozenset("NS")]
    assert parse_shapes(" E , W ") == [frozenset("E"), frozenset("W")]
    with pytest.raises(argparse.ArgumentTypeError):
        parse_shapes("NX")


def test_parser_defaults():
    """Test the defaults of the decide subcommand."""
    args = build_parser().parse_args(["decide", "p"])
    config = CliConfig.from_args(args)
    assert config.frame == "mink"
    assert config.query == "valid"
    assert config.engine == "top-down"
    assert config.witness_path is None
    assert not config.reflexive


def test_cli_config():
    """Test frame splitting, budgets and validation of CliConfig."""
    config = CliConfig(frame="hs-reflexive", query="sat", max_steps=10)
    assert config.base_frame == "hs"
    assert config.reflexive
    assert config.budget().limits["fabrication_steps"] == 10
    assert repr(config) == "CliConfig(frame='hs-reflexive', query='sat', engine='top-down')"
    assert "Frame: hs-reflexive" in str(config)
    with pytest.raises(ValueError):
        CliConfig(frame="lattice")
    with pytest.raises(ValueError):
        CliConfig(query="maybe")
