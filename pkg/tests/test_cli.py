import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from itertime.cli import cli

FIXTURES = Path(__file__).parent / "fixtures"
YEAR = ["--from", "2005-01-01", "--to", "2006-01-01"]


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def fixture(name):
    return str(FIXTURES / name)


def test_eval_prints_the_witness(runner):
    result = runner.invoke(cli, ["eval", "tous les lundis de mars", *YEAR])
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert data["kind"] == "concrete"
    assert data["series"][0] == ["2005-03-07T00:00", "2005-03-08T00:00"]
    assert len(data["series"]) == 4


def test_eval_family(runner):
    result = runner.invoke(cli, ["eval", "un lundi", "--from", "2005-03-01", "--to", "2005-04-01", "--family"])
    assert result.exit_code == 0, result.stderr
    assert json.loads(result.stdout)["family"]["constraint"] == {"kind": "card", "k": 1}


def test_eval_parse_error_goes_to_stderr(runner):
    result = runner.invoke(cli, ["eval", "tous les", *YEAR])
    assert result.exit_code == 1
    error = json.loads(result.stderr.strip().splitlines()[-1])
    assert error["status"] == "error"
    assert error["error_type"] == "ParseError"


def test_bad_frame_is_a_usage_error(runner):
    result = runner.invoke(cli, ["eval", "tous les lundis", "--from", "hier", "--to", "2006-01-01"])
    assert result.exit_code == 2


def test_missing_argument_is_a_usage_error(runner):
    assert runner.invoke(cli, ["eval", *YEAR]).exit_code == 2


def test_check(runner):
    result = runner.invoke(cli, ["check", "tous les lundis", "tous les lundis de mars", *YEAR])
    assert result.exit_code == 0, result.stderr
    assert "✅ extracted-either-way" in result.stdout
    as_json = runner.invoke(cli, ["check", "les lundis", "les mardis", *YEAR, "--json"])
    assert "point-disjoint" in json.loads(as_json.stdout)["flags"]


def test_network_solve(runner):
    result = runner.invoke(cli, ["network", "solve", fixture("luc.net"), "--json", "--scenario"])
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert data["verdict"] == "consistent"
    assert "reveil {p} depart" in data["network"]
    assert "reveil {p} depart" in data["scenario"]


def test_network_solve_chronogram(runner):
    result = runner.invoke(cli, ["network", "solve", fixture("luc.net"), "--chronogram"])
    assert result.exit_code == 0, result.stderr
    assert result.stdout.startswith("✅ consistent")
    assert "📋 chronogram" in result.stdout


def test_inconsistent_network_exits_with_an_error_object(runner):
    result = runner.invoke(cli, ["network", "solve", fixture("cycle3.net")])
    assert result.exit_code == 1
    assert "❌ inconsistent" in result.stdout
    error = json.loads(result.stderr.strip().splitlines()[-1])
    assert error["error_type"] == "InconsistentNetwork"


def test_sdt(runner, tmp_path):
    out = tmp_path / "clause.net"
    result = runner.invoke(cli, ["sdt", fixture("clause_19.json"), "--network", str(out), "--reading", "encore"])
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert data["diagnosis"] == "resolved_iteration"
    assert data["aspect_series"] == "inaccompli"
    assert data["reading"] == "ambiguous"
    assert "proces" in out.read_text(encoding="utf-8")


def test_sdt_rejects_an_invalid_record(runner, tmp_path):
    record = tmp_path / "clause.json"
    record.write_text('{"vendler": "etat", "tense": "conditionnel"}', encoding="utf-8")
    assert runner.invoke(cli, ["sdt", str(record)]).exit_code == 2


def test_instantiate(runner):
    result = runner.invoke(
        cli, ["instantiate", fixture("iteration_sundays.json"), "--from", "2005-03-01", "--to", "2005-04-01"]
    )
    assert result.exit_code == 0, result.stderr
    iteres = json.loads(result.stdout)
    assert [itere["index"] for itere in iteres] == [1, 2, 3, 4]
    assert iteres[3]["anchor"] == ["2005-03-27T00:00", "2005-03-28T00:00"]


def test_extract_json_lines(runner):
    result = runner.invoke(cli, ["extract", fixture("levy.txt"), "--json"])
    assert result.exit_code == 0, result.stderr
    lines = [json.loads(line) for line in result.stdout.splitlines()]
    assert [line["pattern"] for line in lines] == ["TOUS_LES", "FOIS_PAR", "N_SUR_N", "TOUS_LES_N"]
    assert lines[3]["cti"] == "tous les 5 ans"


def test_extract_human_output(runner):
    result = runner.invoke(cli, ["extract", fixture("levy.txt"), "--pattern", "FOIS_PAR", "--jobs", "2"])
    assert result.exit_code == 0, result.stderr
    assert "'une fois par mois'" in result.stdout
    assert result.stdout.rstrip().endswith("✅ 1 match(es)")


def test_classify(runner):
    result = runner.invoke(cli, ["classify", "le mois prochain", "--json"])
    assert json.loads(result.stdout) == {
        "phrase": "le mois prochain", "category": "site-convexe", "subcategory": "relatif-deictique",
    }
    assert runner.invoke(cli, ["classify", "peu à peu"]).stdout.strip() == "✅ descripteur-de-temporalite-interne"
    assert runner.invoke(cli, ["classify", "la pluie sur la ville"]).exit_code == 1


def test_relation(runner):
    result = runner.invoke(cli, ["relation", "{p,m}", "{p,m}"])
    assert result.exit_code == 0, result.stderr
    assert result.stdout.strip() == "{p}"
