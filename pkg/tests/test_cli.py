import argparse
import io
import json

import jsonschema
import pytest

from ramsey_moments.cli import EXIT_DOMAIN, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, build_parser, main


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def validate(schema_dir, name, text):
    data = json.loads(text)
    schema = json.loads((schema_dir / f"{name}.schema.json").read_text())
    jsonschema.validate(data, schema)
    assert json.loads(json.dumps(data)) == data
    return data


def test_moments_value():
    code, out, err = run_cli("moments", "--k", "3", "--r", "2", "--eval-n", "6")
    assert code == EXIT_OK and out.strip() == "115/4" and err == ""


def test_oracle_cap():
    code, out, err = run_cli("oracle", "--n", "9", "--k", "3")
    assert code == EXIT_RESOURCE and "2^36" in err and out == ""


def test_usage_errors():
    assert run_cli("moments", "--k", "3")[0] == EXIT_USAGE
    assert run_cli("moments", "--k", "3", "--r", "2", "--bogus")[0] == EXIT_USAGE
    assert run_cli("--precision", "32", "verify")[0] == EXIT_USAGE
    assert run_cli("verify", "--only", "nope")[0] == EXIT_USAGE
    assert run_cli("--output", "csv", "fit", "--k", "4", "--n", "100", "--regime", "big")[0] == EXIT_USAGE


def test_domain_errors():
    assert run_cli("fit", "--k", "4", "--n", "10", "--regime", "big")[0] == EXIT_DOMAIN
    assert run_cli("dist", "mgf", "delaporte", "--lambda", "1", "--alpha", "1", "--beta", "1",
                   "--t", "1")[0] == EXIT_DOMAIN


@pytest.mark.parametrize("name,argv", [
    ("moments", ["moments", "--k", "4", "--r", "3", "--eval-n", "10", "--json"]),
    ("moments", ["moments", "--k", "3", "--r", "2", "--kind", "binomial", "--json"]),
    ("central", ["central", "--k", "4", "--m", "3", "--eval-n", "100", "--standardized", "--json"]),
    ("oracle", ["oracle", "--n", "5", "--k", "3", "--json"]),
    ("dist", ["dist", "pmf", "delaporte", "--lambda", "1", "--alpha", "2", "--beta", "0.5", "--json"]),
    ("dist", ["dist", "mgf", "poisson", "--lambda", "2", "--t", "0.3", "--json"]),
    ("dist", ["dist", "moments", "negbin", "--alpha", "2", "--beta", "0.5", "--json"]),
    ("fit", ["fit", "--k", "4", "--n", "200", "--regime", "big", "--json"]),
    ("fit", ["fit", "--k", "4", "--n", "20", "--regime", "small", "--json"]),
    ("bounds", ["bounds", "--k", "5", "--m", "1,3", "--chebyshev", "--n", "20", "--json"]),
    ("simulate", ["simulate", "--n", "6", "--k", "3", "--samples", "20000", "--seed", "4",
                  "--fit", "delaporte,poisson,normal", "--json"]),
    ("verify", ["verify", "--only", "poisson,second-moment", "--json"]),
])
def test_json_schemas(schema_dir, name, argv):
    code, out, err = run_cli(*argv)
    assert code == EXIT_OK, err
    validate(schema_dir, name, out)


def test_values_in_json(schema_dir):
    data = validate(schema_dir, "fit", run_cli("fit", "--k", "3", "--n", "6", "--regime", "small",
                                               "--json")[1])
    assert data["lambda_exact"] == {"numerator": "5", "denominator": "1"}
    data = validate(schema_dir, "bounds", run_cli("bounds", "--k", "5", "--json")[1])
    rep = data["reports"][0]
    assert rep["threshold_n"] == 11 and rep["method"] == "FirstMoment"
    assert rep["certificate"][0] == {"n": 11, "numerator": "25", "denominator": "256"}


def test_simulate_csv_and_seed():
    code, out, _ = run_cli("--output", "csv", "simulate", "--n", "6", "--k", "3", "--samples", "500",
                           "--seed", "9")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "value,count"
    assert sum(int(line.split(",")[1]) for line in lines[1:]) == 500
    _, again, _ = run_cli("--seed", "9", "--output", "csv", "simulate", "--n", "6", "--k", "3",
                          "--samples", "500", "--workers", "3")
    assert again == out


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\noutput = json\nseed=9\n")
    code, out, _ = run_cli("--config", str(cfg), "simulate", "--n", "6", "--k", "3", "--samples", "50")
    assert code == EXIT_OK and json.loads(out)["report"]["seed"] == "9"
    # flags override the file
    code, out, _ = run_cli("--config", str(cfg), "--output", "pretty", "moments", "--k", "3", "--r", "1",
                           "--eval-n", "6")
    assert out.strip() == "5"
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour=red\n")
    assert run_cli("--config", str(bad), "verify")[0] == EXIT_USAGE


def test_verify_filter():
    code, out, _ = run_cli("verify", "--only", "leading-terms")
    assert code == EXIT_OK
    assert out.startswith("PASS") and "leading-terms" in out and len(out.strip().splitlines()) == 1


def _subparsers(parser):
    for act in parser._actions:
        if isinstance(act, argparse._SubParsersAction):
            return act.choices
    return {}


def test_help_documents_every_flag():
    parser = build_parser()
    parsers = {"": parser, **_subparsers(parser)}
    assert set(parsers) - {""} == {"moments", "central", "oracle", "dist", "fit", "bounds",
                                   "simulate", "verify"}
    for name, p in parsers.items():
        text = p.format_help()
        for act in p._actions:
            if isinstance(act, argparse._SubParsersAction):
                continue
            assert act.help, f"{name}: {act.option_strings or act.dest} lacks help"
            for opt in act.option_strings:
                assert opt in text, f"{name}: {opt} missing from --help"


def test_help_exits_zero():
    assert run_cli("--help")[0] == EXIT_OK
    assert run_cli("simulate", "--help")[0] == EXIT_OK
