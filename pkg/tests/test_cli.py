import json
import subprocess
import sys

import jsonschema
import pytest

from substochastic.cli import main

RUN = [sys.executable, "-m", "substochastic.cli"]


def run_cli(args, stdin_text=None):
    proc = subprocess.run(
        RUN + args, capture_output=True, text=True, input=stdin_text, timeout=300
    )
    return proc


@pytest.fixture(scope="module")
def star_json(tmp_path_factory):
    path = tmp_path_factory.mktemp("digraphs") / "star.json"
    proc = run_cli(
        ["construct", "example2",
         "--params", '{"a": {"kind": "list", "values": ["3/5", "4/5"]}}',
         "--emit-truncation", "3", "--out", str(path)]
    )
    assert proc.returncode == 0
    return str(path)


DIGRAPH_SCHEMA = {
    "type": "object",
    "required": ["order", "arcs"],
    "properties": {
        "order": {"type": "integer", "minimum": 0},
        "arcs": {
            "type": "array",
            "items": {
                "type": "array",
                "minItems": 3,
                "maxItems": 3,
                "prefixItems": [
                    {"type": "integer", "minimum": 1},
                    {"type": "integer", "minimum": 1},
                    {"type": "string"},
                ],
            },
        },
    },
}

CYCLES_SCHEMA = {
    "type": "object",
    "required": ["cycles", "truncated"],
    "properties": {
        "truncated": {"type": "boolean"},
        "cycles": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["vertices", "length", "weight", "gain"],
                "properties": {
                    "vertices": {"type": "array", "items": {"type": "integer"}},
                    "length": {"type": "integer"},
                    "weight": {"type": "string"},
                    "gain": {
                        "type": "object",
                        "required": ["value", "weight", "length"],
                    },
                },
            },
        },
    },
}

VERDICT_SCHEMA = {
    "type": "object",
    "required": ["family", "verdict", "confidence", "evidence", "notes"],
    "properties": {
        "verdict": {"enum": ["transient", "recurrent", "unknown"]},
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["name", "instances_tested", "violations", "min_margin", "ok"],
    "properties": {
        "instances_tested": {"type": "integer"},
        "violations": {"type": "array"},
        "ok": {"type": "boolean"},
    },
}


ALL_SUBCOMMANDS = [
    ["cycles", "enumerate"],
    ["cycles", "fvs"],
    ["cycles", "omega"],
    ["spectral", "perron"],
    ["spectral", "charpoly"],
    ["spectral", "ladder"],
    ["classify"],
    ["construct"],
    ["verify"],
    ["sweep"],
    ["fit"],
]


@pytest.mark.parametrize("cmd", ALL_SUBCOMMANDS, ids=lambda c: "-".join(c))
def test_help_contract(cmd):
    proc = run_cli(cmd + ["--help"])
    assert proc.returncode == 0
    assert "usage" in proc.stdout.lower()


class TestCyclesCommands:
    def test_enumerate_schema(self, star_json):
        proc = run_cli(["cycles", "enumerate", "--digraph", star_json, "--max-len", "2"])
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        jsonschema.validate(payload, CYCLES_SCHEMA)
        assert len(payload["cycles"]) == 2
        assert payload["cycles"][0]["vertices"][0] == 1  # 1-based ids

    def test_fvs(self, star_json):
        proc = run_cli(["cycles", "fvs", "--digraph", star_json])
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload == {"vertices": [1], "size": 1, "optimality": "exact"}

    def test_omega_on_family(self):
        proc = run_cli(["cycles", "omega", "--family", "example1", "--n", "5"])
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload["omega"]["value"] == pytest.approx(0.5)


class TestSpectralCommands:
    def test_perron(self, star_json):
        proc = run_cli(["spectral", "perron", "--digraph", star_json])
        payload = json.loads(proc.stdout)
        assert payload["perron_root"] == pytest.approx(1.0, rel=1e-9)

    @pytest.mark.parametrize("method", ["coates", "elimination"])
    def test_charpoly_methods_agree(self, star_json, method):
        proc = run_cli(["spectral", "charpoly", "--digraph", star_json, "--method", method])
        payload = json.loads(proc.stdout)
        assert payload["coefficients"] == ["1", "0", "-1"]
        assert payload["nonzero_eig_count"] == 2

    def test_ladder_csv(self):
        proc = run_cli(["spectral", "ladder", "--family", "example2", "--n-list", "2,4,8"])
        lines = proc.stdout.strip().splitlines()
        assert lines[0] == "n,lambda_n,gap_to_limit"
        assert len(lines) == 4


class TestClassifyCommand:
    def test_certified_recurrent_exit_zero(self):
        proc = run_cli(["classify", "--family", "example2", "--n-max", "20", "--p-max", "100"])
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        jsonschema.validate(payload, VERDICT_SCHEMA)
        assert payload["verdict"] == "recurrent"
        assert payload["confidence"] == "certified"

    def test_numerical_verdict_exit_two(self):
        params = '{"f": {"kind": "geometric", "ratio": "1/2"}}'
        proc = run_cli(
            ["classify", "--family", "example1", "--params", params,
             "--n-max", "40", "--p-max", "2000"]
        )
        payload = json.loads(proc.stdout)
        jsonschema.validate(payload, VERDICT_SCHEMA)
        assert proc.returncode in (2, 3)
        if proc.returncode == 2:
            assert payload["confidence"] == "numerical"


class TestConstructCommand:
    def test_emits_digraph_schema(self, star_json):
        with open(star_json) as fh:
            payload = json.load(fh)
        jsonschema.validate(payload, DIGRAPH_SCHEMA)
        assert payload["order"] == 3

    @pytest.mark.parametrize(
        "family,params",
        [
            ("prop1", '{"lengths": {"kind": "linear"}, "targets": {"kind": "constant", "value": "1/2"}}'),
            ("prop2", "{}"),
            ("corollary1", "{}"),
            ("theorem2-fast", "{}"),
            ("example1", "{}"),
        ],
    )
    def test_all_builders_emit(self, family, params):
        proc = run_cli(["construct", family, "--params", params, "--emit-truncation", "8"])
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        jsonschema.validate(payload, DIGRAPH_SCHEMA)
        assert payload["order"] == 8


class TestVerifyCommand:
    def test_report_schema_and_exit_zero(self):
        proc = run_cli(["verify", "zeta", "--count", "4", "--seed", "3", "--order-max", "5"])
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        jsonschema.validate(payload, REPORT_SCHEMA)
        assert payload["ok"] is True

    def test_conjecture_findings_do_not_fail(self):
        proc = run_cli(
            ["verify", "conjecture", "--count", "12", "--seed", "7", "--order-max", "7"]
        )
        assert proc.returncode == 0
        payload = json.loads(proc.stdout)
        assert payload["ok"] is True


class TestSweepAndFit:
    def test_sweep_csv_deterministic(self):
        args = ["sweep", "--family", "example2", "--n-grid", "5,10,20", "--no-fvs"]
        a = run_cli(args)
        b = run_cli(args)
        assert a.returncode == 0
        assert a.stdout == b.stdout
        assert a.stdout.startswith("# substochastic-sweep-v1")

    def test_progress_on_stderr_only(self):
        proc = run_cli(["sweep", "--family", "example2", "--n-grid", "5,10", "--no-fvs"])
        assert "done" in proc.stderr
        assert "done" not in proc.stdout

    def test_fit_pipeline(self, tmp_path):
        sweep = run_cli(["sweep", "--family", "example2", "--n-grid",
                         "50,100,200,400,800", "--no-fvs"])
        fit = run_cli(["fit", "--input", "-", "--y-col", "gap_to_limit"],
                      stdin_text=sweep.stdout)
        assert fit.returncode == 0
        payload = json.loads(fit.stdout)
        assert -0.6 < payload["slope"] < -0.4

    def test_error_exit_code(self):
        proc = run_cli(["fit", "--input", "/nonexistent/file.csv"])
        assert proc.returncode == 1
        assert "error" in proc.stderr.lower()


def test_main_callable_directly(capsys):
    code = main(["spectral", "ladder", "--family", "example2", "--n-list", "2,3"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("n,lambda_n")
