import csv
import io
import json
import math
import random

import pytest

UNIFORM = {"law": {"family": "exponential", "params": {"theta": 1}}, "beta": 1}
BIMODAL = {"law": {"family": "discrete", "params": {"lambdas": [0.1, 2], "probs": [0.25, 0.75]}}, "beta": 2}


def m(doc):
    return json.dumps(doc)


def rows(text):
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def kies_cdf(lam, beta, t):
    return -math.expm1(-lam * (t / (1 - t)) ** beta)


# eval

def test_eval_uniform_pdf_is_one(kies):
    out = kies("eval", "--model", m(UNIFORM), "--which", "pdf", "--grid", 9).stdout
    r = rows(out)
    assert len(r) == 9
    for k, row in enumerate(r, start=1):
        assert float(row["t"]) == pytest.approx(k / 10, abs=1e-15)
        assert float(row["pdf"]) == pytest.approx(1.0, abs=1e-12)


def test_eval_gamma_header_records_left_endpoint(kies):
    model = {"law": {"family": "gamma", "params": {"alpha": 2, "theta": 1}}, "beta": 1}
    out = kies("eval", "--model", m(model)).stdout
    assert "# left_endpoint=2\n" in out
    assert len(rows(out)) == 99


def test_eval_degenerate_cdf_matches_closed_form(kies):
    model = {"law": {"family": "degenerate", "params": {"lambda": 1}}, "beta": 2}
    for row in rows(kies("eval", "--model", m(model), "--which", "cdf", "--grid", 3).stdout):
        t = float(row["t"])
        assert float(row["cdf"]) == pytest.approx(kies_cdf(1, 2, t), rel=1e-14)


def test_eval_model_from_file_and_output_file(kies, tmp_path):
    path = tmp_path / "model.json"
    path.write_text(m(BIMODAL))
    out = tmp_path / "ccdf.csv"
    kies("eval", "--model", path, "--which", "ccdf", "--grid", 5, "--out", out)
    r = rows(out.read_text())
    assert [float(x["ccdf"]) for x in r] == sorted((float(x["ccdf"]) for x in r), reverse=True)


def test_eval_fifteen_significant_digits(kies):
    out = kies("eval", "--model", m(BIMODAL), "--grid", 3).stdout
    for row in rows(out):
        digits = row["pdf"].replace("-", "").replace(".", "").split("e")[0].lstrip("0")
        assert len(digits) <= 15


# exit codes

def test_invalid_json_exits_2(kies):
    assert kies("eval", "--model", "{not json", check=False).returncode == 2


def test_unknown_family_exits_2(kies):
    doc = {"law": {"family": "weibull", "params": {}}, "beta": 1}
    assert kies("eval", "--model", m(doc), check=False).returncode == 2


def test_non_integrable_model_exits_3(kies):
    doc = {"law": {"family": "exponential", "params": {"theta": 1}}, "beta": 0.5}
    assert kies("eval", "--model", m(doc), check=False).returncode == 3
    assert kies("saturation", "--model", m(doc), check=False).returncode == 3


def test_missing_subcommand_exits_2(kies):
    assert kies(check=False).returncode == 2


def test_missing_model_file_exits_2(kies, tmp_path):
    assert kies("eval", "--model", tmp_path / "nope.json", check=False).returncode == 2


# saturation

def test_saturation_bimodal(kies, schema):
    doc = json.loads(kies("saturation", "--model", m(BIMODAL)).stdout)
    schema("saturation.schema.json", doc)
    assert doc["d"] == pytest.approx(0.4440, abs=5e-4)
    assert doc["methods_agree"] is True
    assert doc["tau"] == pytest.approx([0.0638, 1.2755], abs=5e-4)


def test_saturation_exponential(kies, schema):
    model = {"law": {"family": "exponential", "params": {"theta": 5}}, "beta": 2}
    doc = json.loads(kies("saturation", "--model", m(model)).stdout)
    schema("saturation.schema.json", doc)
    assert doc["d"] == pytest.approx(0.6310, abs=5e-4)


def test_saturation_uniform(kies, schema):
    doc = json.loads(kies("saturation", "--model", m(UNIFORM)).stdout)
    schema("saturation.schema.json", doc)
    assert doc["d"] == pytest.approx(0.5, abs=1e-12)
    assert abs(doc["residual"]) <= 1e-12


# sample

def test_sample_deterministic(kies, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    kies("sample", "--model", m(BIMODAL), "--n", 5, "--seed", 7, "--out", a)
    kies("sample", "--model", m(BIMODAL), "--n", 5, "--seed", 7, "--out", b)
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "x" and len(lines) == 6
    assert all(0 < float(v) < 1 for v in lines[1:])


def test_sample_uniform_mean(kies, tmp_path):
    out = tmp_path / "u.csv"
    kies("sample", "--model", m(UNIFORM), "--n", 1000000, "--seed", 3, "--out", out)
    values = [float(v) for v in out.read_text().splitlines()[1:]]
    assert len(values) == 1000000
    assert sum(values) / len(values) == pytest.approx(0.5, abs=0.002)


def test_sample_zero_is_usage_error(kies):
    assert kies("sample", "--model", m(UNIFORM), "--n", 0, check=False).returncode == 2


# shape

@pytest.mark.parametrize(
    "lam,beta,case",
    [(2, 1, "BetaEq1Decreasing"), (1, 1, "BetaEq1Peaked"), (1, 2, "BetaAbove1"), (0.5, 0.5, "BetaBelow1Bimodal")],
)
def test_shape_cases(kies, schema, lam, beta, case):
    doc = json.loads(kies("shape", "--lambda", lam, "--beta", beta).stdout)
    schema("shape.schema.json", doc)
    assert doc["case"] == case


def test_shape_peak_and_left_value(kies):
    peaked = json.loads(kies("shape", "--lambda", 1, "--beta", 1).stdout)
    assert peaked["critical_points"] == pytest.approx([0.5])
    above = json.loads(kies("shape", "--lambda", 1, "--beta", 2).stdout)
    assert above["left_value"] == 0
    assert len(above["critical_points"]) == 1


def test_shape_rejects_non_positive(kies):
    assert kies("shape", "--lambda", 0, "--beta", 1, check=False).returncode == 2
    assert kies("shape", "--lambda", 1, "--beta", -1, check=False).returncode == 2


# validate

def test_validate_reports(kies, schema):
    ok = kies("validate", "--model", m({"law": {"family": "exponential", "params": {"theta": 1}}, "beta": 2}))
    doc = json.loads(ok.stdout)
    schema("validate.schema.json", doc)
    assert doc["valid"] is True
    assert doc["neg_moment_value"] == pytest.approx(math.sqrt(math.pi), rel=1e-12)

    bad = kies("validate", "--model", m({"law": {"family": "exponential", "params": {"theta": 1}}, "beta": 0.5}),
               check=False)
    assert bad.returncode == 3
    doc = json.loads(bad.stdout)
    schema("validate.schema.json", doc)
    assert doc["neg_moment_ok"] is False


def test_validate_uniform_caveat(kies, schema):
    doc = json.loads(kies("validate", "--model", m(UNIFORM)).stdout)
    schema("validate.schema.json", doc)
    assert doc["exponential_unit_beta"] is True and doc["valid"] is True


# fit

@pytest.fixture(scope="module")
def kies_data(tmp_path_factory, kies):
    path = tmp_path_factory.mktemp("fit") / "kies.csv"
    model = {"law": {"family": "degenerate", "params": {"lambda": 2}}, "beta": 1.5}
    kies("sample", "--model", m(model), "--n", 100000, "--seed", 11, "--out", path)
    return path


def test_fit_recovers_original(kies, schema, kies_data, tmp_path):
    out = tmp_path / "fit.json"
    kies("fit", kies_data, "--family", "A1", "--bins", 50, "--seed", 1, "--out", out)
    doc = json.loads(out.read_text())
    schema("fit.schema.json", doc)
    schema("model.schema.json", doc["model"])
    assert doc["parameters"]["lambda"] == pytest.approx(2.0, rel=0.1)
    assert doc["parameters"]["beta"] == pytest.approx(1.5, rel=0.1)
    assert doc["cost"] <= min(doc["restart_costs"])
    table = rows((tmp_path / "fit.json.bins.csv").read_text())
    assert len(table) == 50
    assert set(table[0]) == {"center", "l_emp", "l_th"}
    mass = sum(float(r["l_emp"]) for r in table) / 50
    assert mass == pytest.approx(1.0, abs=1e-12)


def test_fit_deterministic(kies, kies_data):
    args = ("fit", kies_data, "--family", "geometric", "--restarts", 4, "--seed", 5)
    assert kies(*args).stdout == kies(*args).stdout


def test_fit_preprocess_minmax_and_divide(kies, schema, tmp_path):
    rng = random.Random(4)
    raw = tmp_path / "raw.csv"
    raw.write_text("value\n" + "\n".join(str(rng.uniform(1, 950)) for _ in range(2000)) + "\n")
    for pre in ("minmax", "divide:1000"):
        doc = json.loads(kies("fit", raw, "--family", "A6", "--preprocess", pre, "--restarts", 4, "--bins", 20).stdout)
        schema("fit.schema.json", doc)
        assert doc["observations"] == 2000 and doc["bins"] == 20
    assert kies("fit", raw, "--preprocess", "divide:100", check=False).returncode == 2


def test_fit_input_errors(kies, tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert kies("fit", empty, check=False).returncode == 2
    assert kies("fit", tmp_path / "missing.csv", check=False).returncode == 2
    junk = tmp_path / "junk.csv"
    junk.write_text("x\n0.5\nabc\n")
    assert kies("fit", junk, check=False).returncode == 2
    good = tmp_path / "good.csv"
    good.write_text("0.2\n0.4\n")
    assert kies("fit", good, "--family", "A9", check=False).returncode == 2


def test_model_schema_accepts_serialized_models(schema):
    schema("model.schema.json", BIMODAL)
    schema("model.schema.json", {"law": {"family": "affine", "params": {
        "a": 3.8, "b": 2.8, "inner": {"family": "binomial", "params": {"n": 95, "p": 0.0334}}}}, "beta": 1.6})
