import json
import subprocess
import sys

import numpy as np
import pytest

from unital_channels import __version__, catalog, cli
from unital_channels.documents import InputDocument, dumps, loads
from unital_channels.exceptions import ConvergenceError

EXPECTED_EXIT = {
    "a": 0, "b": 3, "c": 0, "a_pi4": 4, "c_symmetric": 0,
    "E_a": 0, "E_b": 3, "E_c": 0, "F_a": 0, "F_b": 3, "F_c": 3,
    "werner_holevo_antisym3": 0, "E_c_kraus": 0, "cyclic_mixture3": 3, "swap_unitary": 0,
}


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write(path, obj):
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return path


@pytest.fixture
def cat_dir(tmp_path, capsys):
    out = tmp_path / "catalog"
    assert run(["catalog", "--out", out], capsys)[0] == 0
    return out


def test_mapping_covers_catalog():
    assert set(EXPECTED_EXIT) == set(catalog.names())


@pytest.mark.parametrize("name", sorted(EXPECTED_EXIT))
def test_catalog_round_trip(name, cat_dir, capsys):
    code, out, _ = run(["check", cat_dir / f"{name}.json"], capsys)
    assert code == EXPECTED_EXIT[name]
    report = json.loads(out)
    assert report["exit_code"] == code
    assert report["outcome"] == {0: "extreme", 3: "not_extreme", 4: "not_ucpt"}[code]
    if report["agreement"] is not None:
        assert report["agreement"]


def test_report_layout(cat_dir, capsys):
    _, out, _ = run(["check", cat_dir / "a.json", "--method", "both"], capsys)
    report = json.loads(out)
    assert list(report) == [
        "tool", "tool_version", "schema_version", "input", "options", "policy", "verdict",
        "conditions", "kraus_operators", "kraus_rank", "extremality", "agreement",
        "outcome", "exit_code",
    ]
    assert report["tool_version"] == __version__
    assert report["policy"] == {"relative_tol": 1e-9, "absolute_floor": 1e-12}
    assert set(report["extremality"]) == {"general_LS", "general_UCP", "general_CPT", "family_rank_d"}
    fam = report["extremality"]["family_rank_d"]
    np.testing.assert_allclose(fam["blocks"][0]["singular_values"], [1.529, 0.6364, 0.5885], atol=5e-4)
    np.testing.assert_allclose(fam["blocks"][1]["singular_values"], [0.9318, 0.6332, 0.4308], atol=5e-4)
    assert report["input"] == json.loads((cat_dir / "a.json").read_text())


def test_digits_rounds_singular_values(cat_dir, capsys):
    _, out, _ = run(["check", cat_dir / "E_c.json", "--digits", "4", "--method", "family"], capsys)
    blocks = json.loads(out)["extremality"]["family_rank_d"]["blocks"]
    assert blocks[0]["singular_values"] == [1.4142, 0.7071, 0.7071]


def test_rank4_deficient_block_flagged(cat_dir, capsys):
    code, out, _ = run(["check", cat_dir / "c.json", "--family", "rank4_qutrit"], capsys)
    assert code == 3
    rep = json.loads(out)["extremality"]["family_rank4"]
    assert rep["deficient_blocks"] == [2]
    assert [b["full_rank"] for b in rep["blocks"]] == [True, True, False, True]


def test_rank4_alias(cat_dir, capsys):
    code, out, _ = run(["check", cat_dir / "a.json", "--family", "rank4"], capsys)
    assert code == 0 and "family_rank4" in json.loads(out)["extremality"]


def test_unnormalised_coefficients_exit_4(tmp_path, capsys):
    alpha = np.random.default_rng(3).standard_normal((3, 3))
    doc = InputDocument.from_coefficients(alpha)
    code, out, err = run(["check", write(tmp_path / "x.json", dumps(doc.to_dict()))], capsys)
    assert code == 4
    report = json.loads(out)
    assert report["conditions"]["norm_residual"] == pytest.approx(np.sum(alpha**2) - 1)
    assert report["extremality"] == {}
    assert "c1 normalisation" in err and "c3 l=2" in err


def test_family_method_on_infeasible_exit_4(cat_dir, capsys):
    code, _, err = run(["check", cat_dir / "a_pi4.json", "--method", "family"], capsys)
    assert code == 4 and "c2 l=1" in err


def test_malformed_json_reports_position(tmp_path, capsys):
    code, _, err = run(["check", write(tmp_path / "bad.json", '{"schema_version": 1,\n  "kind": }')], capsys)
    assert code == 2
    assert "line 2, column 11" in err


@pytest.mark.parametrize(
    "doc, message",
    [
        ({"schema_version": 2, "kind": "kraus", "d": 1, "data": [[[[1, 0]]]]}, "schema_version"),
        ({"schema_version": 1, "kind": "choi", "d": 1, "data": []}, "kind"),
        ({"schema_version": 1, "kind": "coefficients", "d": 2, "data": [[[1, 0]]]}, "2x2"),
        ({"schema_version": 1, "kind": "coefficients", "d": 0, "data": []}, "positive"),
        ({"schema_version": 1, "kind": "coefficients", "d": 1, "data": [[[True, 0]]]}, "pair"),
        ({"schema_version": 1, "kind": "coefficients", "d": 1, "data": [[["1", 0]]]}, "pair"),
        ({"schema_version": 1, "kind": "kraus", "d": 2, "data": []}, "non-empty"),
        (
            {"schema_version": 1, "kind": "kraus", "d": 1,
             "data": [[[[1, 0]]], [[[1, 0], [0, 0]]]]},
            "shape",
        ),
        ({"schema_version": 1, "kind": "kraus", "d": 2, "data": [[[[1, 0]]]]}, "rows"),
        ({"schema_version": 1, "kind": "coefficients", "d": 2, "family": "rank9",
          "data": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}, "family"),
        ([1, 2], "object"),
    ],
)
def test_schema_violations_exit_2(doc, message, tmp_path, capsys):
    code, out, err = run(["check", write(tmp_path / "doc.json", doc)], capsys)
    assert code == 2 and out == ""
    assert message in err


def test_missing_file_exit_2(tmp_path, capsys):
    code, _, err = run(["check", tmp_path / "none.json"], capsys)
    assert code == 2 and "cannot read" in err


@pytest.mark.parametrize(
    "argv",
    [["bogus"], ["check"], ["sample", "3", "--seed", "-1", "--out", "x"], ["check", "f", "--method", "x"]],
)
def test_bad_arguments_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(argv)
    assert info.value.code == 2


def test_kraus_document_method_handling(cat_dir, capsys):
    code, _, err = run(["check", cat_dir / "werner_holevo_antisym3.json", "--method", "family"], capsys)
    assert code == 2 and "coefficient document" in err
    code, out, _ = run(["check", cat_dir / "werner_holevo_antisym3.json", "--method", "both"], capsys)
    report = json.loads(out)
    assert code == 0 and set(report["extremality"]) == {"general_LS", "general_UCP", "general_CPT"}
    assert report["conditions"] is None and report["agreement"] is None


def test_rank4_on_wrong_dimension_exit_2(tmp_path, capsys):
    doc = InputDocument.from_coefficients(np.eye(4) / 2, "rank4_qutrit")
    code, _, err = run(["check", write(tmp_path / "d4.json", dumps(doc.to_dict()))], capsys)
    assert code == 2 and "d=3" in err


def test_non_minimal_kraus_exit_2(tmp_path, capsys):
    half = np.eye(2) / np.sqrt(2)
    doc = InputDocument("kraus", 2, [half, half])
    code, _, err = run(["check", write(tmp_path / "k.json", dumps(doc.to_dict()))], capsys)
    assert code == 2 and "not minimal" in err


def test_sample_deterministic_and_feasible(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    code, out, _ = run(["sample", 3, "--count", 5, "--seed", 42, "--out", a], capsys)
    assert code == 0 and len(out.split()) == 5
    run(["sample", 3, "--count", 5, "--seed", 42, "--out", b], capsys)
    files = sorted(p.name for p in a.iterdir())
    assert files == [f"sample_{k:04d}.json" for k in range(5)]
    for name in files:
        assert (a / name).read_bytes() == (b / name).read_bytes()
        code, _, _ = run(["check", a / name], capsys)
        assert code in (0, 3)
    run(["sample", 3, "--count", 1, "--seed", 43, "--out", tmp_path / "c"], capsys)
    assert (tmp_path / "c" / "sample_0000.json").read_bytes() != (a / "sample_0000.json").read_bytes()


def test_sample_rank4_family_and_dimension_check(tmp_path, capsys):
    code, _, _ = run(["sample", 3, "--family", "rank4", "--out", tmp_path / "s"], capsys)
    doc = json.loads((tmp_path / "s" / "sample_0000.json").read_text())
    assert code == 0 and doc["family"] == "rank4_qutrit"
    code, _, _ = run(["sample", 4, "--family", "rank4", "--out", tmp_path / "t"], capsys)
    assert code == 2


def test_sample_non_convergence_exit_1(tmp_path, capsys, monkeypatch):
    def fail(d, seed):
        raise ConvergenceError("no feasible point", 0.5)

    monkeypatch.setattr(cli, "sample_feasible", fail)
    code, _, err = run(["sample", 3, "--out", tmp_path], capsys)
    assert code == 1 and "best residual 5.000e-01" in err


def test_catalog_commands(tmp_path, capsys):
    code, out, _ = run(["catalog", "b"], capsys)
    doc = loads(out)
    assert code == 0 and doc.name == "b" and doc.family == "rank_d"
    np.testing.assert_array_equal(doc.data, catalog.coeff_b().alpha)
    code, out, _ = run(["catalog"], capsys)
    assert code == 0 and list(json.loads(out)) == catalog.names()
    code, _, err = run(["catalog", "zzz"], capsys)
    assert code == 2 and "unknown catalog entry" in err
    code, out, _ = run(["catalog", "swap_unitary", "--out", tmp_path / "u.json"], capsys)
    assert code == 0 and out == ""
    assert len(json.loads((tmp_path / "u.json").read_text())["data"]) == 1


def test_conjugate_then_same_as(cat_dir, tmp_path, capsys):
    out_path = tmp_path / "conj.json"
    code, _, _ = run(
        ["conjugate", cat_dir / "c.json", cat_dir / "swap_unitary.json", "--out", out_path], capsys
    )
    assert code == 0
    assert json.loads(out_path.read_text())["name"] == "c_conjugated"
    code, out, _ = run(["check", out_path, "--same-as", cat_dir / "werner_holevo_antisym3.json"], capsys)
    same = json.loads(out)["same_channel"]
    assert code == 0 and same["equal"] and same["choi_distance"] < 1e-10
    _, out, _ = run(["check", cat_dir / "c.json", "--same-as", cat_dir / "werner_holevo_antisym3.json"], capsys)
    assert not json.loads(out)["same_channel"]["equal"]


def test_conjugate_rejects_bad_unitary(cat_dir, tmp_path, capsys):
    code, _, err = run(["conjugate", cat_dir / "c.json", cat_dir / "E_c_kraus.json"], capsys)
    assert code == 2 and "exactly one operator" in err
    doc = InputDocument("kraus", 3, [2 * np.eye(3)])
    bad = write(tmp_path / "u.json", dumps(doc.to_dict()))
    code, _, err = run(["conjugate", cat_dir / "c.json", bad], capsys)
    assert code == 2 and "not unitary" in err


def test_out_file_matches_stdout(cat_dir, tmp_path, capsys):
    _, out, _ = run(["check", cat_dir / "F_a.json"], capsys)
    run(["check", cat_dir / "F_a.json", "--out", tmp_path / "r.json"], capsys)
    assert (tmp_path / "r.json").read_text() == out


def test_module_entry_point(cat_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "unital_channels", "check", str(cat_dir / "E_b.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 3
    assert json.loads(proc.stdout)["outcome"] == "not_extreme"


def test_document_round_trip_preserves_values():
    alpha = catalog.coeff_a().alpha
    doc = loads(dumps(InputDocument.from_coefficients(alpha, "rank_d", "a").to_dict()))
    np.testing.assert_array_equal(doc.data, alpha)
