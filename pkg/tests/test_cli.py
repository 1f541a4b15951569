"""End-to-end CLI coverage on the bundled corpus: exit codes, formats, determinism."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import pytest

from rankintersect.cli import main
from rankintersect.codefile import emit_code, parse_code_file

DATA = resources.files("rankintersect") / "data"
ALL_BUNDLED = [
    "gab_3_2_f8",
    "club_4_2_f16",
    "minimal_9_3_f128",
    "quasimrd_6_2_f32",
    "gab_5_3_f32",
    "simplex_2_3",
]


def bundled(name: str) -> str:
    return str(DATA / f"{name}.json")


@pytest.mark.parametrize("name", ALL_BUNDLED)
def test_bundled_round_trip_byte_exact(name):
    path = Path(bundled(name))
    code, expected = parse_code_file(path)
    assert emit_code(code, expected) == path.read_text(encoding="utf-8")


def test_verify_gabidulin_example(tmp_path, capsys):
    out = tmp_path / "report.json"
    rc = main(["verify", bundled("gab_3_2_f8"), "--out", str(out)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["verdicts"]["intersecting"] is True
    assert report["measurements"]["distance"] == 2
    assert report["mismatches"] == []
    assert report["modulus"] == [1, 1, 0, 1]


def test_verify_simplex_example(tmp_path):
    out = tmp_path / "report.json"
    rc = main(["verify", bundled("simplex_2_3"), "--out", str(out)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["verdicts"]["minimal"] is True
    assert report["verdicts"]["intersecting"] is False
    assert report["verdicts"]["separating"] is True


def test_verify_club_shortcut_not_taken(tmp_path):
    out = tmp_path / "report.json"
    rc = main(["verify", bundled("club_4_2_f16"), "--out", str(out)])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["verdicts"]["intersecting"] is True
    assert report["certificates"]["intersecting"]["method"] == "support-pair-scan"


def test_verify_minimal_9_3_selected_properties(tmp_path):
    out = tmp_path / "report.json"
    rc = main([
        "verify", bundled("minimal_9_3_f128"),
        "--properties", "nondegenerate,distance,intersecting,scattered",
        "--out", str(out),
    ])
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["measurements"]["distance"] == 5
    assert report["verdicts"]["scattered"] is True
    assert report["certificates"]["intersecting"]["method"] == "sufficient-condition"


def test_verify_mismatch_exit_code(tmp_path):
    data = json.loads(Path(bundled("gab_3_2_f8")).read_text())
    data["expected_properties"] = [
        {"property": "intersecting", "expected": False, "tag": "tampered"}
    ]
    path = tmp_path / "tampered.json"
    path.write_text(json.dumps(data))
    out = tmp_path / "report.json"
    rc = main(["verify", str(path), "--out", str(out)])
    assert rc == 1
    report = json.loads(out.read_text())
    assert report["mismatches"][0]["property"] == "intersecting"


def test_verify_reducible_modulus_surfaced(tmp_path, capsys):
    data = json.loads(Path(bundled("gab_3_2_f8")).read_text())
    data["field"]["modulus"] = [1, 0, 0, 1]  # x^3 + 1 is reducible
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    rc = main(["verify", str(path)])
    assert rc == 2
    err = capsys.readouterr().err
    assert "[1, 0, 0, 1]" in err


def test_verify_schema_errors(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{\"field\": {\"q\": 2, \"m\": 3, \"modulus\": [1,1,0,1]}, \"n\": 3}")
    assert main(["verify", str(path)]) == 2
    assert "missing field" in capsys.readouterr().err

    path.write_text("not json")
    assert main(["verify", str(path)]) == 2
    assert main(["verify", str(tmp_path / "absent.json")]) == 2


def test_verify_out_of_range_entry(tmp_path, capsys):
    data = json.loads(Path(bundled("gab_3_2_f8")).read_text())
    data["generator"][0][0] = 9
    path = tmp_path / "oob.json"
    path.write_text(json.dumps(data))
    assert main(["verify", str(path)]) == 2
    assert "outside" in capsys.readouterr().err


def test_verify_formats(tmp_path):
    csv_out = tmp_path / "r.csv"
    rc = main(["verify", bundled("gab_3_2_f8"), "--format", "csv", "--out", str(csv_out)])
    assert rc == 0
    lines = csv_out.read_text().splitlines()
    assert lines[0] == "code_id,property,result"
    assert any(line.startswith("gab_3_2_f8,intersecting,true") for line in lines)

    txt_out = tmp_path / "r.txt"
    rc = main(["verify", bundled("gab_3_2_f8"), "--format", "text", "--out", str(txt_out)])
    assert rc == 0
    assert "intersecting: True" in txt_out.read_text()


def test_verify_determinism_modulo_timings(tmp_path):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    main(["verify", bundled("club_4_2_f16"), "--out", str(out1)])
    main(["verify", bundled("club_4_2_f16"), "--out", str(out2)])
    r1 = json.loads(out1.read_text())
    r2 = json.loads(out2.read_text())
    r1.pop("timings_ms")
    r2.pop("timings_ms")
    assert r1 == r2


def test_construct_gabidulin(tmp_path):
    out = tmp_path / "gab.json"
    rc = main(["construct", "gabidulin", "--q", "2", "--m", "5", "--k", "3",
               "--out", str(out)])
    assert rc == 0
    code, _ = parse_code_file(out)
    assert (code.n, code.k) == (5, 3)
    assert code.min_distance() == 3


def test_construct_extend_matches_bundled_quasimrd(tmp_path):
    out = tmp_path / "ext.json"
    rc = main(["construct", "extend", "--q", "2", "--m", "5", "--k", "2", "--r", "1",
               "--out", str(out)])
    assert rc == 0
    built, _ = parse_code_file(out)
    bundled_code, _ = parse_code_file(bundled("quasimrd_6_2_f32"))
    assert built.generator == bundled_code.generator
    assert built.min_distance() == 4


def test_construct_example_byte_identical_to_bundled(tmp_path):
    out = tmp_path / "ex.json"
    rc = main(["construct", "example", "--name", "minimal_9_3_f128", "--out", str(out)])
    assert rc == 0
    assert out.read_text() == Path(bundled("minimal_9_3_f128")).read_text()


def test_construct_simplex_and_club(tmp_path):
    out = tmp_path / "s.json"
    assert main(["construct", "simplex", "--q", "2", "--m", "3", "--k", "2",
                 "--out", str(out)]) == 0
    code, expected = parse_code_file(out)
    assert (code.n, code.k) == (6, 2)
    assert expected is not None

    out2 = tmp_path / "c.json"
    assert main(["construct", "club", "--q", "2", "--h", "4", "--out", str(out2)]) == 0
    club, _ = parse_code_file(out2)
    assert (club.n, club.k) == (4, 2)


def test_construct_unknown_example(capsys):
    assert main(["construct", "example", "--name", "missing"]) == 2


def test_feasible_grid_m5_k3(tmp_path):
    out = tmp_path / "f.json"
    rc = main(["feasible", "--q", "2", "--m", "5", "--k", "3", "--n", "5..8",
               "--out", str(out)])
    assert rc == 0
    verdicts = [row["verdict"] for row in json.loads(out.read_text())["verdicts"]]
    assert verdicts == ["KnownConstructible", "Impossible", "Impossible", "Impossible"]


def test_feasible_k2_gray_area_empty(tmp_path):
    out = tmp_path / "f.json"
    main(["feasible", "--q", "2", "--m", "5", "--k", "2", "--n", "3..9", "--out", str(out)])
    rows = json.loads(out.read_text())["verdicts"]
    for row in rows:
        expected = "KnownConstructible" if row["n"] <= 7 else "Impossible"
        assert row["verdict"] == expected


def test_feasible_formats(tmp_path, capsys):
    rc = main(["feasible", "--q", "2", "--m", "5", "--k", "3", "--n", "4", "--format", "csv"])
    assert rc == 0
    csv_text = capsys.readouterr().out
    assert "2,5,3,4,,Impossible,length-lower-bound" in csv_text
    rc = main(["feasible", "--q", "2", "--m", "5", "--k", "3", "--n", "5", "--format", "text"])
    assert rc == 0
    assert "KnownConstructible" in capsys.readouterr().out


def test_search_cli_small_range(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    rc = main(["search", "--q", "2", "--form", "3", "--range", "0..1024",
               "--chunk-size", "512", "--report", str(report_path),
               "--checkpoint", str(tmp_path / "ck.txt")])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["totals"]["examined"] == 1024
    assert summary["totals"]["survivors"] == 0
    report = json.loads(report_path.read_text())
    assert report["results"]["3"]["spannable"] == 1024


def test_search_cli_report_determinism(tmp_path):
    p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
    main(["search", "--q", "2", "--form", "3", "--range", "0..600", "--report", str(p1)])
    main(["search", "--q", "2", "--form", "3", "--range", "0..600", "--report", str(p2)])
    r1, r2 = json.loads(p1.read_text()), json.loads(p2.read_text())
    for r in (r1, r2):
        r.pop("run")
        r.pop("checkpoint")
    assert r1 == r2


def test_spectrum_club(tmp_path):
    out = tmp_path / "spec.json"
    rc = main(["spectrum", bundled("club_4_2_f16"), "--out", str(out)])
    assert rc == 0
    payload = json.loads(out.read_text())
    assert payload["point_weight_spectrum"] == {"1": 12, "2": 1}
    assert payload["weight_spectrum"]["2"] >= 1
