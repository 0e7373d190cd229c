"""CLI: parsing, dispatch, round trips, determinism, exit codes."""

import json

import pytest

from toric3d.cli import (
    configuration_to_document,
    document_to_configuration,
    main,
    parse_config,
    parse_region,
    run,
)
from toric3d.errors import ConfigSemanticError, ConfigSyntaxError

LINE_DOC = '{"strings":[{"neg_period":"Z+","core":"","pos_period":"Z+","base":[0,0,0]}],"charges":[]}'
TWO_CHARGES = '{"strings":[],"charges":[[0,0,0],[2,2,2]]}'
PARALLEL = (
    '{"strings":['
    '{"neg_period":"Z+","core":"","pos_period":"Z+","base":[0,0,0]},'
    '{"neg_period":"Z+","core":"","pos_period":"Z+","base":[2,0,0]}]}'
)


def test_parse_straight_line():
    doc = parse_config(LINE_DOC)
    cfg = document_to_configuration(doc)
    assert len(cfg.strings) == 1 and not cfg.charges


def test_parse_two_charges():
    cfg = document_to_configuration(parse_config(TWO_CHARGES))
    assert len(cfg.charges) == 2


def test_parse_invalid_atom():
    with pytest.raises(ConfigSyntaxError):
        parse_config('{"strings":[{"neg_period":"Z+","core":"Z+Q","pos_period":"Z+","base":[0,0,0]}]}')


def test_parse_malformed_json_has_position():
    with pytest.raises(ConfigSyntaxError) as exc:
        parse_config('{"strings": [')
    assert exc.value.line is not None


def test_semantic_error_reports_string_index():
    doc = parse_config(
        '{"strings":[{"neg_period":"Z+","core":"Z-","pos_period":"Z+","base":[0,0,0]}]}'
    )
    with pytest.raises(ConfigSemanticError) as exc:
        document_to_configuration(doc)
    assert exc.value.index == 0


def test_round_trip_identity():
    doc = parse_config(LINE_DOC)
    cfg = document_to_configuration(doc)
    doc2 = configuration_to_document(cfg)
    cfg2 = document_to_configuration(doc2)
    assert configuration_to_document(cfg2) == doc2


def test_region_parse():
    r = parse_region("0,0,0:4,4,4")
    assert r.lo == (0, 0, 0) and r.hi == (4, 4, 4)
    with pytest.raises(ConfigSyntaxError):
        parse_region("0,0:4,4")


def _run_with_stdin(monkeypatch, argv, stdin_text):
    import io
    import sys

    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin_text))
    return run(argv)


def test_classify_parallel_lines(monkeypatch):
    report, code = _run_with_stdin(monkeypatch, ["classify"], PARALLEL)
    assert code == 0
    assert report["verdict"]["kind"] == "NotGroundSector"
    assert report["verdict"]["witness"]["pair"] == [0, 1]


def test_classify_expect_ground_exit_code(monkeypatch):
    report, code = _run_with_stdin(monkeypatch, ["classify", "--expect-ground"], PARALLEL)
    assert code == 1
    report, code = _run_with_stdin(monkeypatch, ["classify", "--expect-ground"], LINE_DOC)
    assert code == 0
    assert report["verdict"]["kind"] == "GroundState"


def test_energy_command(monkeypatch):
    report, code = _run_with_stdin(
        monkeypatch, ["energy", "--region", "0,0,0:4,4,4"], TWO_CHARGES
    )
    assert code == 0
    assert report["charge_energy"] == 4 and report["flux_energy"] == 0


def test_straighten_command(monkeypatch):
    doc = '{"strings":[{"neg_period":"Z+","core":"X+","pos_period":"Z-","base":[0,0,0]}]}'
    # negative corners need the --region=... spelling to survive argparse
    report, code = _run_with_stdin(
        monkeypatch, ["straighten", "--region=-1,-1,-4:2,1,1"], doc
    )
    assert code == 0
    assert report["results"][0]["steps"] >= 1


def test_surgery_command(monkeypatch, tmp_path):
    faces = [{"base": [x, 0, z], "normal": "y"} for x in range(2) for z in range(3)]
    surf_file = tmp_path / "surface.json"
    surf_file.write_text(json.dumps(faces))
    report, code = _run_with_stdin(
        monkeypatch, ["surgery", "--surface", str(surf_file)], PARALLEL
    )
    assert code == 0
    strings = report["config"]["strings"]
    assert len(strings) == 2
    # the double-U outcome: each output string has both tails along the same
    # vertical heading
    headings = set()
    for s in strings:
        assert s["neg_period"] in ("Z+", "Z-")
        assert s["pos_period"] in ("Z+", "Z-")
        headings.add((s["neg_period"], s["pos_period"]))
    assert len(headings) == 2
    # transform outputs round-trip through the document format unchanged
    text = json.dumps(report["config"])
    again = configuration_to_document(document_to_configuration(parse_config(text)))
    assert again == report["config"]


def test_strict_gss_flag_labels_without_default_recheck(monkeypatch):
    # pairwise-colliding strings with empty total intersection: the strict
    # reading accepts and must label under the same reading
    doc = (
        '{"strings":['
        '{"neg_period":"X+","core":"","pos_period":"Y+","base":[0,0,0]},'
        '{"neg_period":"X+","core":"","pos_period":"Y+","base":[0,9,9]},'
        '{"neg_period":"Y+","core":"","pos_period":"Z+","base":[9,0,9]}]}'
    )
    report, code = _run_with_stdin(monkeypatch, ["classify"], doc)
    assert report["verdict"]["kind"] == "NotGroundSector"
    report, code = _run_with_stdin(monkeypatch, ["classify", "--strict-gss"], doc)
    assert code == 0
    assert report["verdict"]["kind"] == "GroundState"
    assert [t["kind"] for t in report["label"]["tags"]] == ["P", "P", "P"]


def test_enumerate_command():
    report, code = run(["enumerate", "--strings", "2"])
    assert code == 0
    assert report["raw_count"] == report["raw_count_alt"] == 3360
    assert set(report["case_inventory"]) == {
        "I",
        "II.A",
        "II.B",
        "II.C",
        "III.A",
        "III.B",
        "IV.A",
    }


def test_verify_gauge_command():
    report, code = run(["verify", "--checks", "gauge"])
    assert code == 0
    assert report["pass"] is True


def test_reports_deterministic(monkeypatch):
    r1, _ = _run_with_stdin(monkeypatch, ["classify"], PARALLEL)
    r2, _ = _run_with_stdin(monkeypatch, ["classify"], PARALLEL)
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)


def test_error_exit_code(monkeypatch, capsys):
    import io
    import sys

    monkeypatch.setattr(sys, "stdin", io.StringIO(TWO_CHARGES))
    code = main(["energy", "--region", "nonsense"])
    captured = capsys.readouterr()
    assert code == 2
    payload = json.loads(captured.out)
    assert payload["error"] == "ConfigSyntaxError"


def test_main_prints_json(monkeypatch, capsys):
    import io
    import sys

    monkeypatch.setattr(sys, "stdin", io.StringIO(LINE_DOC))
    code = main(["validate"])
    out = capsys.readouterr().out
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    assert payload["schema_version"] == 1
