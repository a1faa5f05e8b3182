"""CLI tests: strict document parsing, render round-trips, exit codes and
golden-output comparison for every subcommand.

Regenerate the golden files after an intentional output change with
    python3 tests/test_cli.py --regen
and review the diff before committing.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

from stackyfan.cli import (FanDocument, document_of, parse_fan_document,
                           render_document, run_command)
from stackyfan.errors import ParseError, ValidationError

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"

# (golden file name, expected exit code, argv)
GOLDEN_CASES = [
    ("validate_p2", 0, ["validate", "fan_p2.json"]),
    ("box_p112", 0, ["box", "fan_p112.json"]),
    ("ages_p112", 0, ["ages", "fan_p112.json"]),
    ("ehrhart_p2", 0, ["ehrhart", "fan_p2.json", "--max-m", "3"]),
    ("delta_p112", 0, ["delta", "fan_p112.json"]),
    ("weighted_delta_p12_zero", 0,
     ["weighted-delta", "fan_p12.json", "--lambda", "zero",
      "--series-cutoff", "2"]),
    ("weighted_delta_p12_kappa", 0,
     ["weighted-delta", "fan_p12.json", "--lambda", "kappa"]),
    ("gamma_p12_zero", 0,
     ["gamma", "fan_p12.json", "--divisor", "zero", "--check-direct", "3"]),
    ("gamma_p12_half", 0, ["gamma", "fan_p12.json", "--divisor", "half"]),
    ("gamma_p2_uv", 0, ["--uv", "gamma", "fan_p2.json", "--divisor", "zero"]),
    ("betti_p12", 0, ["betti", "fan_p12.json"]),
    ("symmetry_p112", 0, ["symmetry", "fan_p112.json", "--lambda", "zero"]),
    ("orbit_poset_p12", 0, ["orbit-poset", "fan_p12.json", "--bound", "2"]),
    ("orbit_poset_p12_dot", 0,
     ["orbit-poset", "fan_p12.json", "--bound", "2", "--dot"]),
    ("orbit_poset_p12_json", 0,
     ["orbit-poset", "fan_p12.json", "--bound", "2", "--json"]),
    ("subdivide_p2", 0, ["subdivide", "fan_p2.json", "--at", "1,1"]),
    ("refine_check_p2", 0,
     ["refine-check", "fan_p2.json", "--fine",
      str(DATA / "fan_p2_subdivided.json"), "--lambda", "zero"]),
    ("symmetry_a1_error", 1,
     ["symmetry", "fan_a1.json", "--lambda", "zero"]),
]


def _with_paths(argv):
    return [str(DATA / a) if a.endswith(".json") and "/" not in a else a
            for a in argv]


# ---------------------------------------------------------------------------
# Parsing


def test_parse_p12_document():
    doc = parse_fan_document((DATA / "fan_p12.json").read_text())
    assert doc.rank == 1
    assert doc.rays == ((1,), (-1,))
    assert doc.weights == (1, 2)
    assert doc.cones == ((0,), (1,))
    assert doc.support == "complete"
    assert doc.divisors == (("half", (Fraction(1, 2), Fraction(-1, 3))),)
    assert doc.functionals == (("kappa", (Fraction(1), Fraction(1))),)


def _minimal(**overrides):
    base = {"rank": 1, "rays": [[1], [-1]], "weights": [1, 1],
            "cones": [[0], [1]], "support": "complete"}
    base.update(overrides)
    import json
    return json.dumps(base)


def test_parse_rejects_weight_length_mismatch():
    with pytest.raises(ParseError, match="length differs"):
        parse_fan_document(_minimal(weights=[1]))


def test_parse_rejects_unknown_field():
    with pytest.raises(ParseError, match="unknown field"):
        parse_fan_document(_minimal(extra=1))


def test_parse_rejects_missing_field():
    with pytest.raises(ParseError, match="missing field"):
        parse_fan_document('{"rank": 1}')


def test_parse_rejects_malformed_rational():
    with pytest.raises(ParseError, match="malformed rational"):
        parse_fan_document(_minimal(divisors={"d": ["1/0", 0]}))


def test_parse_rejects_bad_support():
    with pytest.raises(ParseError, match="support"):
        parse_fan_document(_minimal(support="everything"))


def test_parse_rejects_invalid_json():
    with pytest.raises(ParseError, match="invalid JSON"):
        parse_fan_document("{")


def test_parse_validates_fan():
    with pytest.raises(ValidationError, match="not primitive"):
        parse_fan_document(_minimal(rays=[[2], [-1]]))


def test_render_round_trip():
    for name in ("fan_a1", "fan_p1", "fan_p2", "fan_p12", "fan_p112"):
        text = (DATA / f"{name}.json").read_text()
        doc = parse_fan_document(text)
        assert parse_fan_document(render_document(doc)) == doc


def test_document_of_matches_source():
    doc = parse_fan_document((DATA / "fan_p2.json").read_text())
    again = document_of(doc.to_stacky_fan())
    assert again.rays == doc.rays and again.weights == doc.weights
    assert sorted(again.cones) == sorted(doc.cones)


# ---------------------------------------------------------------------------
# Exit codes


def test_exit_code_missing_file():
    code, out = run_command(["delta", str(DATA / "no_such.json")])
    assert code == 2 and out.startswith("error:")


def test_exit_code_unknown_subcommand():
    code, out = run_command(["frobnicate", str(DATA / "fan_p2.json")])
    assert code == 2


def test_exit_code_bad_option_value():
    code, out = run_command(["orbit-poset", str(DATA / "fan_p12.json"),
                             "--bound", "oops"])
    assert code == 2


def test_exit_code_unknown_divisor():
    code, out = run_command(["gamma", str(DATA / "fan_p12.json"),
                             "--divisor", "nope"])
    assert code == 2 and "unknown divisor" in out


def test_exit_code_domain_error():
    code, out = run_command(["symmetry", str(DATA / "fan_a1.json"),
                             "--lambda", "zero"])
    assert code == 1 and out.startswith("error:")


def test_validate_reports_violations():
    bad = DATA / "golden" / "_tmp_bad.json"
    bad.write_text(_minimal(rays=[[1], [1]]))
    try:
        code, out = run_command(["validate", str(bad)])
        assert code == 1 and out.strip() != "ok"
    finally:
        bad.unlink()


# ---------------------------------------------------------------------------
# Golden outputs


@pytest.mark.parametrize("name,expected_code,argv",
                         GOLDEN_CASES, ids=[c[0] for c in GOLDEN_CASES])
def test_golden(name, expected_code, argv):
    code, out = run_command(_with_paths(argv))
    assert code == expected_code
    assert out == (GOLDEN / f"{name}.txt").read_text()


def regenerate():
    GOLDEN.mkdir(exist_ok=True)
    for name, expected_code, argv in GOLDEN_CASES:
        code, out = run_command(_with_paths(argv))
        assert code == expected_code, (name, code, out)
        (GOLDEN / f"{name}.txt").write_text(out)
        print(f"wrote {name}.txt ({len(out.splitlines())} lines)")


if __name__ == "__main__":
    if "--regen" in sys.argv:
        regenerate()
    else:
        print(__doc__)
