from pathlib import Path

import pytest

from gonflow import formats
from gonflow.cli import main
from gonflow.formats import ParseError

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_fold_morphism(capsys):
    code, out, _ = run(capsys, "validate", "morphism", DATA / "cycle4_fold.morph")
    assert code == 0 and out.strip() == "ok degree=2"


def test_solve_triangle_writes_witness(capsys, tmp_path):
    wit = tmp_path / "tri.wit"
    code, out, _ = run(capsys, "solve", "oro", "--input", DATA / "triangle.oro",
                       "--partition", DATA / "triangle.part", "--method", "fpt", "--witness", wit)
    assert code == 0 and out.strip() == "yes"
    assert wit.exists()
    code, out, _ = run(capsys, "validate", "witness", "--input", DATA / "triangle.oro", "--witness", wit)
    assert code == 0 and out.strip() == "ok"


def test_no_answer_exits_one(capsys, tmp_path):
    src = (DATA / "triangle.oro").read_text().replace("interval a 1 1", "interval a 2 2")
    path = tmp_path / "bad.oro"
    path.write_text(src)
    for method in ("fpt", "oracle"):
        code, out, _ = run(capsys, "solve", "oro", "--input", path, "--method", method)
        assert code == 1 and out.strip() == "no"


def test_unknown_subcommand(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 3


def test_missing_command(capsys):
    code, _, _ = run(capsys)
    assert code == 3


def test_parse_error_reports_position(capsys, tmp_path):
    path = tmp_path / "broken.oro"
    path.write_text("problem ORO\nv a b\ne 0 a zz 1\n")
    code, _, err = run(capsys, "solve", "oro", "--input", path)
    assert code == 3
    assert "line 3, column 7" in err


def test_problem_mismatch_is_an_input_error(capsys):
    code, _, _ = run(capsys, "solve", "too", "--input", DATA / "triangle.oro")
    assert code == 3


def test_invalid_partition_is_reported(capsys, tmp_path):
    path = tmp_path / "three.part"
    path.write_text("bag 0 a\nbag 1 b\nbag 2 c\ntarc 0 1\ntarc 1 2\n")
    code, out, _ = run(capsys, "validate", "partition", path, "--input", DATA / "triangle.oro")
    assert code == 1 and out.strip()
    code, _, _ = run(capsys, "solve", "oro", "--input", DATA / "triangle.oro", "--partition", path)
    assert code == 3


def test_partition_breadth(capsys):
    code, out, _ = run(capsys, "validate", "partition", DATA / "triangle.part", "--input", DATA / "triangle.oro")
    assert code == 0 and out.strip() == "ok breadth=2 width=2"


def test_resource_limit_exit(capsys):
    code, out, _ = run(capsys, "solve", "oro", "--input", DATA / "triangle.oro",
                       "--partition", DATA / "triangle.part", "--limit", "1")
    assert code == 2 and out.strip() == "resource"


def test_convert_morphism(capsys, tmp_path):
    out_path = tmp_path / "fold.part"
    code, out, _ = run(capsys, "convert", "morphism-to-partition", DATA / "cycle4_fold.morph", "--out", out_path)
    assert code == 0 and "breadth=2" in out
    parsed = formats.parse_partition(out_path.read_text())
    assert sorted(sorted(b) for b in parsed.partition.bags.values() if b) == [["a"], ["b", "d"], ["c"]]


def test_ilp_example(capsys):
    code, out, _ = run(capsys, "ilp", "solve", DATA / "example.ilp", "--json")
    assert code == 0
    assert '"value": 3' in out


def test_reduce_and_solve_agree(capsys, tmp_path):
    too = tmp_path / "tri.too"
    too.write_text("problem TOO\nv a b c\ne 0 a b 1\ne 1 b c 1\ne 2 c a 1\ntarget a 1\ntarget b 1\ntarget c 1\n")
    co = tmp_path / "tri.co"
    code, _, _ = run(capsys, "reduce", "too-to-co", "--input", too, "--out", co)
    assert code == 0
    assert (tmp_path / "tri.co.prov.json").exists()
    assert formats.parse_instance(co.read_text()).problem == "CO"
    assert run(capsys, "solve", "co", "--input", co)[0] == 0


def test_generate_binpacking(capsys, tmp_path):
    out_path = tmp_path / "bp.too"
    code, _, _ = run(capsys, "generate", "binpacking-too", "--items", 1, 2, 3, "--bins", 2, "--size", 3,
                     "--out", out_path)
    assert code == 0
    assert run(capsys, "solve", "too", "--input", out_path, "--method", "oracle")[0] == 0
    code, _, _ = run(capsys, "generate", "binpacking-too", "--items", 1, 2, "--bins", 2, "--size", 3,
                     "--out", out_path)
    assert code == 3


def test_crbds_reports_size(capsys, tmp_path):
    path = tmp_path / "pair.crbds"
    path.write_text("problem CRBDS\nv r b\ne 0 r b 1\nred r\nblue b\ncap r 1\nbudget 1\n")
    for method in ("fpt", "oracle"):
        code, out, _ = run(capsys, "solve", "crbds", "--input", path, "--method", method)
        assert code == 0 and out.strip() == "size 1"


def test_parse_error_fields():
    with pytest.raises(ParseError) as info:
        formats.parse_instance("problem ORO\nv a\ninterval a x 1\n")
    assert info.value.line == 3
    assert info.value.column == 12


def test_unknown_directive():
    with pytest.raises(ParseError) as info:
        formats.parse_partition("bag 0 a\nshelf 1 b\n")
    assert info.value.line == 2 and info.value.column == 1


def test_witness_round_trip():
    text = "orient 0 a b\norient 1 b c\norient 2 c a\n"
    w = formats.parse_witness(text, "ORO")
    assert w == {0: ("a", "b"), 1: ("b", "c"), 2: ("c", "a")}
    assert formats.parse_witness(formats.write_witness(w, "ORO"), "ORO") == w
