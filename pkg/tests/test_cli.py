import io
import sys

import pytest

from moufang.cli import run_cli
from moufang import files

from util import cyclic_table, dihedral_table


def run(capsys, *argv):
    code = run_cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_ok(tmp_path, capsys):
    path = tmp_path / "c4.tbl"
    files.write_table(cyclic_table(4), path)
    code, out, err = run(capsys, "validate", str(path))
    assert code == 0
    assert "order 4" in out


def test_validate_bad_table(tmp_path, capsys):
    path = tmp_path / "bad.tbl"
    path.write_text("2\n0 1\n0 1\n")
    code, out, err = run(capsys, "validate", str(path))
    assert code == 1
    assert "NOT_LATIN" in err


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        run_cli(["frobnicate"])
    assert exc.value.code == 2


def test_props(tmp_path, capsys):
    code, out, err = run(capsys, "props", "D6")
    assert code == 0
    assert "ASSOCIATIVE: yes" in out
    code, out, err = run(capsys, "chein", "D6", "--out", str(tmp_path / "m12.tbl"))
    assert code == 0
    code, out, err = run(capsys, "props", str(tmp_path / "m12.tbl"))
    assert code == 0
    assert "ASSOCIATIVE: no" in out and "M1: yes" in out
    assert "associator subloop: C3" in out


def test_product(tmp_path, capsys):
    out_path = tmp_path / "p.tbl"
    code, out, err = run(capsys, "product", "C2", "C3", "--out", str(out_path))
    assert code == 0
    assert files.read_table(out_path).n == 6


def test_modify_and_diff(tmp_path, capsys):
    c4 = tmp_path / "c4.tbl"
    files.write_table(cyclic_table(4), c4)
    out_path = tmp_path / "klein.tbl"
    code, out, err = run(
        capsys, "modify", str(c4), "--kind", "cyclic", "--S", "0,2",
        "--gen", "1", "--h", "2", "--out", str(out_path),
    )
    assert code == 0
    assert files.read_table(out_path).order_statistic().counts == {1: 1, 2: 3}
    code, out, err = run(
        capsys, "modify", str(c4), "--kind", "cyclic", "--S", "0,2",
        "--gen", "1", "--h", "2", "--diff",
    )
    assert code == 0
    assert "# 4 of 16 cells differ" in out


def test_modify_bad_params(tmp_path, capsys):
    c4 = tmp_path / "c4.tbl"
    files.write_table(cyclic_table(4), c4)
    code, out, err = run(
        capsys, "modify", str(c4), "--kind", "cyclic", "--S", "0,2", "--gen", "1", "--h", "1",
    )
    assert code == 1
    assert "BAD_PARAMS" in err


def test_iso_command(tmp_path, capsys):
    m12 = tmp_path / "m12.tbl"
    run(capsys, "chein", "D6", "--out", str(m12))
    relabeled = tmp_path / "m12b.tbl"
    table = files.read_table(m12)
    files.write_table(table.relabel([0, 2, 1] + list(range(3, 12))), relabeled)
    code, out, err = run(capsys, "iso", str(m12), str(relabeled))
    assert code == 0
    assert out.startswith("isomorphic:")
    other = tmp_path / "c12.tbl"
    files.write_table(cyclic_table(12), other)
    code, out, err = run(capsys, "iso", str(m12), str(other))
    assert code == 0
    assert "not isomorphic" in out


def test_search_and_replay(tmp_path, capsys):
    catalog_path = tmp_path / "cat.txt"
    code, out, err = run(
        capsys, "search", "--seeds", "chein:D6", "--order-cap", "12",
        "--out", str(catalog_path),
    )
    assert code == 0
    assert "12:01: nucleus=1 assoc=C3 extra=no size=1" in out
    assert "total: 1 loops in 1 classes" in out
    code, out, err = run(capsys, "replay", "--catalog", str(catalog_path), "--id", "12:1")
    assert code == 0
    assert out.splitlines()[1] == "12"


def test_search_seed_above_cap(capsys):
    code, out, err = run(capsys, "search", "--seeds", "chein:D8", "--order-cap", "12")
    assert code == 1


def test_bootstrap_command(capsys):
    code, out, err = run(capsys, "bootstrap-groups", "--n", "8", "--seed", "C8")
    assert code == 0
    assert "5 groups, 2 nonabelian" in out
    code, out, err = run(capsys, "bootstrap-groups", "--n", "12", "--seed", "C12")
    assert code == 1
    assert "NOT_POWER_OF_TWO" in err
