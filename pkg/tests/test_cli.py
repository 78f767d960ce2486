import pytest

from latinsub.cli import main
from latinsub.core import cyclic_square, elementary_abelian_square, format_square, parse_square


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_exist(capsys):
    assert run(capsys, "exist", "--n", "9", "--a", "4", "--b", "4") == (1, "NO (condition b)\n")
    code, out = run(capsys, "exist", "--n", "8", "--a", "4", "--b", "4")
    assert code == 0 and out.startswith("YES")


def test_domain_error_exits_1(capsys):
    assert main(["exist", "--n", "5", "--a", "1", "--b", "2"]) == 1
    assert "error" in capsys.readouterr().err


def test_usage_errors_exit_2(capsys):
    for argv in (["exist", "--n", "9"], ["frobnicate"], ["exist", "-n", "9", "--a", "2", "--b", "2"], []):
        with pytest.raises(SystemExit) as e:
            main(argv)
        assert e.value.code == 2


def test_build_writes_verified_square(tmp_path, capsys):
    out = tmp_path / "sq.txt"
    code, text = run(capsys, "build", "--n", "12", "--a", "4", "--b", "5", "--out", str(out))
    assert code == 0
    L = parse_square(out.read_text())
    assert L.order == 12
    assert "order 4 rows" in text and "order 5 rows" in text
    code, text = run(capsys, "build", "--n", "9", "--a", "4", "--b", "4")
    assert code == 1 and text == "NO (condition b)\n"


def test_overlap_commands(tmp_path, capsys):
    assert run(capsys, "overlap-check", "--n", "10", "--a", "4", "--b", "4", "--c", "1")[0] == 0
    code, out = run(capsys, "overlap-check", "--n", "8", "--a", "4", "--b", "4", "--c", "1")
    assert code == 1 and out.startswith("NO (linear")
    out_file = tmp_path / "o.txt"
    assert run(capsys, "overlap-build", "--n", "10", "--a", "4", "--b", "4", "--c", "1", "--out", str(out_file))[0] == 0
    parse_square(out_file.read_text())
    assert run(capsys, "overlap-build", "--n", "8", "--a", "4", "--b", "4", "--c", "1")[0] == 1


def test_disjoint_build(tmp_path, capsys):
    f = tmp_path / "d.txt"
    assert run(capsys, "disjoint-build", "--n", "14", "--a", "4", "--b", "5", "--c", "2", "--out", str(f))[0] == 0
    parse_square(f.read_text())
    assert run(capsys, "disjoint-build", "--n", "13", "--a", "4", "--b", "5", "--c", "0")[0] == 1
    assert run(capsys, "disjoint-build", "--n", "11", "--a", "3", "--b", "4", "--c", "3", "--out", str(f))[0] == 0
    assert run(capsys, "disjoint-build", "--n", "9", "--a", "3", "--b", "4", "--c", "3")[0] == 1


def test_enumerate(tmp_path, capsys):
    ea = tmp_path / "ea.txt"
    ea.write_text(format_square(elementary_abelian_square(2)))
    z = tmp_path / "z.txt"
    z.write_text(format_square(cyclic_square(4)))
    code, out = run(capsys, "enumerate", "--in", str(ea), "--m", "2")
    lines = out.splitlines()
    assert code == 0 and lines[:2] == ["12 of bound 12", "WITHIN BOUND"] and len(lines) == 14
    assert run(capsys, "enumerate", "--in", str(z), "--m", "2")[1].startswith("4 of bound 12\n")
    assert run(capsys, "enumerate", "--in", str(z), "--m", "4", "--workers", "2")[1].startswith("1 of bound 1\n")


def test_parse_error_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n0 1\n0 1\n")
    assert main(["enumerate", "--in", str(bad), "--m", "1"]) == 1


def test_bound_and_blocks(tmp_path, capsys):
    assert run(capsys, "bound", "--n", "8", "--m", "4") == (0, "bound 28 (h=3)\n")
    code, out = run(capsys, "bound", "--n", "9", "--m", "7", "--t", "2")
    assert "psi(7,2) = 2" in out
    code, out = run(capsys, "bound", "--exponent-check", "1000")
    assert code == 0 and "0 violations" in out
    with pytest.raises(SystemExit):
        main(["bound", "--n", "4"])
    ea = tmp_path / "ea.txt"
    ea.write_text(format_square(elementary_abelian_square(2)))
    code, out = run(capsys, "blocks", "--in", str(ea), "--rows", "0,1")
    assert code == 0 and out.splitlines()[0] == "2 blocks, sizes 2,2"


def test_ryser_commands(tmp_path, capsys):
    good = tmp_path / "good.txt"
    good.write_text("2 2 3\n0 1\n1 2\n")
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2 3\n0 1\n1 0\n")
    code, out = run(capsys, "ryser-check", "--in", str(good))
    assert code == 0 and "counts 0:1 1:2 2:1" in out
    assert run(capsys, "ryser-check", "--in", str(bad))[0] == 1
    sq = tmp_path / "sq.txt"
    assert run(capsys, "ryser-complete", "--in", str(good), "--out", str(sq))[0] == 0
    assert parse_square(sq.read_text()).grid[1][:2] == (1, 2)
    assert run(capsys, "ryser-complete", "--in", str(bad))[0] == 1
    holes = tmp_path / "holes.txt"
    holes.write_text("2 3 4\n0 . .\n. . 0\n")
    code, out = run(capsys, "ryser-complete", "--in", str(holes), "--seed", "5")
    assert code == 0 and parse_square(out).grid[0][0] == 0
    assert run(capsys, "ryser-complete", "--in", str(holes), "--seed", "5")[1] == out


def test_loop_commands(tmp_path, capsys):
    loop, cert = tmp_path / "loop.txt", tmp_path / "cert.txt"
    code, out = run(capsys, "loop-build", "--n", "17", "--out", str(loop), "--cert", str(cert))
    assert code == 0 and "5 -> 17" in out
    assert run(capsys, "loop-verify", "--in", str(loop), "--cert", str(cert)) == (0, "VALID\n")
    other = tmp_path / "other.txt"
    run(capsys, "loop-build", "--n", "16", "--out", str(other))
    code, out = run(capsys, "loop-verify", "--in", str(other), "--cert", str(cert))
    assert code == 1 and out.startswith("INVALID")
    q2 = tmp_path / "q2.txt"
    run(capsys, "loop-build", "--n", "5", "--out", str(q2))
    assert run(capsys, "loop-p", "--in", str(q2)) == (0, "P = {0,1,2,3,4}\nFULL\n")
    z = tmp_path / "z.txt"
    z.write_text(format_square(cyclic_square(5)))
    assert run(capsys, "loop-p", "--in", str(z))[0] == 1
    assert run(capsys, "loop-p", "--in", str(z), "--set", "1,2")[1] == "P = {3}\n"
    assert main(["loop-build", "--n", "3"]) == 1


def test_oracle_command(capsys):
    code, out = run(capsys, "oracle", "--n", "5", "--workers", "2")
    assert code == 0 and "scanned 56 reduced squares" in out and out.endswith("AGREE\n")
