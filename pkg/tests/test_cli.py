import io
from contextlib import redirect_stdout

import pytest

from k3cm.cli import main


def run(args):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(args)
    return code, buf.getvalue()


def test_discs_table():
    code, out = run(["discs", "--max", "300"])
    assert code == 0
    lines = out.splitlines()
    assert lines[1].startswith("1\t-3 -4 -7 -8")
    assert "-235" in out and "-280" in out


def test_ap_lines():
    code, out = run(["ap", "--disc", "-88", "--primes", "25"])
    assert code == 0
    rows = dict(line.split("\t") for line in out.splitlines())
    assert rows["23"] == "42"
    assert rows["7"] == "0"      # inert
    assert rows["11"] == "ram"   # ramified


def test_count_single_lambda(tmp_path):
    cache = tmp_path / "c.cache"
    code, out = run(["--cache", str(cache), "count", "--family", "xlm",
                     "--prime", "19", "--lambda", "15"])
    assert code == 0
    lam, n, t_alg, c1, c2 = out.strip().split("\t")
    assert lam == "15"
    # 5/32 = 15 mod 19 is the disc -88 member: one candidate is +-|a_19| = 6
    assert "6" in (c1.lstrip("-"), c2.lstrip("-"))
    assert cache.exists() and "xlm 19 15" in cache.read_text()


def test_count_excluded_prime():
    code, _ = run(["count", "--family", "xlm", "--prime", "5"])
    assert code == 2


def test_verify_fixture_surface():
    code, out = run(["verify", "--surface", "ex_627"])
    assert code == 0
    assert "disc NS = -627" in out
    assert "T(X) = [22,11,34]" in out


def test_tlattice_output():
    code, out = run(["tlattice", "--surface", "ex_715"])
    assert code == 0
    assert out.strip() == "-715\t[22,11,38]"


def test_regression_subset():
    code, out = run(["regression", "--subset", "extremal"])
    assert code == 0
    assert "PASS" in out


def test_search_small():
    code, out = run(["search", "--disc", "-88", "--primes", "3"])
    assert code == 0
    assert out.splitlines()[0].startswith("5/32\t32\t3")


def test_lift_system_file(tmp_path):
    system = tmp_path / "sq.system"
    system.write_text("[system]\nvars = x\neq1 = 1:2 + -4/9:0\n")
    code, out = run(["lift", "--system", str(system), "--prime", "7"])
    assert code == 0
    assert out.strip() in ("x\t2/3", "x\t-2/3")


def test_missing_file_is_input_error():
    code, _ = run(["verify", "--surface", "/nonexistent.surf"])
    assert code == 2
