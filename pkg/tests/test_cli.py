import json
import subprocess
import sys
from pathlib import Path

import pytest

from steenrod_excess import cli
from steenrod_excess.conditions import check_cong22

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name,argv", [
    ("product_p2_sq2_sq2.txt", ["product", "-p", "2", "Sq(2)", "Sq(2)"]),
    ("product_p2_sq2_sq2.json", ["product", "-p", "2", "Sq(2)", "Sq(2)", "--format", "json"]),
    ("convert_p2_sq01.txt", ["convert", "-p", "2", "--to", "admissible", "Sq(0,1)"]),
    ("convert_p2_sq01.json", ["convert", "-p", "2", "--to", "admissible", "Sq(0,1)", "--format", "json"]),
    ("basis_admissible_p2_n7.txt", ["basis", "--kind", "admissible", "-p", "2", "-n", "7"]),
    ("basis_milnor_p3_n12.txt", ["basis", "--kind", "milnor", "-p", "3", "-n", "12"]),
    ("basis_dual_p2_n6_i2.txt", ["basis", "--kind", "dual", "-p", "2", "-n", "6", "-i", "2"]),
])
def test_golden(capsys, name, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out.encode() == (GOLDEN / name).read_bytes()


def test_basis_json_schema(capsys):
    code, out, _ = run(capsys, "basis", "--kind", "filtration", "-p", "2", "-n", "7", "-i", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["schema"] == 1 and data["count"] == 3 and data["level"] == 3
    assert [e["excess"] for e in data["entries"]] == [7, 5, 3]


def test_excess(capsys):
    assert run(capsys, "excess", "-p", "3", "--word", "b P1")[1] == "3\n"
    assert run(capsys, "excess", "-p", "2", "--word", "Sq^4 Sq^2 Sq^1")[1] == "1\n"
    assert run(capsys, "excess", "-p", "2", "Sq(0,1)")[1] == "1\n"


def test_output_is_deterministic(capsys):
    argv = ["verify", "--family", "a5", "-p", "2", "--max-degree", "12"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second


def test_verify_json_lines(capsys):
    code, out, err = run(capsys, "verify", "--family", "a5", "-p", "2", "--max-degree", "24")
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert lines[-1]["summary"]["failed"] == 0
    assert all(rec["status"] == "pass" for rec in lines[:-1])
    assert "wall time" in err


def test_verify_ses_p3(capsys):
    code, out, _ = run(capsys, "verify", "--family", "ses", "-p", "3", "--cap", "16")
    assert code == 0
    assert json.loads(out.splitlines()[-1])["summary"]["failed"] == 0


def test_verify_level_range(capsys):
    code, out, _ = run(capsys, "verify", "--family", "e3", "-p", "2", "-i", "0..0")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()[:-1]]
    assert records
    assert all(r["indices"].get("i", 0) == 0 for r in records)


def test_verify_text_format(capsys):
    code, out, _ = run(capsys, "verify", "--family", "free_dims", "-p", "2", "--format", "text")
    assert code == 0
    assert "free_dims" in out


def test_verify_failure_exits_one(capsys, monkeypatch):
    def literal_cong22(ctx, max_degree=8):
        return check_cong22(ctx, max_degree=max_degree, literal=True)

    monkeypatch.setitem(cli.FAMILIES, "cong22_literal", literal_cong22)
    code, out, _ = run(capsys, "verify", "--family", "cong22_literal", "-p", "2")
    assert code == 1
    failed = [json.loads(line) for line in out.splitlines()[:-1] if '"fail"' in line]
    assert failed and "witness" in failed[0]


def test_usage_errors(capsys):
    assert run(capsys, "product", "-p", "2", "Sq(1", "Sq(1)")[0] == 2
    assert run(capsys, "verify", "--family", "nope")[0] == 2
    assert run(capsys, "verify", "--family", "theta_n", "-p", "2")[0] == 2
    assert run(capsys, "verify", "--family", "comodule", "--max-degree", "3")[0] == 2
    assert run(capsys, "basis", "--kind", "dual", "-n", "3")[0] == 2
    assert run(capsys, "excess", "-p", "2")[0] == 2
    assert run(capsys, "product", "-p", "4", "Sq(1)", "Sq(1)")[0] == 2
    with pytest.raises(SystemExit) as err:
        cli.main(["basis", "--kind", "bogus", "-n", "3"])
    assert err.value.code == 2


def test_cap_exceeded_exit(capsys):
    code, _, err = run(capsys, "product", "-p", "2", "--cap", "10", "Sq(8)", "Sq(8)")
    assert code == 3
    assert "cap" in err


def test_seeded_family(capsys):
    code, out, _ = run(capsys, "verify", "--family", "theta_appendix", "-p", "3", "--seed", "4")
    assert code == 0


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "steenrod_excess.cli", "product", "-p", "3", "P(1)", "b"],
                          capture_output=True, text=True, check=True)
    # P^1 b = b P^1 + Q_1
    assert proc.stdout.strip() == "Q(0,1) + Q(1) P(1)"
