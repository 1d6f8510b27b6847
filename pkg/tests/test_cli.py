import csv
import io
import json
import subprocess
import sys

import pytest

from liouville.arithmetic import SignTable, liouville_point
from liouville.cli import run


def call(*argv):
    buf = io.StringIO()
    status = run([str(a) for a in argv], stdout=buf)
    return status, buf.getvalue()


def test_report_text():
    status, out = call("report", "--x", 100000, "--t", 1)
    assert status == 0
    lines = out.splitlines()
    assert lines[2].split()[:3] == ["+1", "+1", "24873"]
    assert lines[5].split()[:3] == ["-1", "-1", "25161"]
    assert "100000/4 = 25000" in lines[2]
    assert lines[6].endswith(": 68")


def test_report_json_consistent():
    status, out = call("report", "--x", 12345, "--t", 2, "--format", "json")
    doc = json.loads(out)
    c = {r["pattern"]: r["actual"] for r in doc["table"]}
    assert sum(c.values()) == 12345
    assert c["++"] + c["--"] - c["+-"] - c["-+"] == doc["autocorrelation"]
    assert doc["table"][0]["expected"] == "12345/4 = 3086 rem 1"
    assert "wall_clock_seconds" not in doc["metadata"]
    _, timed = call("report", "--x", 100, "--format", "json", "--timing")
    assert "wall_clock_seconds" in json.loads(timed)["metadata"]


def test_report_csv():
    _, out = call("report", "--x", 100000, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["lambda(n)", "lambda(n+t)", "actual", "expected", "density"]
    assert [r[2] for r in rows[1:]] == ["24873", "24983", "24983", "25161"]


def test_constant():
    assert call("constant", "--digits", 38) == (0, "1.16232463762392978595979733583622409170\n")
    doc = json.loads(call("constant", "--digits", 5, "--format", "json")[1])
    assert doc["value"] == "1.16232"


def test_autocorr():
    assert call("autocorr", "--t", 0, "--x", 1000) == (0, "1000\n")
    assert call("autocorr", "--t", 1, "--x", "1e5") == (0, "68\n")
    assert call("autocorr", "--t", -1, "--x", 20)[1] == "1\n"  # A(1, 20) - lambda(20) lambda(21)


def test_patterns_outputs():
    doc = json.loads(call("patterns", "--x", 20, "--t", 1, "--format", "json")[1])
    assert doc["counts"] == {"++": 3, "+-": 5, "-+": 5, "--": 7}
    assert doc["densities"]["--"] == "0.350000"
    doc = json.loads(call("patterns", "--x", 10, "--t", 0, "--format", "json")[1])
    assert doc["counts"] == {"+": 5, "-": 5}
    doc = json.loads(call("patterns", "--x", 100, "--offsets", "0,1,2", "--format", "json")[1])
    assert doc["counts"]["+++"] == 13 and sum(doc["counts"].values()) == 100
    doc = json.loads(call("patterns", "--x", 20, "--offsets", "0,1", "--signs=-1,-1", "--format", "json")[1])
    assert doc["counts"] == {"--": 7}
    rows = list(csv.reader(io.StringIO(call("patterns", "--x", 20, "--format", "csv")[1])))
    assert rows[4] == ["--", "20", "1", "7", "0.350000"]


def test_sieve_command(tmp_path):
    status, out = call("sieve", "--hi", 10, "--list", "--format", "json")
    doc = json.loads(out)
    assert doc["values"] == [1, -1, -1, 1, -1, 1, -1, -1, 1, 1]
    assert doc["counts"] == {"+1": 5, "-1": 5}
    doc = json.loads(call("sieve", "--hi", 4, "--mobius", "--list", "--format", "json")[1])
    assert doc["values"] == [1, -1, -1, 0]
    path = tmp_path / "t.bin"
    assert call("sieve", "--lo", 5, "--hi", 500, "--dump", path)[0] == 0
    table = SignTable.load(path)
    assert (table.lo, table.hi) == (5, 500)
    assert all(table[n] == liouville_point(n) for n in range(5, 501))


def test_sums_command():
    doc = json.loads(call("sums", "--checkpoints", "10,20,1000", "--t", 1, "--extremes", "--format", "json")[1])
    rows = doc["rows"]
    assert [r["L"] for r in rows[:2]] == [0, -4]
    assert rows[0]["M"] == -1
    assert "autocorr_log_avg_t1" in rows[0]
    assert rows[0]["lil-normalizer"] is not None
    assert set(doc["extremes"]) == {"L_over_lil", "M_over_sqrt"}
    out = call("sums", "--checkpoints", "100,1000", "--format", "csv")[1]
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:3] == ["x", "L", "M"] and len(rows) == 3


def test_sums_first_positive_gate():
    assert call("sums", "--first-positive", 10**9)[0] == 2
    doc = json.loads(call("sums", "--first-positive", 1000, "--format", "json")[1])
    assert doc["first_positive_L"] is None


def test_twisted_command():
    doc = json.loads(call("twisted", "--x", 4, "--alpha", "1/2", "--format", "json")[1])
    assert doc["re"] == 0 and doc["im"] == 0
    doc = json.loads(call("twisted", "--x", 4, "--grid", 2, "--format", "json")[1])
    assert doc["alpha_max"] == "0" and doc["magnitude"] == 0
    assert call("twisted", "--x", 4, "--grid", 1)[0] == 2


def test_normality_command(tmp_path):
    path = tmp_path / "digits.bin"
    doc = json.loads(call("normality", "--x", 100000, "--bases", "4", "--modes", "overlapping",
                          "--emit-digits", path, "--format", "json")[1])
    e = doc["entries"][0]
    assert e["counts"] == [25161, 24983, 24983, 24873] and e["passed"] is True
    data = path.read_bytes()
    assert len(data) == 100000 and data[0] == 2
    assert call("normality", "--x", 10, "--modes", "diagonal")[0] == 2
    packed = tmp_path / "bits.bin"
    call("normality", "--x", 16, "--bases", "2", "--emit-digits", packed, "--emit-base", 2,
         "--digit-format", "packed")
    assert packed.read_bytes()[0] == 0b10010100


def test_selftest_and_fault():
    status, out = call("selftest")
    assert status == 0
    names = [line.split()[1] for line in out.splitlines() if line.startswith(("PASS", "FAIL"))]
    assert len(names) >= 6
    status, out = call("selftest", "--inject-fault")
    assert status == 1
    assert "FAIL  sieve-vs-point-liouville" in out


def test_usage_errors(capsys):
    assert call("frobnicate")[0] == 2
    assert call("report", "--x", "abc")[0] == 2
    assert call("sieve", "--lo", 10, "--hi", 2)[0] == 2
    assert call("report", "--t", 0)[0] == 2


def test_memory_cap_is_runtime_error(monkeypatch):
    monkeypatch.setenv("LIOUVILLE_MEMORY_CAP", "100")
    assert call("autocorr", "--x", 100000)[0] == 1


def test_output_file(tmp_path):
    path = tmp_path / "out.txt"
    assert call("constant", "--digits", 10, "--output", path) == (0, "")
    assert path.read_text() == "1.1623246376\n"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "liouville", "autocorr", "--x", "20"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "0\n"
    proc = subprocess.run([sys.executable, "-m", "liouville", "nope"], capture_output=True, text=True, check=False)
    assert proc.returncode == 2


@pytest.mark.parametrize("argv", [
    ("report", "--x", 30000, "--t", 3, "--format", "json"),
    ("normality", "--x", 30000, "--bases", "2,4,8", "--format", "json"),
    ("sums", "--checkpoints", "1000,30000", "--t", 2, "--format", "json"),
])
def test_worker_count_does_not_change_output(argv):
    outs = {call(*argv, "--workers", w, "--segment-length", 4099)[1] for w in (1, 4, 8)}
    outs.add(call(*argv)[1])
    assert len(outs) == 1
