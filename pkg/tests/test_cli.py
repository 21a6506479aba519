"""Exit codes, text/json output, determinism of the command-line front end."""

import io
import json

from qnahm.cli import run


def capture(argv):
    out = io.StringIO()
    code = run(argv, out=out)
    return code, out.getvalue()


def test_list_text_and_json():
    code, text = capture(["list"])
    assert code == 0
    assert "andrews-gordon" in text and "alt-3var" in text
    code, text = capture(["list", "--format", "json"])
    assert code == 0
    doc = json.loads(text)
    assert len(doc["identities"]) == 17
    assert doc["identities"][0]["id"] == sorted(
        e["id"] for e in doc["identities"])[0]


def test_verify_success_exit_zero():
    code, text = capture(["verify", "--id", "andrews-gordon", "--k", "2",
                          "--i", "1", "--order", "15", "--no-timing"])
    assert code == 0
    assert text.strip() == "andrews-gordon i=1 k=2 order=15: equal"


def test_verify_json_single_document():
    code, text = capture(["verify", "--id", "prop-43", "--s", "2",
                          "--w", "one", "--order", "12", "--format", "json"])
    assert code == 0
    doc = json.loads(text)
    assert list(doc) == ["reports"]
    (rep,) = doc["reports"]
    assert rep["status"] == "equal"
    assert rep["params"] == {"s": 2, "w": "one"}
    assert "elapsed_ms" in rep


def test_verify_bad_usage_exit_two():
    code, _ = capture(["verify", "--id", "nosuch", "--order", "10"])
    assert code == 2
    code, _ = capture(["verify", "--id", "andrews-gordon", "--k", "2",
                       "--i", "5", "--order", "10"])
    assert code == 2
    code, _ = capture(["verify", "--id", "andrews-gordon", "--k", "x",
                       "--i", "0"])
    assert code == 2


def test_sweep_deterministic_across_jobs():
    argv = ["sweep", "--id", "andrews-gordon", "--k", "1..2", "--i", "all",
            "--order", "14", "--no-timing"]
    code1, text1 = capture(argv + ["--jobs", "1"])
    code4, text4 = capture(argv + ["--jobs", "4"])
    assert code1 == code4 == 0
    assert text1 == text4
    assert len(text1.strip().splitlines()) == 5


def test_sweep_bad_range_exit_two():
    code, _ = capture(["sweep", "--id", "andrews-gordon", "--k", "3..1",
                       "--i", "all", "--order", "10"])
    assert code == 2


def test_selftest_json_counts():
    code, text = capture(["selftest", "--format", "json"])
    assert code == 0
    doc = json.loads(text)["selftest"]
    assert doc["passed"] == 4 and doc["failed"] == 0


def test_selftest_corruption_exit_one():
    code, text = capture(["selftest", "--corrupt-dp"])
    assert code == 1
    assert "FAIL" in text
