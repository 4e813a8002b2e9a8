import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from okalab.cli import dumps, parse_complex, run

FIXTURES = Path(__file__).parent / "fixtures"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    return json.loads(out)


@pytest.mark.parametrize("name", ["dplus", "dplus-dminus", "reducible3"])
def test_decide_fixtures(name):
    code, out, _ = call("oka", "decide", "--config", f"examples/{name}.json")
    assert code == 0
    assert out == (FIXTURES / f"decide_{name}.json").read_text()


@pytest.mark.parametrize("handle, expected", [("fplus", 1), ("fminus", -1), ("fplus*fminus", 0), ("fplus_lam", 1)])
def test_pairing(handle, expected):
    assert call_json("pairing", "--handle", handle)["pairing"] == expected


def test_stein_eval_zero():
    r = call_json("stein", "eval", "--z", "1,0", "--w", "1,0")
    assert r["value"] == [0.0, 0.0]
    assert r["rel_error_bound"] <= 1e-12


def test_stein_monodromy():
    r = call_json("stein", "monodromy", "--z", "2,0", "--w", "0.5,0.3")
    assert r["z_loop_factor"] == pytest.approx([0.5, 0.3], abs=1e-10)
    assert r["w_loop_factor"] == pytest.approx([1.0, 0.0], abs=1e-10)


def test_stein_zeros():
    r = call_json("stein", "zeros", "--z", "1,0", "--r1", "0.5", "--r2", "600")
    assert r["count"] == 2 and r["sheet_indices"] == [0, 1]


def test_lattice():
    assert call_json("lattice", "pair", "--u", "ie1", "--v", "e2")["value"] == -2
    r = call_json("lattice", "verdict", "--config", "examples/takayama.json")
    assert r["obstructed"] and r["witness"] == ["ie1", "e2"] and r["value"] == -2


def test_curve():
    assert call_json("curve", "count", "--poly", "z - 1", "--radius", "7")["count"] == 3
    assert call_json("curve", "count", "--stein-lam", "1,0", "--radius", "5")["count"] == 0
    assert call_json("curve", "phicheck", "--samples", "200")["injective_on_samples"]
    r = call_json("curve", "compose", "--poly", "z + w - 2", "--zeta", "0,0")
    assert r["value"] == [0.0, 0.0] and r["nondegenerate"]


def test_sweep_csv_and_json():
    code, out, _ = call("sweep", "pairing", "--rz", "1,2", "--rw", "1.3")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "r_z,r_w,pairing,residual,samples_used,intersection_count"
    assert len(lines) == 3
    rows = call_json("sweep", "curve", "--poly", "z - 1", "--radii", "1,7", "--format", "json")
    assert [r["count"] for r in rows] == [1, 3]


def test_output_is_deterministic():
    argv = ("sweep", "zeros", "--z", "1,0", "--r1", "0.5", "--r2", "2,600")
    assert call(*argv) == call(*argv)


@pytest.mark.parametrize(
    "argv, code",
    [
        (("frobnicate",), 1),
        (("pairing", "--handle", "fzero"), 2),
        (("stein", "eval", "--z", "0,0", "--w", "1,0"), 2),
        (("stein", "zeros", "--z", "1,0", "--r1", "1.0005", "--r2", "3"), 2),
        (("oka", "decide", "--config", "nowhere.json"), 2),
        (("stein", "eval", "--z", "1,0"), 2),
        (("pairing", "--rw", "1.0"), 2),
        (("curve", "count", "--stein-lam", "0,0", "--radius", "3"), 3),
        (("stein", "eval", "--z", "1,0", "--w", "2,0", "--target", "1e-15"), 3),
    ],
)
def test_exit_codes(argv, code):
    got, out, err = call(*argv)
    assert got == code
    assert out == "" and err.startswith("okalab:")


def test_parse_complex():
    assert parse_complex("1.5,-2") == complex(1.5, -2)
    assert parse_complex("1+2i") == 1 + 2j


def test_dumps_format():
    assert dumps({"b": 1 / 3, "a": 2j}) == '{"b":0.33333333333333331,"a":[0.0,2.0]}'


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "okalab", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("okalab ")
