import io
import json
import subprocess
import sys

import pytest

from stark_units.algebra import from_json_obj, parse_poly
from stark_units.cache import ENV_VAR, resolve_cache_dir
from stark_units.cli import main


def run(*argv, tmp_path=None):
    out = io.StringIO()
    args = list(argv)
    if tmp_path is not None:
        args += ["--cache-dir", str(tmp_path)]
    code = main(args, out)
    return code, out.getvalue()


@pytest.mark.parametrize(
    "argv,first",
    [
        (["sigma", "--q", "3", "--s", "3"], "1 - z"),
        (["sigma", "--q", "3", "--s", "2"], "1"),
        (["special", "--q", "2", "--s", "2"], "X1*X2*Z + X1*X2*Z^2"),
        (["norm", "--q", "3", "X1^2"], "q^(2/2) = 3"),
        (["lseries", "--q", "2", "--N", "0", "--s", "1"], "1 + z"),
    ],
)
def test_documented_outputs(argv, first, tmp_path):
    code, text = run(*argv, tmp_path=tmp_path)
    assert code == 0
    assert text.splitlines()[0] == first


def test_sigma_both_routes(tmp_path):
    code, text = run("sigma", "--q", "2", "--s", "3", "--route", "both", tmp_path=tmp_path)
    assert code == 0
    assert "[ok] exp route = extraction route" in text


def test_json_roundtrip(tmp_path):
    code, text = run("sigma", "--q", "3", "--s", "4", "--format", "json", tmp_path=tmp_path)
    assert code == 0
    obj = json.loads(text)
    p = from_json_obj(obj["result"]["sigma"])
    assert p == parse_poly(obj["result"]["sigma_text"], ring=p.ring)
    assert obj["ok"] is True


def test_output_is_byte_stable(tmp_path):
    a = run("logalg", "--q", "3", "X1^2*X2 + th*X2^4", tmp_path=tmp_path)
    b = run("logalg", "--q", "3", "X1^2*X2 + th*X2^4", tmp_path=tmp_path)
    assert a == b and a[0] == 0


def test_usage_errors_exit_2(tmp_path):
    assert run("logalg", "--q", "3", "X1^^2", tmp_path=tmp_path)[0] == 2
    assert run("sigma", "--q", "6", "--s", "2", tmp_path=tmp_path)[0] == 2
    assert run("sigma", "--q", "3", tmp_path=tmp_path)[0] == 2
    assert run("polylog", "--q", "2", "--N", "5", "--n", "1", "--r", "1", tmp_path=tmp_path)[0] == 2


def test_verification_failure_exit_1(tmp_path):
    # the stated normalization does not hold for r = 2
    code, text = run("polylog", "--q", "2", "--N", "3", "--n", "2", "--r", "2", "--prec", "3", tmp_path=tmp_path)
    assert code == 1 and "FAILED" in text
    code, _ = run("polylog", "--q", "2", "--N", "3", "--n", "2", "--r", "2", "--prec", "3",
                  "--normalization", "termwise", tmp_path=tmp_path)
    assert code == 0


def test_cache_written_and_reused(tmp_path):
    run("special", "--q", "3", "--s", "3", tmp_path=tmp_path)
    assert (tmp_path / "q3" / "S_3.poly").exists()
    run("sigma", "--q", "3", "--s", "4", tmp_path=tmp_path)
    assert (tmp_path / "q3" / "sigma_4.poly").exists()


def test_cache_dir_precedence(monkeypatch, tmp_path):
    monkeypatch.delenv(ENV_VAR, raising=False)
    assert str(resolve_cache_dir(None)) == "cache"
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "env"))
    assert resolve_cache_dir(None) == tmp_path / "env"
    assert resolve_cache_dir(str(tmp_path / "flag")) == tmp_path / "flag"


def test_search_and_gauss_norm(tmp_path):
    code, text = run("search", "--q", "2", "--max-degree", "2", tmp_path=tmp_path)
    assert code == 0 and "X1" in text
    code, text = run("norm", "--q", "3", "t1 - th", tmp_path=tmp_path)
    assert code == 0 and text.startswith("q^(2/2) = 3")


def test_module_entry_point(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "stark_units", "sigma", "--q", "3", "--s", "3", "--cache-dir", str(tmp_path)],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0 and res.stdout.splitlines()[0] == "1 - z"


def test_selfcheck_quick_reports_known_failures(tmp_path):
    code, text = run("selfcheck", "--q", "3", "--quick", tmp_path=tmp_path)
    failed = [line for line in text.splitlines() if "[FAILED]" in line]
    assert code == 1
    # sigma_4 is 1 - (t1+t2+t3+t4-th) z, not the product form; the r = 2
    # polylog case needs the termwise normalization
    assert len(failed) == 2
    assert "sigma_4" in failed[0] and "(3,5,2,2)" in failed[1]
