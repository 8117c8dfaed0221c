from __future__ import annotations

import json
import subprocess
import sys
import zlib
from dataclasses import replace

import pytest

from elliptic_intertwiners.errors import ConfigError, PoleError, UnknownSuite
from elliptic_intertwiners.verify import cli
from elliptic_intertwiners.verify.config import SuiteConfig, parse_config
from elliptic_intertwiners.verify.runner import run_all, run_suite, suite_seed, to_jsonl
from elliptic_intertwiners.verify.suites import SUITE_NAMES, SUITES, TOPICS, Check, explain

EXPECTED = ("theta", "gamma", "hypergeo", "comb", "sklyanin", "intertwiner", "vertex", "star-triangle", "r-operator", "s-operator", "vacuum")

FAST = """
[moduli]
tau = 0, 2
eta = 0.05, 0.25
[run]
seed = 0
jobs = 1
[suite.theta]
samples = 10
[suite.comb]
samples = 6
[suite.vertex]
samples = 4
"""


def write(tmp_path, text: str, name: str = "run.conf") -> str:
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def records(path) -> list[dict]:
    with open(path) as fh:
        return [json.loads(line) for line in fh]


def test_suite_registry():
    assert SUITE_NAMES == EXPECTED


def test_suite_seed_is_xor_of_crc32():
    for name in EXPECTED:
        assert suite_seed(12345, name) == 12345 ^ zlib.crc32(name.encode())
    assert len({suite_seed(0, n) for n in EXPECTED}) == len(EXPECTED)


def test_list_prints_names_and_anchors(capsys):
    assert cli.main(["list"]) == 0
    out = capsys.readouterr().out
    for name in EXPECTED:
        assert f"\n{name} " in "\n" + out
    assert "anchors:" in out and "Fay trisecant identity" in out


def test_explain_suite_and_topics(capsys):
    assert cli.main(["explain", "vertex"]) == 0
    assert "orthogonality" in capsys.readouterr().out
    text = explain("star-triangle-a")
    flat = " ".join(text.split())
    assert "Frenkel-Turaev" in flat and "normalization sums" in flat and "8omega7" in flat
    assert "Jackson" in explain("frenkel-turaev")
    assert set(TOPICS) >= {"star-triangle-a", "frenkel-turaev"}


def test_explain_unknown_lists_valid_names(capsys):
    with pytest.raises(UnknownSuite) as err:
        explain("nope")
    for name in EXPECTED + ("frenkel-turaev",):
        assert name in str(err.value)
    assert cli.main(["explain", "nope"]) == 2
    assert "star-triangle-a" in capsys.readouterr().err


@pytest.mark.parametrize(
    "text",
    [
        "[moduli]\ntau = 0, -1\n",
        "[moduli]\ntau = 2\n",
        "[moduli]\nkappa = 1, 1\n",
        "[weird]\n",
        "[suite.nope]\n",
        "[run]\nseed = -1\n",
        "[run]\njobs = zero\n",
        "[run]\ntolerance = -1e-9\n",
        "[run]\ndisplayed = maybe\n",
        "seed = 0\n",
        "[run\n",
        "[run]\nseed\n",
        "[policy]\nk_max = 0\n",
        "[suite.theta]\nsamples = 0\n",
    ],
)
def test_config_errors(text, tmp_path):
    with pytest.raises(ConfigError):
        parse_config(text, SUITE_NAMES)
    assert cli.main(["run", "--config", write(tmp_path, text), "--out", str(tmp_path / "o.jsonl")]) == 2


def test_missing_config_file_exits_2(tmp_path):
    assert cli.main(["run", "--config", str(tmp_path / "absent.conf")]) == 2


def test_unknown_suite_flag_exits_2(tmp_path):
    assert cli.main(["run", "--config", write(tmp_path, FAST), "--suite", "bogus"]) == 2


def test_bad_env_seed_exits_2(tmp_path, monkeypatch):
    monkeypatch.setenv("VERIFY_SEED", "abc")
    assert cli.main(["run", "--config", write(tmp_path, FAST), "--suite", "theta"]) == 2


def test_config_parsing_values():
    cfg = parse_config(FAST + "\n[suite.gamma]\nenabled = false\ntolerance = 1e-7\n", SUITE_NAMES)
    assert cfg.tau == 2j and cfg.eta == 0.05 + 0.25j and cfg.jobs == 1
    assert cfg.overrides("theta").samples == 10
    assert cfg.overrides("gamma").enabled is False and cfg.overrides("gamma").tolerance == 1e-7
    assert cfg.overrides("hypergeo").enabled is True


def test_run_writes_jsonl_records(tmp_path):
    out = tmp_path / "r.jsonl"
    code = cli.main(["run", "--config", write(tmp_path, FAST), "--suite", "theta", "--suite", "comb", "--out", str(out)])
    assert code == 0
    recs = records(out)
    assert {r["suite"] for r in recs} == {"theta", "comb"}
    for r in recs:
        assert set(r) >= {"suite", "identity", "anchor", "draws", "max_residual", "mean_residual", "tolerance", "pass", "wall_ms"}
        assert r["pass"] is True


def test_impossible_tolerance_exits_1(tmp_path):
    out = tmp_path / "r.jsonl"
    cfg = write(tmp_path, FAST.replace("jobs = 1\n", "jobs = 1\ntolerance = 1e-30\n"))
    assert cli.main(["run", "--config", cfg, "--suite", "theta", "--out", str(out)]) == 1
    recs = records(out)
    assert all(r["tolerance"] == 1e-30 for r in recs)
    assert not all(r["pass"] for r in recs)


def test_env_seed_overrides_config(tmp_path, monkeypatch):
    base = tmp_path / "a.jsonl"
    other = tmp_path / "b.jsonl"
    cfg = write(tmp_path, FAST)
    assert cli.main(["run", "--config", cfg, "--suite", "comb", "--no-timing", "--out", str(base)]) == 0
    monkeypatch.setenv("VERIFY_SEED", "7")
    assert cli.main(["run", "--config", cfg, "--suite", "comb", "--no-timing", "--out", str(other)]) == 0
    assert base.read_text() != other.read_text()
    monkeypatch.setenv("VERIFY_SEED", "0")
    assert cli.main(["run", "--config", cfg, "--suite", "comb", "--no-timing", "--out", str(other)]) == 0
    assert base.read_text() == other.read_text()


def test_deterministic_across_job_counts():
    cfg = parse_config(FAST, SUITE_NAMES)
    names = ["theta", "comb", "vertex"]
    one = to_jsonl(run_all(cfg, names, jobs=1), timing=False)
    two = to_jsonl(run_all(cfg, names, jobs=3), timing=False)
    assert one == two
    assert [json.loads(x)["suite"] for x in one.splitlines()][0] == "theta"


def test_crash_isolation(monkeypatch):
    def boom(pol, ctx):
        raise PoleError("theta_1(2z) vanishes at z=0")

    suite = SUITES["comb"]
    broken = replace(suite, checks=(Check("exploding check", "nowhere", boom), *suite.checks))
    monkeypatch.setitem(SUITES, "comb", broken)
    cfg = replace(parse_config(FAST, SUITE_NAMES), jobs=1)
    reps = run_suite("comb", cfg)
    assert reps[0].identity == "exploding check" and not reps[0].passed
    assert reps[0].error.startswith("PoleError")
    assert len(reps) == 1 + len(suite.checks)
    assert all(r.passed for r in reps[1:])
    line = json.loads(to_jsonl(reps[:1]).splitlines()[0])
    assert line["pass"] is False and line["max_residual"] == "nan"


def test_displayed_variants_opt_in():
    cfg = parse_config(FAST, SUITE_NAMES)
    plain = run_suite("sklyanin", replace(cfg, suites={}))
    shown = run_suite("sklyanin", replace(cfg, displayed=True, suites={}))
    assert not any("(as displayed" in r.identity for r in plain)
    bad = [r for r in shown if "(as displayed" in r.identity]
    assert bad and not any(r.passed for r in bad)


def test_disabled_suite_is_skipped(tmp_path):
    text = "[run]\njobs = 1\n" + "".join(f"[suite.{n}]\nenabled = false\n" for n in EXPECTED if n != "theta")
    out = tmp_path / "r.jsonl"
    assert cli.main(["run", "--config", write(tmp_path, text + "[suite.theta]\nsamples = 5\n"), "--out", str(out)]) == 0
    assert {r["suite"] for r in records(out)} == {"theta"}


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "elliptic_intertwiners.verify.cli", "list"], capture_output=True, text=True)
    assert proc.returncode == 0 and "star-triangle" in proc.stdout


def test_default_config_shape():
    cfg = SuiteConfig()
    assert cfg.seed == 0 and cfg.tolerance is None and cfg.displayed is False
