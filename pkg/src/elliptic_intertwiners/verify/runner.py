"""Run suites under derived seeds, isolate failures and serialize the records."""

from __future__ import annotations

import json
import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from ..combs import SampledEqualityPolicy
from ..context import ModuliContext
from ..report import IdentityReport
from .config import SuiteConfig
from .suites import SUITES


def suite_seed(seed: int, name: str) -> int:
    """Per-suite seed: the run seed xor a hash of the suite name."""
    return (seed ^ zlib.crc32(name.encode())) & 0xFFFFFFFF


def _retol(rep: IdentityReport, tol: float) -> IdentityReport:
    ok = rep.error is None and math.isfinite(rep.max_residual) and rep.max_residual <= tol
    return replace(rep, tolerance=tol, passed=ok)


def run_suite(name: str, cfg: SuiteConfig) -> list[IdentityReport]:
    """Every enabled check of one suite; an exception becomes a failed record."""
    suite = SUITES[name]
    ov = cfg.overrides(name)
    ctx = ModuliContext(cfg.tau, cfg.eta, cfg.eps_term, cfg.k_max, seed=suite_seed(cfg.seed, name))
    displayed = cfg.displayed if ov.displayed is None else ov.displayed
    tol_override = ov.tolerance if ov.tolerance is not None else cfg.tolerance
    samples = ov.samples or suite.samples
    out: list[IdentityReport] = []
    for check in suite.checks:
        if check.displayed and not displayed:
            continue
        tol = check.rel_tol or suite.rel_tol
        pol = SampledEqualityPolicy(n_samples=samples, pole_guard=cfg.pole_guard, rel_tol=tol)
        try:
            got = check.run(pol, ctx)
            reps = got if isinstance(got, list) else [got]
        except Exception as exc:  # crash isolation: report and move on
            reps = [IdentityReport.failure(name, check.identity, check.anchor, tol, exc)]
        for rep in reps:
            if not displayed and "(as displayed" in rep.identity:
                continue
            rep = replace(rep, suite=name)
            out.append(_retol(rep, tol_override) if tol_override is not None else rep)
    return out


def run_all(cfg: SuiteConfig, names: list[str], jobs: int = 1) -> list[IdentityReport]:
    """Reports of all requested suites, in the order of ``names`` regardless of ``jobs``."""
    if jobs <= 1 or len(names) <= 1:
        results = [run_suite(n, cfg) for n in names]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(names))) as pool:
            results = list(pool.map(run_suite, names, [cfg] * len(names)))
    return [r for rs in results for r in rs]


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, complex):
        return [_clean(x.real), _clean(x.imag)]
    try:
        f = float(x)
    except (TypeError, ValueError):
        return str(x)
    if isinstance(x, int) or (hasattr(x, "dtype") and x.dtype.kind in "iu"):
        return int(x)
    return f if math.isfinite(f) else str(f)


def to_jsonl(reports: list[IdentityReport], timing: bool = True) -> str:
    return "".join(json.dumps(_clean(r.to_record(timing))) + "\n" for r in reports)
