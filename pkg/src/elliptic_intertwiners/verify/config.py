"""Line-based run configuration: ``[section]`` headers and ``key = value`` lines.

Sections and keys::

    [moduli]
    tau = 0, 2            # re, im
    eta = 0.05, 0.25

    [policy]
    eps_term = 1e-16
    k_max = 256
    pole_guard = 1e-4

    [run]
    seed = 0
    jobs = 1
    out = report.jsonl
    tolerance = 1e-8      # overrides every identity's tolerance
    displayed = false     # also run the as-displayed variants

    [suite.<name>]
    enabled = true
    samples = 30
    tolerance = 1e-9
    displayed = false

``#`` starts a comment. Unknown sections or keys are errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import ConfigError

MODULI_KEYS = {"tau", "eta"}
POLICY_KEYS = {"eps_term", "k_max", "pole_guard"}
RUN_KEYS = {"seed", "jobs", "out", "tolerance", "displayed"}
SUITE_KEYS = {"enabled", "samples", "tolerance", "displayed"}


@dataclass
class SuiteOverrides:
    enabled: bool = True
    samples: int | None = None
    tolerance: float | None = None
    displayed: bool | None = None


@dataclass
class SuiteConfig:
    tau: complex = 2j
    eta: complex = 0.05 + 0.25j
    eps_term: float = 1e-16
    k_max: int = 256
    pole_guard: float = 1e-4
    seed: int = 0
    jobs: int = 1
    out: str | None = None
    tolerance: float | None = None
    displayed: bool = False
    suites: dict[str, SuiteOverrides] = field(default_factory=dict)

    def overrides(self, name: str) -> SuiteOverrides:
        return self.suites.get(name, SuiteOverrides())


def _complex(text: str, where: str) -> complex:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"{where}: expected '<re>, <im>', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _float(text: str, where: str, positive: bool = True) -> float:
    try:
        x = float(text)
    except ValueError:
        raise ConfigError(f"{where}: not a number: {text!r}") from None
    if not math.isfinite(x) or (positive and x <= 0):
        raise ConfigError(f"{where}: must be a positive finite number, got {text!r}")
    return x


def _int(text: str, where: str, minimum: int | None = None) -> int:
    try:
        x = int(text)
    except ValueError:
        raise ConfigError(f"{where}: not an integer: {text!r}") from None
    if minimum is not None and x < minimum:
        raise ConfigError(f"{where}: must be >= {minimum}, got {x}")
    return x


def _bool(text: str, where: str) -> bool:
    t = text.lower()
    if t in ("true", "yes", "on", "1"):
        return True
    if t in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{where}: expected true/false, got {text!r}")


def parse_config(text: str, known_suites: tuple[str, ...]) -> SuiteConfig:
    cfg = SuiteConfig()
    section: str | None = None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"line {n}"
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"{where}: unterminated section header {line!r}")
            section = line[1:-1].strip()
            if section.startswith("suite."):
                name = section[len("suite."):]
                if name not in known_suites:
                    raise ConfigError(f"{where}: unknown suite {name!r}; valid: {', '.join(known_suites)}")
                cfg.suites.setdefault(name, SuiteOverrides())
            elif section not in ("moduli", "policy", "run"):
                raise ConfigError(f"{where}: unknown section [{section}]")
            continue
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {line!r}")
        if section is None:
            raise ConfigError(f"{where}: key outside of any section")
        key, value = (p.strip() for p in line.split("=", 1))
        where = f"line {n} [{section}] {key}"
        if section == "moduli":
            if key not in MODULI_KEYS:
                raise ConfigError(f"{where}: unknown key")
            setattr(cfg, key, _complex(value, where))
        elif section == "policy":
            if key not in POLICY_KEYS:
                raise ConfigError(f"{where}: unknown key")
            setattr(cfg, key, _int(value, where, 1) if key == "k_max" else _float(value, where))
        elif section == "run":
            if key not in RUN_KEYS:
                raise ConfigError(f"{where}: unknown key")
            if key == "seed":
                cfg.seed = _int(value, where, 0)
            elif key == "jobs":
                cfg.jobs = _int(value, where, 1)
            elif key == "out":
                cfg.out = value
            elif key == "tolerance":
                cfg.tolerance = _float(value, where)
            else:
                cfg.displayed = _bool(value, where)
        else:
            ov = cfg.suites[section[len("suite."):]]
            if key not in SUITE_KEYS:
                raise ConfigError(f"{where}: unknown key")
            if key == "enabled":
                ov.enabled = _bool(value, where)
            elif key == "samples":
                ov.samples = _int(value, where, 1)
            elif key == "tolerance":
                ov.tolerance = _float(value, where)
            else:
                ov.displayed = _bool(value, where)
    if cfg.tau.imag <= 0:
        raise ConfigError("moduli: Im tau must be positive")
    if (2 * cfg.eta).imag <= 0:
        raise ConfigError("moduli: Im(2 eta) must be positive")
    return cfg


def load_config(path: str, known_suites: tuple[str, ...]) -> SuiteConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, known_suites)
