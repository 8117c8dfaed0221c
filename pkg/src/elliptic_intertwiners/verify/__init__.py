"""Batch verification driver: config, suite registry, runner and command line."""

from .config import SuiteConfig, load_config, parse_config
from .runner import run_all, run_suite, suite_seed, to_jsonl
from .suites import SUITE_NAMES, SUITES, TOPICS, explain

__all__ = ["SUITES", "SUITE_NAMES", "SuiteConfig", "TOPICS", "explain", "load_config", "parse_config", "run_all", "run_suite", "suite_seed", "to_jsonl"]
