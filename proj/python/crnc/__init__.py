"""Contraction certificates and simulation for reaction networks."""

import json

from . import _core
from ._core import ParseError, corpus_names, mu_inf, verify_fixtures

__all__ = ["ParseError", "analyze", "certify", "corpus_names", "mu_inf", "network", "run", "simulate", "verify_fixtures"]


def run(*args):
    """Run the command line tool; returns (exit_code, stdout, stderr)."""
    return _core.run([str(a) for a in args])


def network(src):
    """Structure of a network given as DSL text or a bundled name."""
    return json.loads(_core.network_json(src))


def certify(src, candidate=""):
    return json.loads(_core.certify_json(src, candidate))


def _json_command(cmd, target, *extra):
    code, out, err = run(cmd, target, *extra)
    if code == 2:
        raise ValueError(err.strip())
    return code, json.loads(out) if out else None


def analyze(target, *extra):
    """Full report for a file path or bundled name; returns (exit_code, report)."""
    return _json_command("analyze", target, *extra)


def simulate(target, experiment, *extra):
    return _json_command("simulate", target, "--experiment", experiment, *extra)
