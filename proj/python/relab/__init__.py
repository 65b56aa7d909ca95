"""Finite-dimensional linear relations, sectorial extensions and form sums."""

import json

from ._relab import *  # noqa: F401,F403
from ._relab import _gen_random, _run_text


def run_text(text, source="<string>"):
    """Run an instance given as JSON text. Returns (status, report dict)."""
    status, report = _run_text(text, source)
    return status, json.loads(report)


def run_instance(instance, source="<dict>"):
    return run_text(json.dumps(instance), source)


def gen_random(seed, n, profile):
    """Seeded random instance as a dict."""
    return json.loads(_gen_random(seed, n, profile))
