"""Two-dimensional self-stabilizing Byzantine clock synchronization."""

import json as _json

from . import _ssbcs
from ._ssbcs import (
    ConfigError,
    UsageError,
    check_stb,
    check_weak,
    circ_sort,
    fta,
    fta_values,
    ring_dist,
    ring_med,
    wrap_add,
    wrap_sub,
)


def _text(config):
    if config is None:
        return "{}"
    if isinstance(config, str):
        return config
    return _json.dumps(config)


def derive(config=None, strict=True):
    """Derived constants for a scenario given as a dict or JSON text."""
    return _json.loads(_ssbcs.derive(_text(config), strict))


def validate(config=None, strict=True):
    """List of invariant violations; empty when the configuration is valid."""
    return list(_ssbcs.validate(_text(config), strict))


def run(config=None, seed=1, trace=False):
    result, lines = _ssbcs.run(_text(config), seed, trace)
    out = _json.loads(result)
    if trace:
        return out, [_json.loads(x) for x in lines.splitlines() if x]
    return out


def campaign(config=None, seeds=None):
    return _json.loads(_ssbcs.campaign(_text(config), list(seeds or [])))


def lemma1(config=None, honest_mws=2, intervals=100000, seed=1):
    return _json.loads(_ssbcs.lemma1(_text(config), honest_mws, intervals, seed))


__all__ = [
    "ConfigError",
    "UsageError",
    "campaign",
    "check_stb",
    "check_weak",
    "circ_sort",
    "derive",
    "fta",
    "fta_values",
    "lemma1",
    "ring_dist",
    "ring_med",
    "run",
    "validate",
    "wrap_add",
    "wrap_sub",
]
