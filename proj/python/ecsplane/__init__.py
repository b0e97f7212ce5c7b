"""Compact quotients of plane waves with parallel Weyl curvature."""

import json

from . import _core
from ._core import EcsError, is_generic, run_cli, search_integer_theta, search_zspectral

__all__ = [
    "EcsError",
    "build_dilational",
    "build_translational",
    "curvature_audit",
    "is_generic",
    "run_cli",
    "search_integer_theta",
    "search_zspectral",
    "verify",
]


def build_dilational(n, trace=3, seed=0):
    return json.loads(_core.build_dilational(n, trace, seed))


def build_translational(n, charpoly=None, seed_amp=0.3, period=1.0, theta=1.0, seed=0):
    return json.loads(_core.build_translational(n, charpoly, seed_amp, period, theta, seed))


def verify(document, seed=0):
    """Accepts a dict or JSON text. Returns (passed, checks, report or None)."""
    text = document if isinstance(document, str) else json.dumps(document)
    out = _core.verify(text, seed)
    report = json.loads(out["report"]) if out["report"] is not None else None
    return out["passed"], json.loads(out["checks"]), report


def curvature_audit(spec, samples=20, step=1e-4, seed=0):
    text = spec if isinstance(spec, str) else json.dumps(spec)
    return _core.curvature_audit(text, samples, step, seed)
