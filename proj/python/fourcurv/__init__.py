"""Four-dimensional curvature workbench (Python front end).

Tensors are given as the same JSON documents the command line accepts, either
as dicts or as model names such as "CP2".
"""

import json as _json

from . import _core

__version__ = _core.__version__


def _arg(tensor):
    if isinstance(tensor, str):
        tensor = {"kind": "model", "name": tensor}
    return _json.dumps(tensor)


def decompose(tensor):
    return _json.loads(_core.decompose(_arg(tensor)))


def berger(tensor):
    return _json.loads(_core.berger(_arg(tensor)))


def quadratic(tensor):
    return _json.loads(_core.quadratic(_arg(tensor)))


def classify(tensor, samples=8, seed=11):
    return _json.loads(_core.classify(_arg(tensor), samples, seed))


def components(tensor):
    """Full 4x4x4x4 component array as nested lists."""
    return _json.loads(_core.components(_arg(tensor)))


def run_criterion(criterion, seed=20240611, jobs=1):
    return _json.loads(_core.run_criterion(criterion, seed, jobs))


def run(*args):
    """Runs the command line in-process; returns (exit_code, stdout, stderr)."""
    return _core.run([str(a) for a in args])
