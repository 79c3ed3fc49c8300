"""Exact staircase certificates for semidefinite feasibility systems.

Instances and reports are plain dicts in the spectra-cert JSON format
(rationals as "p/q" strings).
"""

import json

from . import _core
from ._core import InvalidSpecError, ParseError, ResampleExhausted

__version__ = _core.__version__

__all__ = [
    "analyze",
    "verify",
    "generate",
    "probe",
    "import_sdpa",
    "is_psd",
    "ParseError",
    "ResampleExhausted",
    "InvalidSpecError",
]


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def analyze(instance, mode="exact", hints=None, classify=True):
    """Decide feasibility; returns the report dict."""
    h = None if hints is None else _dump(hints)
    return json.loads(_core.analyze(_dump(instance), mode, h, classify))


def verify(instance, report):
    """Re-check a report against its instance; returns the verification dict."""
    return json.loads(_core.verify(_dump(instance), _dump(report)))


def generate(kind, n, m, k=None, p=0, block_sizes=(), entry_bound=3, seed=0):
    """Random instance with a ground_truth block."""
    return json.loads(_core.generate(kind, n, m, k, p, list(block_sizes), entry_bound, seed))


def probe(instance, C):
    """Float duality-gap probe for objective C on a feasible instance."""
    return json.loads(_core.probe(_dump(instance), _dump(C)))


def import_sdpa(text):
    """Instance dict from SDPA sparse text (single psd block)."""
    return json.loads(_core.import_sdpa(text))


def is_psd(matrix):
    """Exact psd test of a symmetric matrix given as rows of rationals."""
    return _core.is_psd(_dump([[str(x) for x in row] for row in matrix]))
