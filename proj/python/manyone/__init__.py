"""Many-to-one maps over finite fields.

Fields are written "p^n" or "p^n/c0,...,cn"; polynomials as coefficient lists low-to-high,
e.g. "0,1,0,1" for x^3 + x.
"""

import json

from . import _manyone
from ._manyone import BudgetError, HypothesisError, ParseError, ScaleError, families

__all__ = [
    "BudgetError",
    "HypothesisError",
    "ParseError",
    "ScaleError",
    "analyze",
    "check",
    "count_formula",
    "families",
    "predict",
    "search",
    "verify",
]


def analyze(field, poly, m=None, star=False):
    """Fiber histogram, admissible m and per-m reports as a dict."""
    return json.loads(_manyone.analyze(field, poly, m, star))


def predict(field, h, r, s, m):
    """(verdict, reason) for x^r h(x^s) being m-to-1 on F_q^*."""
    return _manyone.predict(field, h, r, s, m)


def check(field, h, r, s, m):
    """Brute-force m-to-1 test of x^r h(x^s) on F_q^*."""
    return _manyone.check(field, h, r, s, m)


def count_formula(q, m):
    return int(_manyone.count_formula(q, m))


def verify(family, grid=None, seed=1, jobs=0, all_m=False):
    """Run a verification family; returns the report dict (schema manyone-report/1)."""
    grid = {k: str(v) for k, v in (grid or {}).items()}
    return json.loads(_manyone.verify(family, grid, seed, jobs, all_m))


def search(field, s, degree, m, r=(), budget=1 << 27, limit=0):
    return json.loads(_manyone.search(field, s, degree, m, list(r), budget, limit))
