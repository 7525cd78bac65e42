"""Python front end for the ditalg C++ core.

Presentations and modules use the same JSON shapes as the command-line tool.
Modules may be given as specs ("S:1", "S:p@2", "J:p@0^2") or as dicts with
"dims", "X" and "maps".
"""

import json

from ._ditalg import Ditalgebra, ParseError, fixture, load, parse

__all__ = ["Ditalgebra", "ParseError", "fixture", "load", "parse", "reduce", "classify"]


def reduce(dit, bound, budget=100):
    """Reduce towards a minimal ditalgebra for modules of dimension <= bound.

    Returns a dict with the recorded steps, the log, the point weights, the
    minimal presentation and the obstruction (None on success).
    """
    return json.loads(dit._reduce(bound, budget))


def classify(dit, bound, budget=100, lambdas=None, seed=1):
    """Classify indecomposables of dimension <= bound; returns the report dict."""
    if lambdas is not None:
        lambdas = [str(x) for x in lambdas]
    return json.loads(dit._classify(bound, budget, lambdas, seed))
