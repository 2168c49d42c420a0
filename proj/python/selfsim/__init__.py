"""Python access to the selfsim library."""

import json

from ._core import SelfsimError, __version__, isotropy_orders, run_cli, selftest
from . import _core

__all__ = ["SelfsimError", "__version__", "analyze", "cli", "isotropy_orders", "k_theory", "run_cli", "selftest"]


def analyze(A, B):
    """Contraction coefficient, regularity verdict and decomposition as a dict."""
    return json.loads(_core.analyze_json(A, B))


def k_theory(A, B):
    return json.loads(_core.k_theory_json(A, B))


def cli(*args):
    """Run a subcommand and parse its JSON output; raises on a nonzero exit."""
    code, out, err = run_cli([str(a) for a in args])
    if code != 0:
        raise SelfsimError(err.strip() or out.strip())
    return json.loads(out)
