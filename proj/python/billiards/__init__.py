"""Billiards in ellipses and convex tables."""

import json

from ._core import *  # noqa: F401,F403
from ._core import BilliardsError, __version__, verify_family_json


def verify_family(family, samples=64, tol=1e-9):
    """Run every family check and return the report as a dict."""
    return json.loads(verify_family_json(family, samples, tol))
