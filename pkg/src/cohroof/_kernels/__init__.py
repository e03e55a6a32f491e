"""Kernel backend selection.

The compiled extension is preferred; the pure-Python module is the
fallback and the reference for parity tests. Set COHROOF_PURE_PYTHON=1
to force the fallback.
"""
import os

from . import _pyref

if os.environ.get("COHROOF_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pyref
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _pyref

BACKEND = _impl.BACKEND
refine = _impl.refine
row_l1 = _impl.row_l1
row_neg = _impl.row_neg
herm_eigvals = _impl.herm_eigvals

STEP0 = _pyref.STEP0
STEP_CAP = _pyref.STEP_CAP
IMPROVE_REL = _pyref.IMPROVE_REL
CERTIFY_SLACK = _pyref.CERTIFY_SLACK
