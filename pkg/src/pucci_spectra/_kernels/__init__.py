"""Kernel backend selection: compiled extension if available, else pure Python.

``PUCCI_SPECTRA_PURE=1`` forces the pure backend regardless of what is
installed (used by the parity tests and the benchmark).
"""
import os

from . import pure as _pure

_force_pure = os.environ.get("PUCCI_SPECTRA_PURE", "") == "1"
_compiled = None
if not _force_pure:
    try:
        from . import _core as _compiled
    except ImportError:
        _compiled = None

if _compiled is not None:
    radial_rk4 = _compiled.radial_rk4
    linear_sweeps = _compiled.linear_sweeps
    BACKEND = "compiled"
else:
    radial_rk4 = _pure.radial_rk4
    linear_sweeps = _pure.linear_sweeps
    BACKEND = "pure"


def backend():
    """Name of the active kernel backend: 'compiled' or 'pure'."""
    return BACKEND
