"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise, or
when ``WDSTAB_PURE_PYTHON`` is set to a non-empty value other than ``0``, the
pure-Python ``_pykernels`` module is used. Both expose the same functions.
"""
import os

from . import _pykernels


def available():
    """Return every importable backend module, compiled first."""
    found = []
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found.append(_ckernels)
    found.append(_pykernels)
    return found


def _select():
    if os.environ.get("WDSTAB_PURE_PYTHON", "") not in ("", "0"):
        return _pykernels
    return available()[0]


kernels = _select()
BACKEND = kernels.NAME
