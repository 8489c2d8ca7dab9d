"""Kernel backend selection.

Prefers the compiled extension; falls back to the pure-Python twin when
the extension is missing (source checkout without a build step).  Set
ANIRABI_KERNEL=py or =cy to force a backend, e.g. for benchmarking.
"""

from __future__ import annotations

import os

def _load_compiled():
    from . import _kernels_cy  # type: ignore[attr-defined]

    # a stale or partial build must not shadow the fallback
    _kernels_cy.pair_recurrence
    _kernels_cy.g_series
    return _kernels_cy


_forced = os.environ.get("ANIRABI_KERNEL", "").strip().lower()

if _forced == "py":
    from . import _kernels_py as _impl

    BACKEND = "python"
elif _forced == "cy":
    _impl = _load_compiled()
    BACKEND = "cython"
else:
    try:
        _impl = _load_compiled()
        BACKEND = "cython"
    except (ImportError, AttributeError):
        from . import _kernels_py as _impl

        BACKEND = "python"

RESCALE_THRESHOLD = 1e100

pair_recurrence = _impl.pair_recurrence
g_series = _impl.g_series
