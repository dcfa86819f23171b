"""Backend selection for the enumeration kernel.

The compiled extension is used when it was built; otherwise the numpy
implementation takes over.  Set ``DIRACWMC_PURE_PYTHON=1`` to force the
fallback.
"""

from __future__ import annotations

import os

from . import _kernel_py

_compiled = None
if os.environ.get("DIRACWMC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernel as _compiled  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _compiled = None

BACKENDS = {"python": _kernel_py.count_program}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled.count_program

BACKEND = "compiled" if _compiled is not None else "python"
count_program = BACKENDS[BACKEND]


def get_backend(name: str | None = None):
    if name is None:
        return count_program
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} not available; have {sorted(BACKENDS)}") from None
