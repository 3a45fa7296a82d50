"""Selection of the coordinate-descent kernel backend.

The compiled Cython extension is preferred when it importable; otherwise
the pure NumPy twin is used.  The environment variable ``SPCOR_BACKEND``
(``auto``, ``c``, or ``python``) pins the choice at import time, and
:func:`use` overrides it temporarily, which the test suite uses to check
that both backends agree.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

from . import _cdkernels as _python_kernels

_BACKENDS = {"python": _python_kernels}

try:
    from . import _cdkernels_c as _c_kernels

    _BACKENDS["c"] = _c_kernels
except ImportError:
    _c_kernels = None


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def _resolve(name: str):
    if name == "auto":
        name = "c" if "c" in _BACKENDS else "python"
    if name not in _BACKENDS:
        raise ImportError(
            f"kernel backend {name!r} is not available; "
            f"installed backends: {', '.join(available_backends())}"
        )
    return name


_active = _resolve(os.environ.get("SPCOR_BACKEND", "auto"))


def active_backend() -> str:
    """Name of the backend currently in use ('c' or 'python')."""
    return _active


def kernels():
    """Module holding the active ``lasso_cd`` / ``space_cd`` kernels."""
    return _BACKENDS[_active]


def set_backend(name: str) -> None:
    global _active
    _active = _resolve(name)


@contextmanager
def use(name: str):
    """Temporarily switch backends within a with-block."""
    global _active
    previous = _active
    _active = _resolve(name)
    try:
        yield
    finally:
        _active = previous
