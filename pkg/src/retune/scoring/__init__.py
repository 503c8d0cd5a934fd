"""Kernel selection: compiled extension when available, pure Python otherwise.

Set RETUNE_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the kernel-equivalence tests).
"""

import os

from retune.scoring import pykernel

_FORCE_PURE = os.environ.get("RETUNE_PURE_PYTHON", "") not in ("", "0")

if _FORCE_PURE:
    _impl = pykernel
    KERNEL_NAME = "python"
else:
    try:
        from retune.scoring import _ckernel as _impl

        KERNEL_NAME = "compiled"
    except ImportError:
        _impl = pykernel
        KERNEL_NAME = "python"

score_postings = _impl.score_postings


def available_kernels() -> list[str]:
    names = ["python"]
    try:
        from retune.scoring import _ckernel  # noqa: F401

        names.append("compiled")
    except ImportError:
        pass
    return names


def get_kernel(name: str):
    """Fetch a kernel by name ('python' or 'compiled'), for benchmarks and tests."""
    if name == "python":
        return pykernel.score_postings
    if name == "compiled":
        from retune.scoring import _ckernel

        return _ckernel.score_postings
    raise ValueError(f"unknown kernel {name!r}")
