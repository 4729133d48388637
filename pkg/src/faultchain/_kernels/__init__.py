"""Hot counting kernels with backend selection at import time.

The compiled Cython module is preferred; the NumPy implementation in
:mod:`faultchain._kernels.pure` is used when the extension is absent or
when ``FAULTCHAIN_PURE_KERNELS`` is set in the environment.
"""

import os

from . import pure

_impl = pure
if not os.environ.get("FAULTCHAIN_PURE_KERNELS"):
    try:
        from . import _ct as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pure

counts1 = _impl.counts1
counts2 = _impl.counts2
counts3 = _impl.counts3
h_bits = _impl.h_bits
mi_bits = _impl.mi_bits
cmi_bits = _impl.cmi_bits
BACKEND = "python" if _impl is pure else "compiled"


def available_backends():
    """Importable backends keyed by name; used by tests and benchmarks."""
    backends = {"python": pure}
    try:
        from . import _ct
        backends["compiled"] = _ct
    except ImportError:
        pass
    return backends
