"""Kernel backend selection.

The compiled ``_ckernel`` extension is used when it imports; otherwise the
pure-Python ``_pykernel`` takes over.  Setting ``OLB_KERNEL=python`` forces
the fallback.  Both expose the same functions, re-exported here.
"""

import os

if os.environ.get("OLB_KERNEL", "").lower() == "python":
    from . import _pykernel as _impl
else:
    try:
        from . import _ckernel as _impl
    except ImportError:  # extension not built
        from . import _pykernel as _impl

BACKEND = _impl.BACKEND

support = _impl.support
point = _impl.point
apex = _impl.apex
exit_angle = _impl.exit_angle
variational_angle = _impl.variational_angle
iterate = _impl.iterate
apexes = _impl.apexes
wrap = _impl.wrap


def backends():
    """Return every importable backend module, fallback first."""
    from . import _pykernel

    mods = [_pykernel]
    try:
        from . import _ckernel

        mods.append(_ckernel)
    except ImportError:
        pass
    return mods
