"""Python interface to the srpair collective-emission simulator.

Everything is implemented in the C++ extension module; this package only
re-exports it. When running from a build tree (extension on PYTHONPATH but
not installed into the package), the top-level module is used instead.
"""

try:
    from ._srpair import *  # noqa: F401,F403
    from ._srpair import __version__  # noqa: F401
except ImportError:  # build-tree layout: extension importable as `_srpair`
    from _srpair import *  # type: ignore[import-not-found]  # noqa: F401,F403
    from _srpair import __version__  # type: ignore[import-not-found]  # noqa: F401
