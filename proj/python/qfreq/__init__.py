"""Bayesian frequency estimation for collectively dephased atomic ensembles."""

try:
    from ._qfreq import *  # noqa: F401,F403
    from ._qfreq import __doc__  # noqa: F401
except ImportError:
    # In-tree builds leave the extension next to the build directory rather
    # than inside the package; fall back to a top-level import.
    from _qfreq import *  # noqa: F401,F403
    from _qfreq import __doc__  # noqa: F401
