"""Multi-task similarity from ALE curves and a weighted Frechet distance."""

try:
    from ._mtsim import *  # noqa: F401,F403
    from ._mtsim import __doc__ as _doc
except ImportError:  # in-build-tree usage: the module sits next to the package
    from _mtsim import *  # noqa: F401,F403
    from _mtsim import __doc__ as _doc

__doc__ = _doc
__version__ = "0.1.0"
