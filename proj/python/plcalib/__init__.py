"""Principal-line camera calibration toolkit."""

try:
    # installed layout: the extension lives inside the package
    from ._plcalib import *  # noqa: F401,F403
    from ._plcalib import Error  # noqa: F401
except ImportError:
    # build-tree layout: the extension sits next to the package on sys.path
    from _plcalib import *  # noqa: F401,F403
    from _plcalib import Error  # noqa: F401
