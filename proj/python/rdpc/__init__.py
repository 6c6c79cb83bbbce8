from ._rdpc import *  # noqa: F401,F403
from ._rdpc import __version__  # noqa: F401
