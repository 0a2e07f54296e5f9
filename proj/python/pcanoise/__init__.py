from ._pcanoise import *  # noqa: F401,F403
from ._pcanoise import __doc__  # noqa: F401
