"""SWIPT-enabled H2H/M2M cellular simulator with multi-agent DQN allocation."""

from swiptsim._core import *  # noqa: F401,F403
from swiptsim._core import __doc__  # noqa: F401
