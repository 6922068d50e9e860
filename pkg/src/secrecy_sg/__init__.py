"""Secrecy-rate distributions of Poisson cellular networks: closed forms and
Monte Carlo validation."""

from .analytic import *  # noqa: F401,F403
from .montecarlo import *  # noqa: F401,F403
from .pointprocess import *  # noqa: F401,F403
from .specfun import *  # noqa: F401,F403

__version__ = "0.1.0"
