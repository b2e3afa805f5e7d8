# flake8: noqa

__all__ = [
    'Fleet',
    'SourceParams',
    'SleepPlan',
    'BatterySpec',
    'plan',
]

from .model import BatterySpec
from .model import Fleet
from .model import SleepPlan
from .model import SourceParams
from .planner import plan

import logging

# Library use stays silent unless the application
# configures logging.
LOG = logging.getLogger('sleepwake')

LOG.addHandler(logging.NullHandler())
