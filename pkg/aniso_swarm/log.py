"""Package logger.

``ANISO_SWARM_LOG_LEVEL`` (default ``INFO``) selects the level of the
stderr sink. Records start with the time elapsed since import.
"""

import os
import sys

from loguru import logger

LOG_LEVEL = os.getenv("ANISO_SWARM_LOG_LEVEL", "INFO").upper()
LOG_FORMAT = "<green>{elapsed}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan> - <level>{message}</level>"

logger.remove()
logger.add(sys.stderr, level=LOG_LEVEL, format=LOG_FORMAT)

__all__ = ["LOG_LEVEL", "logger"]
