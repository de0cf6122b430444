"""Logging setup for the command line"""
__all__ = ['LOG_FORMAT', 'setup_logging']

import logging

LOG_FORMAT = '[dualfuse] %(levelname)s %(name)s: %(message)s'


def setup_logging(verbosity=0, stream=None):
    """0 -> WARNING, 1 (-v) -> INFO, 2+ (-vv) -> DEBUG. Replaces earlier handlers."""
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=stream, force=True)
    return level
