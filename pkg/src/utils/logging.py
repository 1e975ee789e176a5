"""
Logging utilities for fptmc

Records go to a rotating log file at the configured level and, from
WARNING up (DEBUG with --verbose), to stderr. stdout is reserved for the
JSON report, so no handler may write there.
"""

import logging
import os
import sys
from logging.handlers import RotatingFileHandler

CONSOLE_FORMAT = '%(levelname)s: %(message)s'
FILE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# libraries whose debug output drowns the solver traces
QUIET_LOGGERS = ('lark', 'graphviz')


def setup_logging(config, verbose=False):
    """
    Set up logging configuration

    Args:
        config (dict): The ``logging`` section: ``level``, ``file``,
            ``max_file_size_mb`` and ``backup_count``
        verbose (bool, optional): Show DEBUG records on the console. Defaults to False.

    Returns:
        logging.Logger: The ``fptmc`` application logger
    """
    level = logging.getLevelName(str(config['level']).upper())
    if not isinstance(level, int):
        level = logging.INFO

    root = logging.getLogger()
    root.setLevel(logging.DEBUG if verbose else level)
    for handler in root.handlers[:]:
        root.removeHandler(handler)
        handler.close()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.DEBUG if verbose else logging.WARNING)
    console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    root.addHandler(console_handler)

    if config.get('file'):
        log_dir = os.path.dirname(config['file'])
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = RotatingFileHandler(
            config['file'],
            maxBytes=config['max_file_size_mb'] * 1024 * 1024,
            backupCount=config['backup_count'],
            encoding='utf-8',
        )
        file_handler.setLevel(level)
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT))
        root.addHandler(file_handler)

    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)

    return logging.getLogger('fptmc')


def log_run_settings(logger, command, seed, config, force=False):
    """
    Record the settings a run depends on, so a log line suffices to repeat it

    Args:
        logger (logging.Logger): Application logger
        command (str): Subcommand name
        seed (int): Seed in effect
        config (dict): Configuration after command-line overrides
        force (bool, optional): Whether the resource guards are lifted
    """
    guards = "lifted" if force else ", ".join(f"{k}={v}" for k, v in sorted(config['guards'].items()))
    logger.info(f"Starting fptmc {command} (seed {seed}, hashing {config['hashing']['mode']}, "
                f"epsilon {config['hashing']['epsilon']})")
    logger.debug(f"Guards: {guards}")
