"""
Configuration utilities for fptmc
"""

import copy
import json
import logging
import os

logger = logging.getLogger(__name__)

SEED_ENV_VAR = "FPTMC_SEED"


def load_config(config_path):
    """
    Load configuration from JSON file

    Sections missing from the file are filled in from the defaults.

    Args:
        config_path (str): Path to configuration file

    Returns:
        dict: Configuration dictionary
    """
    try:
        with open(config_path, 'r') as f:
            config = json.load(f)
        logger.info(f"Configuration loaded from {config_path}")
        return merge_config(create_default_config(), config)
    except FileNotFoundError:
        logger.warning(f"Configuration file {config_path} not found, using default configuration")
        return create_default_config()
    except json.JSONDecodeError as e:
        logger.error(f"Error parsing configuration file: {e}")
        logger.warning("Using default configuration")
        return create_default_config()


def create_default_config():
    """
    Create default configuration

    Returns:
        dict: Default configuration dictionary
    """
    return {
        "guards": {
            "max_candidates": 100_000_000,
            "max_disjuncts": 10_000,
            "max_exact_vertices": 12,
            "max_type_variables": 5,
            "hash_coverage_limit": 1_000_000,
        },
        "hashing": {
            "mode": "deterministic",
            "epsilon": 1e-6,
        },
        "verify": {
            "cases": {
                "sigma1": 300,
                "hom": 500,
                "fagin": 6,
                "encodings": 200,
                "types": 150,
                "atm": 5,
                "wsat": 10,
                "hashing": 1000,
                "treewidth": 10,
            },
            "quick_cases": {
                "sigma1": 40,
                "hom": 60,
                "fagin": 4,
                "encodings": 25,
                "types": 30,
                "atm": 4,
                "wsat": 6,
                "hashing": 100,
                "treewidth": 7,
            },
        },
        "logging": {
            "level": "INFO",
            "file": "logs/fptmc.log",
            "max_file_size_mb": 10,
            "backup_count": 3,
        },
        "ui": {
            "color_output": True,
            "progress": True,
        },
    }


def merge_config(base, override):
    """
    Deep-merge ``override`` into a copy of ``base``

    Args:
        base (dict): Defaults
        override (dict): Values read from a file

    Returns:
        dict: Merged configuration
    """
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = value
    return merged


def save_config(config, config_path):
    """
    Save configuration to JSON file

    Args:
        config (dict): Configuration dictionary
        config_path (str): Path to save configuration file
    """
    os.makedirs(os.path.dirname(os.path.abspath(config_path)), exist_ok=True)

    try:
        with open(config_path, 'w') as f:
            json.dump(config, f, indent=2)
        logger.info(f"Configuration saved to {config_path}")
        return True
    except OSError as e:
        logger.error(f"Error saving configuration: {e}")
        return False


def resolve_seed(cli_seed, environ=None):
    """
    Pick the random seed: command line first, then FPTMC_SEED, then 0

    Args:
        cli_seed (int | None): Value of --seed
        environ (Mapping | None): Environment, defaults to os.environ

    Returns:
        int: Seed
    """
    if cli_seed is not None:
        return cli_seed
    environ = os.environ if environ is None else environ
    raw = environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {SEED_ENV_VAR}={raw!r}")
        return 0
