"""
Shared fixtures for the fptmc test suite
"""

import json
from pathlib import Path

import pytest

from fptmc import main
from src.structures.generators import make_rng
from src.structures.graphs import complete_graph, cycle_graph, path_graph
from src.utils.config import create_default_config, save_config

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def rng():
    return make_rng(0)


@pytest.fixture
def instance():
    """Path of a file under instances/ as a string."""
    def path(name):
        return str(INSTANCES / name)
    return path


@pytest.fixture
def run_cli(tmp_path, capsys):
    """
    Run ``fptmc.main`` with a private config and log file

    Returns a callable giving ``(exit code, parsed JSON report or None, stderr)``.
    """
    config = create_default_config()
    config['logging']['file'] = str(tmp_path / "fptmc.log")
    config['ui'] = {'color_output': False, 'progress': False}
    config_path = tmp_path / "config.json"
    save_config(config, str(config_path))

    def run(*argv):
        code = main(["--config", str(config_path), *map(str, argv)])
        out, err = capsys.readouterr()
        report = json.loads(out) if out.strip() else None
        return code, report, err

    return run
