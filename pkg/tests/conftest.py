import os
import subprocess
import sys

import pytest

from rifslab import load_corpus


@pytest.fixture(scope="session")
def cantor_cfg():
    return load_corpus("cantor")


@pytest.fixture(scope="session")
def packing_cfg():
    return load_corpus("carpet-packing")


@pytest.fixture(scope="session")
def splice_cfg():
    return load_corpus("carpet-splice")


@pytest.fixture(scope="session")
def cookie_cfg():
    return load_corpus("cookie-boxdim")


@pytest.fixture
def run_cli():
    """Invoke the CLI in a subprocess with a clean budget environment."""

    def _run(*args, env_extra=None, cwd=None):
        env = dict(os.environ)
        env.pop("RIFSLAB_BUDGET", None)
        if env_extra:
            env.update(env_extra)
        return subprocess.run(
            [sys.executable, "-m", "rifslab", *args],
            capture_output=True, text=True, env=env, cwd=cwd)

    return _run
