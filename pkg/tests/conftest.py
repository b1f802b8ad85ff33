import os
from fractions import Fraction

import numpy as np
import pytest

from choisense.algebra.linalg import DenseMatrix
from choisense.algebra.scalar import RadScalar
from choisense.cli.main import main

RADICANDS = (1, 2, 3, 11)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exact certification of tensor products (minutes)")


# ---------------------------------------------------------
# Random exact data
# ---------------------------------------------------------
def random_scalar(rng, radicands=RADICANDS, bound=5) -> RadScalar:
    """Small random element with Gaussian-rational coefficients on a few radicands."""
    terms = {}
    for rad in rng.choice(radicands, size=rng.integers(1, 3), replace=False):
        re = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, 4)))
        im = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, 4)))
        terms[int(rad)] = (re, im)
    return RadScalar(terms)


def random_matrix(rng, rows, cols=None, density=0.6, radicands=RADICANDS) -> DenseMatrix:
    cols = rows if cols is None else cols
    entries = [
        random_scalar(rng, radicands) if rng.random() < density else RadScalar() for _ in range(rows * cols)
    ]
    return DenseMatrix(rows, cols, entries)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# ---------------------------------------------------------
# CLI runner
# ---------------------------------------------------------
@pytest.fixture
def run_cli(capsys, tmp_path, monkeypatch):
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("CHOISENSE_OUTPUT_DIR", os.path.join(str(tmp_path), "out"))

    def _run(*argv):
        try:
            code = main(list(argv))
        except SystemExit as e:
            code = e.code
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return _run
