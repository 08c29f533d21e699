from __future__ import annotations

import sys

import numpy as np
import pytest

from ogff import designs as dz
from ogff import mubs as mb
from ogff import recipe as rc


@pytest.fixture(scope="session")
def c4_ogff():
    return rc.assemble_ogff(mb.gen_complex_mubs(4), dz.gen_affine(2, 1))


@pytest.fixture(scope="session")
def c7_ogff():
    return rc.assemble_ogff(mb.gen_complex_mubs(7), dz.gen_hadamard_design(2))


@pytest.fixture(scope="session")
def r4_ogff():
    return rc.assemble_ogff(mb.gen_real_mubs(4), dz.gen_affine(2, 1))


@pytest.fixture(scope="session")
def fano_etff():
    return rc.etff_from_symmetric(dz.gen_hadamard_design(2))


def random_projection(rng: np.random.Generator, m: int, l: int, fld: str) -> np.ndarray:
    """Orthogonal projection onto a Haar-ish random l-dimensional subspace."""
    A = rng.standard_normal((m, l))
    if fld == "complex":
        A = A + 1j * rng.standard_normal((m, l))
    Q, _ = np.linalg.qr(A)
    return Q @ Q.conj().T


def random_unitary(rng: np.random.Generator, m: int, fld: str) -> np.ndarray:
    A = rng.standard_normal((m, m))
    if fld == "complex":
        A = A + 1j * rng.standard_normal((m, m))
    Q, R = np.linalg.qr(A)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
