"""Shared pytest fixtures for pkpres tests."""
from __future__ import annotations

import itertools
import logging
import pytest
from pathlib import Path
from typing import Iterator, List

from click.testing import CliRunner

from pkpres.core import Atom, atoms_in_box
from pkpres.rewrite import Word


DATA_DIR = Path(__file__).parent / 'data'


def words_over_box(dimension: int, bound: int, max_length: int) -> Iterator[Word]:
    """Yield every word of length <= max_length over the atoms of [1, bound]^dimension."""
    atoms: List[Atom] = list(atoms_in_box(dimension, bound))
    for length in range(1, max_length + 1):
        for letters in itertools.product(atoms, repeat=length):
            yield Word(letters)


@pytest.fixture
def runner() -> CliRunner:
    """A click test runner."""
    return CliRunner()


@pytest.fixture
def data_dir() -> Path:
    """Directory holding golden files."""
    return DATA_DIR


@pytest.fixture
def pkpres_logger() -> logging.Logger:
    """The package logger, detached from click-log so caplog can see records."""
    pk_logger = logging.getLogger('pkpres')
    # Clear any handlers added by click-log from cli.py imports
    # and ensure propagation for caplog to capture
    pk_logger.handlers.clear()
    pk_logger.propagate = True
    return pk_logger
