from __future__ import annotations

import pathlib

import pytest

from segimt.corpus_io import load_parallel
from segimt.scorer import load_toy_model

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "src" / "segimt" / "data"

# The worked interactive session used across the suite: a scripted scorer
# replays these four hypotheses; the reviewer converges in three rounds for
# a total of 3 word strokes, 10 mouse actions, 20 keystrokes.
SESSION_SOURCE = "El Estado de Indiana fue el primero en exigirlo."
SESSION_REFERENCE = "Indiana was the first State to impose such a requirement."
SESSION_HYPOTHESES = [
    "Indiana is the sooner State to impose that condition.",
    "Indiana was the sooner State to impose such a condition.",
    "Indiana was the first State to impose such a prerequisite.",
    "Indiana was the first State to impose such a requirement.",
]


@pytest.fixture(scope="session")
def toy_model_path() -> pathlib.Path:
    return DATA_DIR / "toy_model.txt"


@pytest.fixture(scope="session")
def toy_corpus_paths() -> tuple[pathlib.Path, pathlib.Path]:
    return DATA_DIR / "toy.es", DATA_DIR / "toy.en"


@pytest.fixture(scope="session")
def bundled_scorer(toy_model_path):
    return load_toy_model(toy_model_path)


@pytest.fixture(scope="session")
def bundled_corpus(toy_corpus_paths):
    return load_parallel(*toy_corpus_paths)
