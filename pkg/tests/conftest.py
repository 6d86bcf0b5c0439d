"""
MIT License

Copyright (c) 2024-present stylomorph contributors

Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all
copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.
"""

import os
import tempfile
from pathlib import Path

import pytest

# keep the config of the test run away from the user's one, before anything reads it
os.environ.setdefault("STYLOMORPH_CONFIG_DIR", tempfile.mkdtemp(prefix="stylomorph-config-"))

from stylomorph.attribution import ModelKind, train  # noqa: E402
from stylomorph.corpus import generate_corpus, save_manifest  # noqa: E402
from stylomorph.lang import parse  # noqa: E402

from .programs import RECURSIVE_PROGRAM, RECURSIVE_SNIPPET  # noqa: E402

CORPUS_SEED = 7
CORPUS_AUTHORS = 4


@pytest.fixture
def recursive_snippet():
    return parse(RECURSIVE_SNIPPET)


@pytest.fixture
def recursive_program():
    return parse(RECURSIVE_PROGRAM)


@pytest.fixture(scope="session")
def small_corpus():
    return generate_corpus(CORPUS_AUTHORS, seed=CORPUS_SEED)


@pytest.fixture(scope="session")
def small_corpus_dir(small_corpus, tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("corpus")
    save_manifest(small_corpus, root)
    return root


@pytest.fixture(scope="session")
def forest_model(small_corpus):
    return train(ModelKind.random_forest, small_corpus.dataset(), seed=0, selection_cap=300)


@pytest.fixture(scope="session")
def softmax_model(small_corpus):
    return train(ModelKind.linear_softmax, small_corpus.dataset(), seed=0, selection_cap=300)
