"""Shared fixtures: hand-built reference instances and a seeded corpus.

The Fano lines here come from the {0,1,3} difference set mod 7 so that
tests of the field-based plane generator have an independent target.
"""

import random

import pytest

from hyperchrom import GeneratorParams, Hypergraph, random_bounded_codegree

FANO_LINES = tuple(
    tuple(sorted(((0 + i) % 7, (1 + i) % 7, (3 + i) % 7))) for i in range(7)
)


@pytest.fixture
def fano() -> Hypergraph:
    return Hypergraph(7, FANO_LINES)


@pytest.fixture
def triangle() -> Hypergraph:
    return Hypergraph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def k4() -> Hypergraph:
    """The complete graph K4 as a 2-uniform hypergraph."""
    return Hypergraph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def make_corpus(count, base_seed, n_range=(5, 14), t_range=(1, 3), size_hi=4):
    """Seeded random bounded-codegree instances with their codegree caps."""
    out = []
    for i in range(count):
        seed = base_seed + i
        rng = random.Random(seed)
        n = rng.randint(*n_range)
        t = rng.randint(*t_range)
        h = random_bounded_codegree(
            GeneratorParams(
                seed=seed,
                n=n,
                t=t,
                size_range=(2, min(size_hi, n)),
                density=rng.randint(3, 2 * n),
            )
        )
        out.append((h, t))
    return out


@pytest.fixture(scope="session")
def corpus():
    return make_corpus(40, base_seed=1000)
