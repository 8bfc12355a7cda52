"""Seeded factories for randomized specs shared across the test modules."""

import random
from fractions import Fraction

import pytest

from quadmps.sequences import BandedRule, StructureCoefficients


def rational(rng: random.Random, span: int = 6, den: int = 4, nonzero: bool = False):
    while True:
        value = Fraction(rng.randint(-span, span), rng.randint(1, den))
        if value != 0 or not nonzero:
            return value


def tabulated_rule(d: int, betas, band_tables) -> BandedRule:
    """Banded rule backed by finite lists; indexing past the end fails loudly."""
    return BandedRule(
        d=d,
        beta=lambda n: betas[n],
        bands=tuple((lambda t: (lambda n: t[n]))(table) for table in band_tables),
    )


def random_banded_rule(rng: random.Random, d: int, depth: int = 40) -> BandedRule:
    betas = [rational(rng) for _ in range(depth)]
    bands = []
    for k in range(d):
        regular = k == d - 1
        bands.append([rational(rng, nonzero=regular) for _ in range(depth)])
    return tabulated_rule(d, betas, bands)


def random_two_orthogonal(rng: random.Random, depth: int = 40) -> BandedRule:
    return random_banded_rule(rng, 2, depth)


def random_dense_sc(rng: random.Random, nmax: int) -> StructureCoefficients:
    beta = [rational(rng) for _ in range(nmax + 1)]
    chi = [[rational(rng) for _ in range(n + 1)] for n in range(nmax)]
    return StructureCoefficients(beta, chi)


def random_spec(rng: random.Random, kind: int, depth: int = 40):
    """One of the four randomized spec shapes: banded d = 1, 2, 3 or dense."""
    if kind % 4 == 3:
        return random_dense_sc(rng, depth - 1)
    return random_banded_rule(rng, kind % 4 + 1, depth)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260818)
