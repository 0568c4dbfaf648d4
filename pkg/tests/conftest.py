"""Shared helpers for the test suite."""

import random
from fractions import Fraction

import pytest

from fano.exact import GaussianRational, SparsePoly
from fano.systems import SquareSystem


def gq(re=0, im=0):
    return GaussianRational(re, im)


def poly(num_vars, terms):
    """Build a SparsePoly from {exponent-tuple: coefficient}."""
    return SparsePoly(num_vars, terms)


def toy_system(num_vars, *term_dicts):
    """A hand-built SquareSystem (no provenance) from term dicts."""
    return SquareSystem(
        num_vars, tuple(SparsePoly(num_vars, d) for d in term_dicts)
    )


def random_gq(rng, span=6):
    return GaussianRational(
        Fraction(rng.randint(-span, span), rng.randint(1, span)),
        Fraction(rng.randint(-span, span), rng.randint(1, span)),
    )


@pytest.fixture
def rng():
    return random.Random(20260824)
