"""Shared helpers for the test modules."""
import functools

import numpy as np

from pnbent.duals import irreps
from pnbent.groups import group_from_spec


@functools.lru_cache(maxsize=None)
def group(spec):
    return group_from_spec(spec)


@functools.lru_cache(maxsize=None)
def dual(spec):
    return irreps(group(spec))


def char_oracle(factors, a, x):
    """chi^a(x) from the mixed-radix digits, computed without any dual table."""
    digits_a, digits_x = [], []
    for n in reversed(factors):
        digits_a.append(a % n)
        digits_x.append(x % n)
        a //= n
        x //= n
    phase = sum(p * q / n for p, q, n in zip(digits_a, digits_x, reversed(factors)))
    return np.exp(2j * np.pi * phase)


def random_signal(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)
