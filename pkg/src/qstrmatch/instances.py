"""Seeded random problem instances for verification runs."""
from __future__ import annotations

import random
import string
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .reference import InputPair, Problem, ProblemSpec, pad_inputs

DEFAULT_SEED = 20240521


def alphabet_of(sigma: int) -> str:
    if sigma == 2:
        return "01"
    if not 2 <= sigma <= 26:
        raise ValueError(f"sigma must be in 2..26, got {sigma}")
    return string.ascii_lowercase[:sigma]


@dataclass(frozen=True)
class Instance:
    pair: InputPair
    spec: ProblemSpec
    sigma: int


def random_strings(rng: random.Random, length: int, alphabet: str) -> tuple[str, str]:
    """A random x, and a y that is either independent or a light mutation of x."""
    x = "".join(rng.choice(alphabet) for _ in range(length))
    if rng.random() < 0.5:
        return x, "".join(rng.choice(alphabet) for _ in range(length))
    y = list(x)
    for _ in range(rng.randint(0, 3)):
        y[rng.randrange(length)] = rng.choice(alphabet)
    return x, "".join(y)


def random_spec(rng: random.Random, n: int, max_d: int, kind: Optional[Problem] = None) -> ProblemSpec:
    kind = kind or rng.choice(list(Problem))
    d = rng.randint(1, max_d) if rng.random() < 0.9 else rng.randint(1, n)
    j = rng.randint(0, n - d) if kind is Problem.FFM else None
    return ProblemSpec(kind, d, j)


def random_instance(
    rng: random.Random, n: int, sigma: int, kind: Optional[Problem] = None
) -> Instance:
    """Binary alphabets give raw length-n strings (one bit per character);
    larger alphabets are padded with sentinels up to length n."""
    alphabet = alphabet_of(sigma)
    if sigma == 2:
        x, y = random_strings(rng, n, alphabet)
        pair = InputPair(x, y, tuple(alphabet))
        return Instance(pair, random_spec(rng, n, n, kind), sigma)
    raw = rng.randint(n // 2, n - 1)
    x, y = random_strings(rng, raw, alphabet)
    pair = pad_inputs(x, y, alphabet)
    assert pair.n == n
    return Instance(pair, random_spec(rng, n, raw, kind), sigma)


def instance_stream(
    seed: int, n_values: Sequence[int], sigmas: Sequence[int], trials: int
) -> Iterator[tuple[int, Instance]]:
    """``trials`` instances for every (n, sigma), deterministic in ``seed``."""
    rng = random.Random(seed)
    index = 0
    for n in n_values:
        for sigma in sigmas:
            for _ in range(trials):
                yield index, random_instance(rng, n, sigma)
                index += 1
