import random

import pytest

from qstrmatch.circuit import Circuit, simulate_lanes

WORKED_X = "agccatgccaatgcat"
WORKED_Y = "cgcgataccaattcat"


@pytest.fixture
def rng():
    return random.Random(1234)


def allocate(*widths):
    """Consecutive qubit index lists for the given widths, plus the total count."""
    out, start = [], 0
    for w in widths:
        out.append(list(range(start, start + w)))
        start += w
    return out, start


def run_random(fragment, qubit_count, assign, count, rng):
    """Simulate ``count`` random inputs built by ``assign(rng) -> {qubit: bit}``.

    Returns a list of (input_bits, output_bits) with one dict/list per lane.
    """
    inputs = [assign(rng) for _ in range(count)]
    lanes = [0] * qubit_count
    for k, bits in enumerate(inputs):
        for q, v in bits.items():
            if v:
                lanes[q] |= 1 << k
    circ = Circuit(qubit_count).compose(fragment.circuit)
    out = simulate_lanes(circ, lanes, (1 << count) - 1)
    results = []
    for k, bits in enumerate(inputs):
        results.append((bits, [(v >> k) & 1 for v in out]))
    return results


def bits_of(state, reg):
    return [state[q] for q in reg]
