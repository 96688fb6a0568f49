import itertools
import random

import numpy as np
import pytest

from qstrmatch.circuit import (
    Circuit,
    CircuitError,
    Gate,
    GateKind,
    basis_permutation,
    ccx,
    compute_layers,
    controlled_version,
    cswap,
    cx,
    depth,
    expand_cswaps,
    mcx,
    simulate,
    simulate_batch,
    statevector_apply,
    swap,
    x,
)


def random_gate(rng, q):
    kind = rng.choice(list(GateKind))
    qubits = rng.sample(range(q), min(q, 6))
    pol = lambda: rng.random() < 0.7  # noqa: E731
    if kind is GateKind.X:
        return x(qubits[0])
    if kind is GateKind.CX:
        return cx(qubits[0], qubits[1], pol())
    if kind is GateKind.CCX:
        return ccx(qubits[0], qubits[1], qubits[2], pol(), pol())
    if kind is GateKind.MCX:
        k = rng.randint(1, len(qubits) - 1)
        return Gate(GateKind.MCX, (qubits[k],), tuple((c, pol()) for c in qubits[:k]))
    if kind is GateKind.SWAP:
        return swap(qubits[0], qubits[1])
    return cswap(qubits[0], qubits[1], qubits[2], pol())


def random_circuit(rng, q, size):
    return Circuit(q).extend(random_gate(rng, q) for _ in range(size))


def truth(gate, state):
    """Independent per-gate semantics, written against the gate definition."""
    s = list(state)
    ok = all(s[c] == (1 if p else 0) for c, p in gate.controls)
    if gate.kind in (GateKind.SWAP, GateKind.CSWAP):
        if ok:
            a, b = gate.targets
            s[a], s[b] = s[b], s[a]
    elif ok:
        s[gate.targets[0]] ^= 1
    return s


class TestConstruction:
    def test_registers(self):
        c = Circuit()
        assert c.add_register("x", 8) == range(0, 8)
        assert c.add_register("y", 8) == range(8, 16)
        assert c["y"] == range(8, 16)
        with pytest.raises(CircuitError):
            c.add_register("x", 2)
        with pytest.raises(CircuitError):
            c.add_register("z", 0)

    def test_append_compose(self):
        c = Circuit(2)
        c.append(x(0))
        assert c.size == 1
        a = Circuit(3).extend([x(0), cx(0, 1)])
        b = Circuit(3).extend([ccx(0, 1, 2), x(2), swap(0, 1)])
        joined = Circuit(3).compose(a).compose(b)
        assert joined.size == a.size + b.size
        assert joined.gates == a.gates + b.gates

    @pytest.mark.parametrize(
        "make",
        [
            lambda: ccx(0, 1, 0),
            lambda: Gate(GateKind.X, (0,), ((1, True),)),
            lambda: Gate(GateKind.CX, (0,)),
            lambda: Gate(GateKind.MCX, (0,)),
            lambda: Gate(GateKind.SWAP, (1, 1)),
            lambda: Gate(GateKind.CSWAP, (0, 1)),
            lambda: x(-1),
        ],
    )
    def test_malformed(self, make):
        with pytest.raises(CircuitError):
            make()

    def test_out_of_range(self):
        with pytest.raises(CircuitError):
            Circuit(2).append(cx(0, 2))
        with pytest.raises(CircuitError):
            Circuit(2).compose(Circuit(3))

    def test_mcx_narrows(self):
        assert mcx([(0, True)], 1).kind is GateKind.CX
        assert mcx([(0, True), (1, False)], 2).kind is GateKind.CCX
        assert mcx([(0, True), (1, True), (2, True)], 3).kind is GateKind.MCX


class TestSimulation:
    def test_toffoli(self):
        c = Circuit(3).append(ccx(0, 1, 2))
        assert simulate(c, [1, 1, 0]) == [1, 1, 1]
        assert simulate(c, [1, 0, 0]) == [1, 0, 0]

    def test_cswap_unsatisfied(self):
        c = Circuit(3).append(cswap(0, 1, 2))
        assert simulate(c, [0, 1, 0]) == [0, 1, 0]
        assert simulate(c, [1, 1, 0]) == [1, 0, 1]

    def test_negative_controls_truth_table(self):
        g = Gate(GateKind.MCX, (4,), ((0, False), (1, False), (2, True), (3, False)))
        c = Circuit(5).append(g)
        for bits in itertools.product((0, 1), repeat=5):
            expected = list(bits)
            if bits[:4] == (0, 0, 1, 0):
                expected[4] ^= 1
            assert simulate(c, bits) == expected
        assert simulate(Circuit(3).append(Gate(GateKind.MCX, (2,), ((0, False), (1, False)))), [0, 0, 0]) == [0, 0, 1]

    def test_length_mismatch(self):
        with pytest.raises(CircuitError):
            simulate(Circuit(3), [0, 1])

    def test_matches_gate_truth(self, rng):
        for _ in range(200):
            c = random_circuit(rng, 7, 20)
            state = [rng.randint(0, 1) for _ in range(7)]
            expected = state
            for g in c.gates:
                expected = truth(g, expected)
            assert simulate(c, state) == expected

    def test_batch_equals_single(self, rng):
        c = random_circuit(rng, 9, 60)
        states = [[rng.randint(0, 1) for _ in range(9)] for _ in range(100)]
        assert simulate_batch(c, states) == [simulate(c, s) for s in states]


class TestInverse:
    def test_reversed(self):
        c = Circuit(2).extend([x(0), cx(0, 1)])
        assert c.inverse().gates == [cx(0, 1), x(0)]
        single = Circuit(3).append(ccx(0, 1, 2))
        assert single.inverse() == single

    def test_round_trip(self, rng):
        for _ in range(100):
            c = random_circuit(rng, 10, 40)
            s = [rng.randint(0, 1) for _ in range(10)]
            assert simulate(c.inverse(), simulate(c, s)) == s


class TestPermutation:
    def test_exhaustive_small(self, rng):
        for q in (3, 6, 10):
            c = random_circuit(rng, q, 30)
            states = [list(bits) for bits in itertools.product((0, 1), repeat=q)]
            outs = {tuple(o) for o in simulate_batch(c, states)}
            assert len(outs) == 1 << q

    def test_statevector_agrees(self, rng):
        for q in (4, 8, 12):
            c = random_circuit(rng, q, 40)
            perm = basis_permutation(c)
            assert sorted(perm.tolist()) == list(range(1 << q))
            states = [[(i >> k) & 1 for k in range(q)] for i in range(1 << q)]
            outs = simulate_batch(c, states)
            assert [sum(b << k for k, b in enumerate(o)) for o in outs] == perm.tolist()

    def test_statevector_apply(self):
        c = Circuit(2).append(cx(0, 1))
        vec = np.array([0.0, 1.0, 0.0, 0.0])  # |q0=1, q1=0>
        assert statevector_apply(c, vec).tolist() == [0.0, 0.0, 0.0, 1.0]


class TestLayers:
    def test_disjoint(self):
        assert depth(Circuit(2).extend([x(0), x(1)])) == 1

    def test_shared(self):
        assert depth(Circuit(1).extend([x(0), x(0)])) == 2

    def test_parallel_cx(self):
        n = 16
        c = Circuit(2 * n).extend(cx(i, n + i) for i in range(n))
        assert depth(c) == 1

    def test_layer_invariants(self, rng):
        for _ in range(50):
            c = random_circuit(rng, 12, 50)
            layers = compute_layers(c)
            seen = set()
            for layer in layers:
                support = [q for i in layer for q in c.gates[i].support]
                assert len(support) == len(set(support))
                seen.update(layer)
            assert seen == set(range(c.size))
            flat = Circuit(12).extend(c.gates[i] for layer in layers for i in layer)
            s = [rng.randint(0, 1) for _ in range(12)]
            assert simulate(flat, s) == simulate(c, s)
            position = {i: k for k, layer in enumerate(layers) for i in layer}
            for i, j in itertools.combinations(range(c.size), 2):
                if set(c.gates[i].support) & set(c.gates[j].support):
                    assert position[i] < position[j]

    def test_compose_subadditive(self, rng):
        for _ in range(50):
            a, b = random_circuit(rng, 8, 25), random_circuit(rng, 8, 25)
            ab = a.copy().compose(b)
            assert depth(ab) <= depth(a) + depth(b)

    def test_cswap_expansion(self):
        c = Circuit(3).append(cswap(0, 1, 2))
        lowered = expand_cswaps(c)
        assert [g.kind for g in lowered.gates] == [GateKind.CCX] * 3
        assert depth(c) == 1 and depth(c, expand_cswap=True) == 3
        for bits in itertools.product((0, 1), repeat=3):
            assert simulate(lowered, bits) == simulate(c, bits)


class TestControlledVersion:
    def test_x_becomes_cx(self):
        c = controlled_version(Circuit(1).append(x(0)), 1)
        assert c.gates == [cx(1, 0)]

    def test_kinds(self):
        c = Circuit(5).extend([cx(0, 1), ccx(0, 1, 2), swap(0, 1), cswap(2, 0, 1)])
        cc = controlled_version(c, 5)
        kinds = [g.kind for g in cc.gates]
        assert kinds[:3] == [GateKind.CCX, GateKind.MCX, GateKind.CSWAP]
        assert kinds[3:] == [GateKind.MCX] * 3

    def test_collision(self):
        with pytest.raises(CircuitError):
            controlled_version(Circuit(2).append(cx(0, 1)), 1)

    def test_semantics(self, rng):
        for _ in range(100):
            c = random_circuit(rng, 8, 30)
            cc = controlled_version(c, 8)
            s = [rng.randint(0, 1) for _ in range(8)]
            assert simulate(cc, s + [0]) == s + [0]
            assert simulate(cc, s + [1]) == simulate(c, s) + [1]
