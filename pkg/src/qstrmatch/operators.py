"""Circuit builders for the string-matching operators.

Every builder takes caller-chosen qubit indices (registers and an ancilla
list) and returns an :class:`OperatorFragment`.  Ancillae must be 0 on entry
and are returned to 0.  Each fragment records the depth limit it promises,
which the test suite checks against the measured ASAP depth.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .circuit import Circuit, Control, Gate, ccx, compute_layers, cswap, cx, mcx, swap, x
from .reference import SENTINELS, X_SENTINEL, Y_SENTINEL, ceil_log2

# Frozen constants for the log-depth operators that fan a control out first:
# controlled rotation, controlled AND, CRC and disjunction all satisfy
# depth <= LOG_COEFF * ceil(log2 L) + LOG_CONST.
LOG_COEFF = 2
LOG_CONST = 3


@dataclass(frozen=True)
class DepthBound:
    """Depth promise of a fragment: ``coeff * ceil(log2 width) + const`` or a constant."""

    kind: str
    coeff: int
    const: int
    width: int = 1

    @property
    def limit(self) -> int:
        if self.kind == "const":
            return self.const
        return self.coeff * ceil_log2(max(self.width, 1)) + self.const

    def __str__(self) -> str:
        if self.kind == "const":
            return f"O(1) <= {self.const}"
        return f"{self.coeff}*ceil(log2 {self.width})+{self.const} = {self.limit}"


@dataclass
class OperatorFragment:
    circuit: Circuit
    io: dict[str, tuple[int, ...]]
    ancillae: tuple[int, ...]
    depth_bound: DepthBound
    name: str = ""

    @property
    def gates(self) -> list[Gate]:
        return self.circuit.gates

    @property
    def depth(self) -> int:
        return len(compute_layers(self.circuit))

    @property
    def size(self) -> int:
        return len(self.circuit.gates)

    @property
    def qubits(self) -> set[int]:
        used = {q for qs in self.io.values() for q in qs}
        return used | set(self.ancillae)


def _fragment(
    name: str,
    gates: Iterable[Gate],
    io: Mapping[str, Sequence[int]],
    ancillae: Sequence[int],
    bound: DepthBound,
) -> OperatorFragment:
    gates = list(gates)
    io = {k: tuple(v) for k, v in io.items()}
    ancillae = tuple(ancillae)
    qubits = [q for v in io.values() for q in v] + list(ancillae)
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"{name}: overlapping operand registers")
    circuit = Circuit(1 + max(qubits, default=-1))
    circuit.extend(gates)
    return OperatorFragment(circuit, io, ancillae, bound, name)


def _need(ancillae: Sequence[int], count: int, name: str) -> list[int]:
    if len(ancillae) < count:
        raise ValueError(f"{name} needs {count} ancillae, got {len(ancillae)}")
    return list(ancillae[:count])


def _check_widths(name: str, *regs: Sequence[int]) -> int:
    widths = {len(r) for r in regs}
    if len(widths) != 1:
        raise ValueError(f"{name}: register width mismatch {[len(r) for r in regs]}")
    return widths.pop()


# -- fanout -----------------------------------------------------------------

def fanout_gates(control: int, targets: Sequence[int]) -> list[Gate]:
    """Doubling tree: every qubit holding the value copies it to one new target per round."""
    sources = [control]
    pending = list(targets)
    gates = []
    while pending:
        step = pending[: len(sources)]
        pending = pending[len(sources):]
        gates.extend(cx(s, t) for s, t in zip(sources, step))
        sources.extend(step)
    return gates


def build_fanout(control: int, targets: Sequence[int]) -> OperatorFragment:
    if control in targets:
        raise ValueError("fanout control inside target range")
    k = len(targets)
    return _fragment(
        "fanout",
        fanout_gates(control, targets),
        {"control": (control,), "targets": targets},
        (),
        DepthBound("const", 0, ceil_log2(k + 1), k),
    )


# -- multi-controlled X -----------------------------------------------------

def mcx_ancillae(k: int) -> int:
    return max(k - 2, 0)


def mcx_tree_gates(
    controls: Sequence[Control], target: int, ancillae: Sequence[int]
) -> list[Gate]:
    """Balanced AND-tree: conjunction into ancillae, root Toffoli on target, uncompute."""
    k = len(controls)
    if k == 0:
        raise ValueError("MCX needs at least one control")
    if k <= 2:
        return [mcx(controls, target)]
    free = list(_need(ancillae, mcx_ancillae(k), "mcx"))
    nodes = list(controls)
    compute: list[Gate] = []
    while len(nodes) > 2:
        merged = []
        for a, b in zip(nodes[0::2], nodes[1::2]):
            anc = free.pop(0)
            compute.append(mcx([a, b], anc))
            merged.append((anc, True))
        if len(nodes) % 2:
            merged.append(nodes[-1])
        nodes = merged
    return compute + [mcx(nodes, target)] + compute[::-1]


def build_mcx(
    controls: Sequence[Control | int], target: int, ancillae: Sequence[int] = ()
) -> OperatorFragment:
    ctl = [(c, True) if isinstance(c, int) else (int(c[0]), bool(c[1])) for c in controls]
    k = len(ctl)
    if k == 0:
        raise ValueError("MCX needs at least one control")
    anc = _need(ancillae, mcx_ancillae(k), "mcx")
    return _fragment(
        "mcx",
        mcx_tree_gates(ctl, target, anc),
        {"controls": [q for q, _ in ctl], "target": (target,)},
        anc,
        DepthBound("log", 2, 1, k),
    )


# -- matching ---------------------------------------------------------------

def build_match(x_reg: Sequence[int], y_reg: Sequence[int], out: Sequence[int]) -> OperatorFragment:
    """out[j] ^= XNOR(x[j], y[j]) using Toffolis on (x, y) and on (not x, not y)."""
    _check_widths("match", x_reg, y_reg, out)
    flips = [x(q) for pair in zip(x_reg, y_reg) for q in pair]
    gates = (
        [ccx(a, b, t) for a, b, t in zip(x_reg, y_reg, out)]
        + flips
        + [ccx(a, b, t) for a, b, t in zip(x_reg, y_reg, out)]
        + flips
    )
    return _fragment(
        "match", gates, {"x": x_reg, "y": y_reg, "out": out}, (), DepthBound("const", 0, 4)
    )


@dataclass(frozen=True)
class BlockEncoding:
    """Fixed-width binary codes for characters, lowest bit first within a block."""

    b: int
    code: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.b < 1:
            raise ValueError("block width must be >= 1")
        values = list(self.code.values())
        if len(set(values)) != len(values):
            raise ValueError("character codes must be distinct")
        if any(not 0 <= v < (1 << self.b) for v in values):
            raise ValueError(f"codes must fit in {self.b} bits")

    @classmethod
    def for_alphabet(cls, alphabet: Iterable[str]) -> "BlockEncoding":
        """Codes 0..sigma-1 for the alphabet, sigma and sigma+1 for '$' and '%'."""
        chars = sorted(set(alphabet) - SENTINELS)
        sigma = len(chars)
        code = {c: i for i, c in enumerate(chars)}
        code[X_SENTINEL] = sigma
        code[Y_SENTINEL] = sigma + 1
        return cls(max(1, ceil_log2(sigma + 2)), code)

    @classmethod
    def binary(cls, alphabet: Sequence[str] = ("0", "1")) -> "BlockEncoding":
        """One bit per character; no room for sentinels."""
        chars = sorted(set(alphabet))
        if len(chars) > 2:
            raise ValueError("binary mode needs an alphabet of at most two characters")
        return cls(1, {c: i for i, c in enumerate(chars)})

    def encode(self, s: str) -> list[int]:
        bits = []
        for ch in s:
            try:
                v = self.code[ch]
            except KeyError:
                raise ValueError(f"character {ch!r} has no code in this encoding") from None
            bits.extend((v >> k) & 1 for k in range(self.b))
        return bits

    def decode(self, bits: Sequence[int]) -> str:
        rev = {v: c for c, v in self.code.items()}
        out = []
        for start in range(0, len(bits), self.b):
            v = sum(bit << k for k, bit in enumerate(bits[start:start + self.b]))
            out.append(rev[v])
        return "".join(out)


def match_block_ancillae(n: int, b: int) -> int:
    return n * mcx_ancillae(b)


def build_match_block(
    x_reg: Sequence[int],
    y_reg: Sequence[int],
    out: Sequence[int],
    enc: BlockEncoding | int,
    ancillae: Sequence[int] = (),
) -> OperatorFragment:
    """Character-level match for b-bit blocks.

    x is XORed with y in place, so a block of x is all zero exactly when the
    characters agree; an all-negative-control AND tree per block writes out[j];
    the XOR is then undone.
    """
    b = enc if isinstance(enc, int) else enc.b
    n = len(out)
    if len(x_reg) != n * b or len(y_reg) != n * b:
        raise ValueError(f"match_block: expected {n * b} qubits per string, got {len(x_reg)}/{len(y_reg)}")
    per = mcx_ancillae(b)
    anc = _need(ancillae, n * per, "match_block")
    xor = [cx(yq, xq) for xq, yq in zip(x_reg, y_reg)]
    trees = []
    for j in range(n):
        block = [(q, False) for q in x_reg[j * b:(j + 1) * b]]
        trees.extend(mcx_tree_gates(block, out[j], anc[j * per:(j + 1) * per]))
    return _fragment(
        "match_block",
        xor + trees + xor,
        {"x": x_reg, "y": y_reg, "out": out},
        anc,
        # a one-bit block is a lone CX between the two XOR layers
        DepthBound("log", 2, 1 if b > 1 else 3, b),
    )


def build_ext(prev: Sequence[int], out: Sequence[int], i: int) -> OperatorFragment:
    """out[j] ^= prev[j] AND prev[j + 2^(i-1)] for every j with j + 2^i <= n."""
    n = _check_widths("ext", prev, out)
    if i < 1:
        raise ValueError(f"extension level must be >= 1, got {i}")
    half = 1 << (i - 1)
    js = range(max(n - 2 * half + 1, 0))
    # gates in the same half-block parity class share no qubits
    order = [j for j in js if (j // half) % 2 == 0] + [j for j in js if (j // half) % 2 == 1]
    gates = [ccx(prev[j], prev[j + half], out[j]) for j in order]
    return _fragment("ext", gates, {"prev": prev, "out": out}, (), DepthBound("const", 0, 2))


def build_reversal(reg: Sequence[int]) -> OperatorFragment:
    w = len(reg)
    gates = [swap(reg[p], reg[w - 1 - p]) for p in range(w // 2)]
    return _fragment("reversal", gates, {"reg": reg}, (), DepthBound("const", 0, 1))


# -- controlled register operators -----------------------------------------

def rotation_ancillae(width: int) -> int:
    return max(width // 2 - 1, 0)


def rotation_swap_layers(width: int, shift: int) -> list[list[tuple[int, int]]]:
    """Position pairs for rotate-right-by-``shift`` as three reversals in two layers."""
    whole = [(p, width - 1 - p) for p in range(width // 2)]
    head = [(p, shift - 1 - p) for p in range(shift // 2)]
    tail = [(shift + p, width - 1 - p) for p in range((width - shift) // 2)]
    return [whole, head + tail]


def build_ctrl_rot_pow2(
    control: int, reg: Sequence[int], m: int, ancillae: Sequence[int] = ()
) -> OperatorFragment:
    """If control is 1, move reg[p] to reg[(p + 2^m) mod L]; identity otherwise."""
    L = len(reg)
    if m < 0 or (1 << m) >= L:
        raise ValueError(f"rotation by 2^{m} needs 2^m < register width {L}")
    if control in reg:
        raise ValueError("rotation control inside the rotated register")
    anc = _need(ancillae, rotation_ancillae(L), "ctrl_rot")
    copies = [control] + anc
    spread = fanout_gates(control, anc)
    body = []
    for layer in rotation_swap_layers(L, 1 << m):
        body.extend(cswap(copies[k], reg[p], reg[q]) for k, (p, q) in enumerate(layer))
    return _fragment(
        "ctrl_rot",
        spread + body + spread[::-1],
        {"control": (control,), "reg": reg},
        anc,
        DepthBound("log", LOG_COEFF, LOG_CONST, L),
    )


def controlled_copy_ancillae(width: int) -> int:
    return max(width - 1, 0)


def build_ctrl_bitwise_and(
    control: int,
    a: Sequence[int],
    b: Sequence[int],
    out: Sequence[int],
    ancillae: Sequence[int] = (),
) -> OperatorFragment:
    """out[i] ^= control AND a[i] AND b[i], all positions in one parallel layer."""
    w = _check_widths("ctrl_and", a, b, out)
    anc = _need(ancillae, controlled_copy_ancillae(w), "ctrl_and")
    copies = [control] + anc
    spread = fanout_gates(control, anc)
    body = [mcx([(copies[i], True), (a[i], True), (b[i], True)], out[i]) for i in range(w)]
    return _fragment(
        "ctrl_and",
        spread + body + spread[::-1],
        {"control": (control,), "a": a, "b": b, "out": out},
        anc,
        DepthBound("log", LOG_COEFF, LOG_CONST, w),
    )


def build_crc(
    control: int, a: Sequence[int], b: Sequence[int], ancillae: Sequence[int] = ()
) -> OperatorFragment:
    """Copy with reverse control: b[i] ^= (NOT control) AND a[i]."""
    w = _check_widths("crc", a, b)
    anc = _need(ancillae, controlled_copy_ancillae(w), "crc")
    copies = [control] + anc
    spread = fanout_gates(control, anc)
    body = [ccx(copies[i], a[i], b[i]) for i in range(w)]
    gates = [x(control)] + spread + body + spread[::-1] + [x(control)]
    return _fragment(
        "crc",
        gates,
        {"control": (control,), "a": a, "b": b},
        anc,
        DepthBound("log", LOG_COEFF, LOG_CONST, w),
    )


def disjunction_ancillae(width: int) -> int:
    return mcx_ancillae(width)


def build_disjunction(a: Sequence[int], r: int, ancillae: Sequence[int] = ()) -> OperatorFragment:
    """r ^= OR(a), as NOT(AND(NOT a)) between two X batteries."""
    w = len(a)
    if w == 0:
        raise ValueError("disjunction over an empty register")
    anc = _need(ancillae, disjunction_ancillae(w), "disjunction")
    flips = [x(q) for q in a]
    tree = mcx_tree_gates([(q, True) for q in a], r, anc)
    return _fragment(
        "disjunction",
        flips + tree + flips + [x(r)],
        {"a": a, "r": (r,)},
        anc,
        DepthBound("log", LOG_COEFF, LOG_CONST, w),
    )


def fragment_ancilla_need(name: str, width: int, b: Optional[int] = None) -> int:
    """Ancilla count a builder needs for an operand of ``width`` qubits."""
    table = {
        "fanout": lambda: 0,
        "mcx": lambda: mcx_ancillae(width),
        "match": lambda: 0,
        "match_block": lambda: match_block_ancillae(width, b or 1),
        "ext": lambda: 0,
        "reversal": lambda: 0,
        "ctrl_rot": lambda: rotation_ancillae(width),
        "ctrl_and": lambda: controlled_copy_ancillae(width),
        "crc": lambda: controlled_copy_ancillae(width),
        "disjunction": lambda: disjunction_ancillae(width),
    }
    return table[name]()
