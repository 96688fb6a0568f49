"""Classical bit-vector FSM algorithm and a naive brute-force oracle.

Bit-vectors are stored as Python ints with bit ``j`` holding position ``j``
of the vector.  "Shifting right by s" in the string-matching sense moves
position ``j`` to ``j + s``, which is an integer left shift here.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

X_SENTINEL = "$"
Y_SENTINEL = "%"
SENTINELS = frozenset((X_SENTINEL, Y_SENTINEL))


class Problem(enum.Enum):
    FPM = "fpm"
    FFM = "ffm"
    SFSC = "sfsc"

    @classmethod
    def parse(cls, value: "str | Problem") -> "Problem":
        if isinstance(value, Problem):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown problem kind {value!r}") from None


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def floor_log2(n: int) -> int:
    if n < 1:
        raise ValueError(f"floor_log2 needs a positive argument, got {n}")
    return n.bit_length() - 1


def ceil_log2(n: int) -> int:
    if n < 1:
        raise ValueError(f"ceil_log2 needs a positive argument, got {n}")
    return (n - 1).bit_length()


@dataclass(frozen=True)
class InputPair:
    """Two equal-length strings of power-of-two length ``n``.

    ``pad_inputs`` is the normal way to build one; constructing directly is
    allowed for already-prepared inputs (e.g. binary strings that are used
    without sentinels).
    """

    x: str
    y: str
    alphabet: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.x) != len(self.y):
            raise ValueError(f"length mismatch: |x|={len(self.x)}, |y|={len(self.y)}")
        if len(self.x) < 2 or not is_power_of_two(len(self.x)):
            raise ValueError(f"length must be a power of two >= 2, got {len(self.x)}")
        if not self.alphabet:
            chars = (set(self.x) | set(self.y)) - SENTINELS
            object.__setattr__(self, "alphabet", tuple(sorted(chars)))
        stray = (set(self.x) | set(self.y)) - set(self.alphabet) - SENTINELS
        if stray:
            raise ValueError(f"characters outside the alphabet: {sorted(stray)}")

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def sigma(self) -> int:
        return len(self.alphabet)

    @property
    def is_terminated(self) -> bool:
        return self.x[-1] == X_SENTINEL and self.y[-1] == Y_SENTINEL


def pad_inputs(
    x_raw: str, y_raw: str, alphabet: Optional[Iterable[str]] = None
) -> InputPair:
    """Terminate ``x_raw``/``y_raw`` with ``$``/``%`` and pad to a power of two."""
    if len(x_raw) != len(y_raw):
        raise ValueError(f"length mismatch: |x|={len(x_raw)}, |y|={len(y_raw)}")
    if not x_raw:
        raise ValueError("empty input")
    bad = (set(x_raw) | set(y_raw)) & SENTINELS
    if bad:
        raise ValueError(f"input contains reserved sentinel characters {sorted(bad)}")
    if alphabet is None:
        alpha = tuple(sorted(set(x_raw) | set(y_raw)))
    else:
        alpha = tuple(sorted(set(alphabet)))
        if SENTINELS & set(alpha):
            raise ValueError("alphabet may not contain sentinel characters")
    n = 1 << ceil_log2(len(x_raw) + 1)
    pad = n - len(x_raw)
    return InputPair(x_raw + X_SENTINEL * pad, y_raw + Y_SENTINEL * pad, alpha)


@dataclass(frozen=True)
class ProblemSpec:
    kind: Problem
    d: int
    j: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", Problem.parse(self.kind))
        if self.d < 1:
            raise ValueError(f"d must be positive, got {self.d}")
        if self.kind is Problem.FFM:
            if self.j is None or self.j < 0:
                raise ValueError("FFM needs a start position j >= 0")
        elif self.j is not None:
            raise ValueError(f"j is only meaningful for FFM, not {self.kind.name}")

    def check(self, n: int) -> None:
        if self.d > n:
            raise ValueError(f"d={self.d} exceeds n={n}")
        if self.kind is Problem.FFM and self.j > n - self.d:
            raise ValueError(f"j={self.j} out of range 0..{n - self.d}")

    @property
    def top_level(self) -> int:
        """Index of the highest set bit of ``d``: the last level processed."""
        return floor_log2(self.d)


@dataclass(frozen=True)
class BitVector:
    level: int
    bits: int
    width: int

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.width:
            raise IndexError(j)
        return (self.bits >> j) & 1

    def __len__(self) -> int:
        return self.width

    def __str__(self) -> str:
        return to_bitstring(self.bits, self.width)

    def set_positions(self) -> list[int]:
        return [j for j in range(self.width) if (self.bits >> j) & 1]


class MatchVector(BitVector):
    """lambda^level: bit j set iff the length-2^level blocks at j agree."""


class DVector(BitVector):
    """D^level, width n + 1."""


def to_bitstring(bits: int, width: int) -> str:
    return "".join("1" if (bits >> j) & 1 else "0" for j in range(width))


def from_bitstring(s: str) -> int:
    out = 0
    for j, ch in enumerate(s):
        if ch == "1":
            out |= 1 << j
        elif ch != "0":
            raise ValueError(f"not a bit string: {s!r}")
    return out


@dataclass(frozen=True)
class BitDecomposition:
    d: int
    dbar: tuple[int, ...]
    partial: tuple[int, ...]
    S: tuple[int, ...]

    def partial_sum(self, m: int) -> int:
        """Sum of dbar[i] * 2^i for i <= m; zero for m < 0."""
        if m < 0:
            return 0
        return self.partial[min(m, len(self.partial) - 1)]


def power_decomposition(d: int) -> BitDecomposition:
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    dbar = tuple((d >> i) & 1 for i in range(d.bit_length()))
    partial = []
    acc = 0
    for i, bit in enumerate(dbar):
        acc += bit << i
        partial.append(acc)
    S = tuple(i for i, bit in enumerate(dbar) if bit)
    return BitDecomposition(d, dbar, tuple(partial), S)


def lambda0(pair: InputPair) -> MatchVector:
    bits = 0
    for j, (a, b) in enumerate(zip(pair.x, pair.y)):
        if a == b:
            bits |= 1 << j
    return MatchVector(0, bits, pair.n)


def extend_lambda(prev: MatchVector) -> MatchVector:
    n = prev.width
    half = 1 << prev.level
    span = half << 1
    if span > n:
        return MatchVector(prev.level + 1, 0, n)
    # positions j with j + 2^i <= n
    valid = (1 << (n - span + 1)) - 1
    return MatchVector(prev.level + 1, prev.bits & (prev.bits >> half) & valid, n)


def lambda_levels(pair: InputPair, top: int) -> list[MatchVector]:
    lams = [lambda0(pair)]
    for _ in range(top):
        lams.append(extend_lambda(lams[-1]))
    return lams


def check_factor_lemma(
    pair: InputPair, j: int, d: int, lambdas: Sequence[MatchVector]
) -> bool:
    """Decide x[j..j+d-1] == y[j..j+d-1] from the lambda vectors alone."""
    if not 0 <= j <= pair.n - d:
        raise ValueError(f"j={j} out of range 0..{pair.n - d}")
    dec = power_decomposition(d)
    by_level = {lam.level: lam for lam in lambdas}
    return all(by_level[i][j + dec.partial_sum(i - 1)] for i in dec.S)


def init_dminus1(spec: ProblemSpec, n: int) -> DVector:
    spec.check(n)
    if spec.kind is Problem.FPM:
        bits = 1
    elif spec.kind is Problem.FFM:
        bits = 1 << spec.j
    else:
        bits = (1 << (n + 1)) - 1
    return DVector(-1, bits, n + 1)


@dataclass(frozen=True)
class FsmResult:
    answer: bool
    lambdas: list[MatchVector] = field(default_factory=list)
    dvectors: list[DVector] = field(default_factory=list)

    @property
    def final(self) -> DVector:
        return self.dvectors[-1]

    def d(self, level: int) -> DVector:
        return self.dvectors[level + 1]


def fsm_classical(pair: InputPair, spec: ProblemSpec) -> FsmResult:
    n = pair.n
    spec.check(n)
    dec = power_decomposition(spec.d)
    mask = (1 << (n + 1)) - 1
    lams = lambda_levels(pair, spec.top_level)
    ds = [init_dminus1(spec, n)]
    for i, lam in enumerate(lams):
        cur = ds[-1].bits
        if dec.dbar[i]:
            cur = ((cur & lam.bits) << (1 << i)) & mask
        ds.append(DVector(i, cur, n + 1))
    window = mask & ~((1 << spec.d) - 1)
    return FsmResult(bool(ds[-1].bits & window), lams, ds)


def brute_force_oracle(pair: InputPair, spec: ProblemSpec) -> bool:
    n, d = pair.n, spec.d
    spec.check(n)
    x, y = pair.x, pair.y

    def same(j: int) -> bool:
        for k in range(j, j + d):
            if x[k] != y[k]:
                return False
        return True

    if spec.kind is Problem.FPM:
        return same(0)
    if spec.kind is Problem.FFM:
        return same(spec.j)
    return any(same(j) for j in range(n - d + 1))
