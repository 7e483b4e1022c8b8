"""Qudit gate constructors over computational-basis indices.

Indices are mixed-radix and row-major: the leftmost subsystem is the most
significant digit, so the two-qudit basis label (m, n) is the point m*d + n.
This convention is fixed package-wide and not configurable.
"""

from __future__ import annotations

import re
from collections.abc import Sequence
from dataclasses import InitVar, dataclass

from .permutation import Permutation, PermutationMatrix, identity

DEFAULT_POINT_CEILING = 2**24


@dataclass(frozen=True)
class QuditSystem:
    """n subsystems of dimension d, indexing d**n basis states."""

    d: int
    n: int
    point_ceiling: InitVar[int | None] = DEFAULT_POINT_CEILING

    def __post_init__(self, point_ceiling: int | None) -> None:
        if self.d < 2:
            raise ValueError("subsystem dimension must be at least 2")
        if self.n < 1:
            raise ValueError("subsystem count must be at least 1")
        if point_ceiling is not None and self.d**self.n > point_ceiling:
            raise ValueError(
                f"point count {self.d}**{self.n} exceeds ceiling {point_ceiling}"
            )

    @property
    def point_count(self) -> int:
        return self.d**self.n


def encode(system: QuditSystem, digits: Sequence[int]) -> int:
    """Mixed-radix index of a digit tuple, leftmost digit most significant."""
    if len(digits) != system.n:
        raise ValueError(f"expected {system.n} digits, got {len(digits)}")
    index = 0
    for x in digits:
        if not 0 <= x < system.d:
            raise ValueError(f"digit {x} out of range 0..{system.d - 1}")
        index = index * system.d + x
    return index


def decode(system: QuditSystem, index: int) -> tuple[int, ...]:
    """Digit tuple of a point index; inverse of encode."""
    if not 0 <= index < system.point_count:
        raise ValueError(f"index {index} out of range 0..{system.point_count - 1}")
    digits = [0] * system.n
    for k in range(system.n - 1, -1, -1):
        index, digits[k] = divmod(index, system.d)
    return tuple(digits)


def cnot1(d: int) -> Permutation:
    """Controlled shift with the first qudit as control: (m, n) -> (m, n+m)."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return Permutation(
        m * d + (n + m) % d for m in range(d) for n in range(d)
    )


def cnot2(d: int) -> Permutation:
    """Controlled shift with the second qudit as control: (m, n) -> (m+n, n)."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return Permutation(
        ((m + n) % d) * d + n for m in range(d) for n in range(d)
    )


def swap_perm(d: int) -> Permutation:
    """Exchange of two qudits: (m, n) -> (n, m)."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    return Permutation(n * d + m for m in range(d) for n in range(d))


def cyclic_shift(
    d: int, n: int, point_ceiling: int | None = DEFAULT_POINT_CEILING
) -> Permutation:
    """Rotate n subsystems by one position: (x0..x_{n-1}) -> (x_{n-1}, x0..)."""
    system = QuditSystem(d, n, point_ceiling)
    weight = d ** (n - 1)
    return Permutation(
        (i % d) * weight + i // d for i in range(system.point_count)
    )


def embed(
    system: QuditSystem, gate: Permutation, positions: Sequence[int]
) -> Permutation:
    """Act with a d**k-point gate on k chosen subsystems, identity elsewhere.

    positions[j] is the register position carrying the gate's j-th subsystem,
    so reordered positions rewire control and target.
    """
    positions = tuple(positions)
    k = len(positions)
    if len(set(positions)) != k:
        raise ValueError("positions must be distinct")
    for p in positions:
        if not 0 <= p < system.n:
            raise ValueError(f"position {p} out of range 0..{system.n - 1}")
    if gate.degree != system.d**k:
        raise ValueError(
            f"gate degree {gate.degree} does not match {system.d}**{k} points"
        )
    sub = QuditSystem(system.d, k, point_ceiling=None)
    images = []
    for point in range(system.point_count):
        digits = list(decode(system, point))
        sub_index = encode(sub, [digits[p] for p in positions])
        sub_digits = decode(sub, gate(sub_index))
        for p, x in zip(positions, sub_digits):
            digits[p] = x
        images.append(encode(system, digits))
    return Permutation(images)


_SIMPLE_KINDS = ("cnot1", "cnot2", "swap", "shift", "identity")
_EMBED_RE = re.compile(
    r"^embed\((?P<inner>[a-z0-9]+);positions=(?P<positions>\d+(?:,\d+)*)\)$"
)


@dataclass(frozen=True)
class GateId:
    """Parsed gate spec: a simple kind, or an embedding of one."""

    kind: str
    inner: "GateId | None" = None
    positions: tuple[int, ...] | None = None

    def spec(self) -> str:
        if self.kind != "embed":
            return self.kind
        pos = ",".join(map(str, self.positions))
        return f"embed({self.inner.spec()};positions={pos})"


def parse_gate_spec(text: str) -> GateId:
    """Parse "cnot1", "swap", "embed(cnot1;positions=0,2)", etc."""
    s = text.strip()
    if s in _SIMPLE_KINDS:
        return GateId(s)
    match = _EMBED_RE.match(s)
    if match:
        inner = match.group("inner")
        if inner not in _SIMPLE_KINDS:
            raise ValueError(f"unknown embedded gate {inner!r}")
        positions = tuple(int(p) for p in match.group("positions").split(","))
        if len(set(positions)) != len(positions):
            raise ValueError("embed positions must be distinct")
        return GateId("embed", inner=GateId(inner), positions=positions)
    raise ValueError(f"unparseable gate spec {text!r}")


def build_gate(
    gate: GateId | str,
    d: int,
    n: int | None = None,
    point_ceiling: int | None = DEFAULT_POINT_CEILING,
) -> tuple[Permutation, QuditSystem]:
    """Realize a gate spec as a permutation, returning it with its system."""
    if isinstance(gate, str):
        gate = parse_gate_spec(gate)
    kind = gate.kind
    if kind in ("cnot1", "cnot2", "swap"):
        if n not in (None, 2):
            raise ValueError(f"{kind} acts on exactly 2 subsystems, not {n}")
        system = QuditSystem(d, 2, point_ceiling)
        perm = {"cnot1": cnot1, "cnot2": cnot2, "swap": swap_perm}[kind](d)
    elif kind == "shift":
        count = d if n is None else n
        system = QuditSystem(d, count, point_ceiling)
        perm = cyclic_shift(d, count, point_ceiling)
    elif kind == "identity":
        count = 2 if n is None else n
        system = QuditSystem(d, count, point_ceiling)
        perm = identity(system.point_count)
    elif kind == "embed":
        if n is None:
            raise ValueError("embed needs an explicit subsystem count")
        system = QuditSystem(d, n, point_ceiling)
        k = len(gate.positions)
        inner_perm, _ = build_gate(gate.inner, d, n=k, point_ceiling=point_ceiling)
        perm = embed(system, inner_perm, gate.positions)
    else:
        raise ValueError(f"unknown gate kind {kind!r}")
    return perm, system


def wire_symbols(gate: GateId | str, n: int) -> dict[int, str]:
    """Per-wire circuit glyphs for a gate: control '*', target '+', swap 'x'."""
    if isinstance(gate, str):
        gate = parse_gate_spec(gate)
    if gate.kind == "cnot1":
        return {0: "*", 1: "+"}
    if gate.kind == "cnot2":
        return {0: "+", 1: "*"}
    if gate.kind == "swap":
        return {0: "x", 1: "x"}
    if gate.kind == "shift":
        return {w: "@" for w in range(n)}
    if gate.kind == "identity":
        return {}
    if gate.kind == "embed":
        inner = wire_symbols(gate.inner, len(gate.positions))
        return {gate.positions[w]: glyph for w, glyph in inner.items()}
    raise ValueError(f"unknown gate kind {gate.kind!r}")


def matrix_dense_rows(matrix: PermutationMatrix) -> list[str]:
    """Dense CSV rows of 0/1 entries, one string per matrix row."""
    rows = []
    for c in matrix.one_column_by_row():
        cells = ["0"] * matrix.degree
        cells[c] = "1"
        rows.append(",".join(cells))
    return rows


def matrix_sparse_lines(matrix: PermutationMatrix) -> list[str]:
    """Sparse "row,col" lines for the 1-entries, sorted by row."""
    return [f"{r},{c}" for r, c in enumerate(matrix.one_column_by_row())]
