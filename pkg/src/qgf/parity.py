"""Closed-form gate statistics and the parity obstruction test.

The closed forms for CNOT and the subsystem cycle hold for prime dimensions
and refuse composite ones; callers fall back to direct cycle computation.
The SWAP count holds for every dimension.  The obstruction test is sound but
incomplete: an obstructed verdict proves impossibility, a clear verdict
proves nothing (the group engine decides exactly).
"""

from __future__ import annotations

from dataclasses import dataclass

from .gates import DEFAULT_POINT_CEILING, GateId, build_gate, parse_gate_spec
from .group import GeneratorSet
from .permutation import Permutation, cycle_decomposition, signature

CLOSED_FORM = "closed-form"
DIRECT = "direct"


class CompositeDimensionError(ValueError):
    """A prime-only closed form was asked about a composite dimension."""

    def __init__(self, d: int, what: str):
        super().__init__(
            f"{what} closed form assumes a prime dimension; {d} is composite "
            "(use direct computation instead)"
        )


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class GateStats:
    """Cycle statistics of a gate's permutation on its basis states."""

    d: int
    gate: str
    fixed_points: int
    cycle_count_by_length: dict[int, int]
    transposition_count: int
    signature: int
    source: str

    def __post_init__(self) -> None:
        expected_sig = 1 if self.transposition_count % 2 == 0 else -1
        if self.signature != expected_sig:
            raise ValueError("signature disagrees with transposition parity")
        if self.fixed_points != self.cycle_count_by_length.get(1, 0):
            raise ValueError("fixed point count disagrees with 1-cycle count")
        transpositions = sum(
            (length - 1) * count
            for length, count in self.cycle_count_by_length.items()
        )
        if transpositions != self.transposition_count:
            raise ValueError("transposition count disagrees with cycle counts")

    @property
    def point_count(self) -> int:
        return sum(
            length * count for length, count in self.cycle_count_by_length.items()
        )


@dataclass(frozen=True)
class ParityVerdict:
    """Outcome of the parity obstruction test."""

    target_signature: int
    generator_signatures: tuple[int, ...]
    obstructed: bool


def cnot_stats_closed_form(d: int, kind: str = "cnot1") -> GateStats:
    """Prime-d CNOT: d fixed states, (d-1) d-cycles, (d-1)**2 transpositions."""
    if kind not in ("cnot1", "cnot2"):
        raise ValueError(f"kind must be cnot1 or cnot2, not {kind!r}")
    if not is_prime(d):
        raise CompositeDimensionError(d, "the CNOT")
    transpositions = (d - 1) ** 2
    return GateStats(
        d=d,
        gate=kind,
        fixed_points=d,
        cycle_count_by_length={1: d, d: d - 1},
        transposition_count=transpositions,
        signature=1 if transpositions % 2 == 0 else -1,
        source=CLOSED_FORM,
    )


def swap_stats_closed_form(d: int) -> GateStats:
    """SWAP for any d: d fixed states and d(d-1)/2 transpositions."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    transpositions = d * (d - 1) // 2
    return GateStats(
        d=d,
        gate="swap",
        fixed_points=d,
        cycle_count_by_length={1: d, 2: transpositions},
        transposition_count=transpositions,
        signature=1 if transpositions % 2 == 0 else -1,
        source=CLOSED_FORM,
    )


def embedded_cnot_signature(d: int) -> int:
    """Signature of a CNOT acting inside a d**d-point register of d qudits.

    The CNOT's (d-1)**2 transpositions repeat once per identity copy, giving
    (-1)**((d-1)**2 * d**(d-2)): -1 exactly when d = 2.
    """
    if not is_prime(d):
        raise CompositeDimensionError(d, "the embedded CNOT")
    exponent = (d - 1) ** 2 * d ** (d - 2)
    return 1 if exponent % 2 == 0 else -1


def cyclic_shift_stats_closed_form(d: int) -> GateStats:
    """Prime-d cycle of d qudits: d fixed states, (d**d - d)/d d-cycles."""
    if not is_prime(d):
        raise CompositeDimensionError(d, "the cyclic shift")
    d_cycles = (d**d - d) // d
    transpositions = (d ** (d - 1) - 1) * (d - 1)
    return GateStats(
        d=d,
        gate="shift",
        fixed_points=d,
        cycle_count_by_length={1: d, d: d_cycles},
        transposition_count=transpositions,
        signature=1 if transpositions % 2 == 0 else -1,
        source=CLOSED_FORM,
    )


def stats_from_permutation(
    perm: Permutation, d: int, gate: str, source: str = DIRECT
) -> GateStats:
    """GateStats from a direct cycle decomposition of the permutation."""
    data = cycle_decomposition(perm)
    by_length: dict[int, int] = {}
    for length in data.cycle_type:
        by_length[length] = by_length.get(length, 0) + 1
    return GateStats(
        d=d,
        gate=gate,
        fixed_points=data.fixed_points,
        cycle_count_by_length=by_length,
        transposition_count=data.transposition_count,
        signature=data.signature,
        source=source,
    )


def closed_form_stats(
    gate: GateId | str, d: int, n: int | None = None
) -> GateStats | None:
    """The applicable closed form, or None when none is proven for the case."""
    if isinstance(gate, str):
        gate = parse_gate_spec(gate)
    if gate.kind in ("cnot1", "cnot2") and n in (None, 2) and is_prime(d):
        return cnot_stats_closed_form(d, gate.kind)
    if gate.kind == "swap" and n in (None, 2):
        return swap_stats_closed_form(d)
    if gate.kind == "shift" and (n is None or n == d) and is_prime(d):
        return cyclic_shift_stats_closed_form(d)
    return None


def gate_stats(
    gate: GateId | str,
    d: int,
    n: int | None = None,
    point_ceiling: int | None = DEFAULT_POINT_CEILING,
) -> GateStats:
    """Closed-form statistics when proven, else direct computation."""
    if isinstance(gate, str):
        gate = parse_gate_spec(gate)
    closed = closed_form_stats(gate, d, n)
    if closed is not None:
        return closed
    perm, _ = build_gate(gate, d, n, point_ceiling)
    return stats_from_permutation(perm, d, gate.spec(), source=DIRECT)


def stats_table_rows(
    gate: GateId | str,
    d_values,
    n: int | None = None,
    point_ceiling: int | None = DEFAULT_POINT_CEILING,
) -> list[GateStats]:
    """One GateStats per dimension, closed form where available."""
    return [gate_stats(gate, d, n, point_ceiling) for d in d_values]


def parity_feasible(target: Permutation, gens: GeneratorSet) -> ParityVerdict:
    """Necessary condition: an odd target cannot be a product of even gates."""
    if gens.degree != target.degree:
        raise ValueError(
            f"degree mismatch: target {target.degree} vs generators {gens.degree}"
        )
    target_sig = signature(target)
    gen_sigs = tuple(signature(p) for p in gens.permutations)
    obstructed = target_sig == -1 and all(s == 1 for s in gen_sigs)
    return ParityVerdict(target_sig, gen_sigs, obstructed)
