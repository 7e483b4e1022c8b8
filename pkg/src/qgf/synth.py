"""Shortest-word synthesis over a generator set.

A word lists generator names in application order: the leftmost letter acts
first, so a word's permutation is compose(last, ..., compose(second, first)).
Synthesis runs a three-step pipeline (parity obstruction, exact membership,
bidirectional breadth-first search over the Cayley graph) and returns either
a minimum-length word, with ties broken lexicographically by generator index
sequence, or a certificate of why no word exists.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .group import (
    DEFAULT_ENUM_CAP,
    EnumerationCapExceeded,
    GeneratorSet,
    build_group,
)
from .parity import ParityVerdict, parity_feasible
from .permutation import Permutation, compose, identity, inverse

SYNTHESIZED = "synthesized"
PARITY_OBSTRUCTED = "parity-obstructed"
NOT_IN_GROUP = "not-in-group"
DEPTH_EXCEEDED = "depth-exceeded"


@dataclass(frozen=True)
class Word:
    """A sequence of generator names, applied left to right."""

    letters: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.letters)

    def to_text(self) -> str:
        return " ".join(self.letters)

    @classmethod
    def from_text(cls, text: str) -> "Word":
        return cls(tuple(text.split()))


@dataclass(frozen=True)
class SynthesisResult:
    """Outcome of a synthesis query, with its certificate."""

    outcome: str
    word: Word | None = None
    parity: ParityVerdict | None = None
    group_order: int | None = None
    detail: str | None = None


def evaluate_word(gens: GeneratorSet, word: Word | Sequence[str]) -> Permutation:
    """The permutation a word realizes; the empty word is the identity."""
    letters = word.letters if isinstance(word, Word) else tuple(word)
    result = identity(gens.degree)
    for letter in letters:
        result = compose(gens.get(letter), result)
    return result


def synthesize(
    gens: GeneratorSet,
    target: Permutation,
    max_depth: int,
    *,
    check_parity: bool = True,
    check_membership: bool = True,
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> SynthesisResult:
    """Find a shortest word realizing the target, or certify impossibility.

    With both checks enabled the search only runs on reachable targets, so
    DEPTH_EXCEEDED can only surface when a check is skipped or max_depth is
    shorter than the target's distance.
    """
    if target.degree != gens.degree:
        raise ValueError(
            f"degree mismatch: target {target.degree} vs generators {gens.degree}"
        )
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")

    if check_parity:
        verdict = parity_feasible(target, gens)
        if verdict.obstructed:
            return SynthesisResult(
                PARITY_OBSTRUCTED,
                parity=verdict,
                detail="target permutation is odd but every generator is even",
            )

    if check_membership:
        handle = build_group(gens, cap=enum_cap)
        if not handle.contains(target):
            return SynthesisResult(
                NOT_IN_GROUP,
                group_order=handle.order,
                detail=(
                    f"exhaustive membership failed: target is not in the "
                    f"generated group of order {handle.order}"
                ),
            )

    found = _bidirectional_search(gens, target, max_depth, enum_cap)
    if found[0] == "word":
        word = Word(tuple(gens.names[i] for i in found[1]))
        realized = evaluate_word(gens, word)
        if realized != target:
            raise RuntimeError("synthesized word failed verification")
        return SynthesisResult(SYNTHESIZED, word=word)
    if found[0] == "exhausted":
        return SynthesisResult(
            NOT_IN_GROUP,
            group_order=found[1],
            detail=(
                f"exhaustive membership failed: search explored the whole "
                f"generated group of order {found[1]} without reaching the target"
            ),
        )
    return SynthesisResult(
        DEPTH_EXCEEDED,
        detail=f"no word of length <= {max_depth} realizes the target",
    )


def _bidirectional_search(gens, target, max_depth, cap):
    """Meet-in-the-middle BFS; returns ("word", indices) | ("depth",) |
    ("exhausted", group_order).

    Forward states are prefix permutations; backward states are the prefix
    each suffix still requires, so the frontiers meet on equal permutations.
    Generators are not involutions in general, so the backward frontier
    expands by generator inverses and the backward word is kept in forward
    reading order by prepending letters.
    """
    perms = gens.permutations
    inv_perms = tuple(inverse(p) for p in perms)
    ident = identity(gens.degree)

    # levels hold (permutation, index word) in lexicographic word order;
    # seen maps images -> (depth, lex-least word of that depth)
    f_levels: list[list] = [[(ident, ())]]
    b_levels: list[list] = [[(target, ())]]
    f_seen = {ident.images: (0, ())}
    b_seen = {target.images: (0, ())}

    best: int | None = 0 if target.images in f_seen else None

    while True:
        i_max = len(f_levels) - 1
        j_max = len(b_levels) - 1
        if best is not None and best <= i_max + j_max:
            return ("word", _stitch(f_levels, b_levels, best))
        if i_max + j_max >= max_depth:
            return ("depth",)

        if i_max <= j_max:
            nxt = []
            for perm, word in f_levels[-1]:
                for gi, p in enumerate(perms):
                    h = compose(p, perm)
                    key = h.images
                    if key in f_seen:
                        continue
                    if len(f_seen) + len(b_seen) >= cap:
                        raise EnumerationCapExceeded(
                            cap, len(f_seen) + len(b_seen)
                        )
                    grown = word + (gi,)
                    f_seen[key] = (i_max + 1, grown)
                    nxt.append((h, grown))
                    if key in b_seen:
                        total = i_max + 1 + b_seen[key][0]
                        if best is None or total < best:
                            best = total
            if not nxt and best is None:
                return ("exhausted", len(f_seen))
            f_levels.append(nxt)
        else:
            nxt = []
            for gi, p_inv in enumerate(inv_perms):
                for perm, word in b_levels[-1]:
                    r = compose(p_inv, perm)
                    key = r.images
                    if key in b_seen:
                        continue
                    if len(f_seen) + len(b_seen) >= cap:
                        raise EnumerationCapExceeded(
                            cap, len(f_seen) + len(b_seen)
                        )
                    grown = (gi,) + word
                    b_seen[key] = (j_max + 1, grown)
                    nxt.append((r, grown))
                    if key in f_seen:
                        total = f_seen[key][0] + j_max + 1
                        if best is None or total < best:
                            best = total
            if not nxt and best is None:
                return ("exhausted", len(b_seen))
            b_levels.append(nxt)


def _stitch(f_levels, b_levels, total: int) -> tuple[int, ...]:
    """Lexicographically least optimal word over all meeting states.

    Every optimal word passes through every split of its length, so any one
    split sees them all; candidates are prefix+suffix at that split and their
    minimum is the global lexicographic minimum.
    """
    i_star = min(len(f_levels) - 1, total)
    j_star = total - i_star
    suffixes = {perm.images: word for perm, word in b_levels[j_star]}
    candidates = [
        word + suffixes[perm.images]
        for perm, word in f_levels[i_star]
        if perm.images in suffixes
    ]
    return min(candidates)


def render_circuit(
    word: Word | Sequence[str],
    symbols_by_letter: Mapping[str, Mapping[int, str]],
    n_wires: int,
) -> str:
    """Plain-text circuit: one line per subsystem, time flowing left to right.

    Each letter becomes a column of glyphs joined by a vertical connector
    across the wires it spans; inactive wires inside the span are crossed.
    """
    letters = word.letters if isinstance(word, Word) else tuple(word)
    labels = [f"q{w}: " for w in range(n_wires)]
    pad = max(len(lb) for lb in labels)
    labels = [lb.ljust(pad) for lb in labels]

    wire_rows = [[] for _ in range(n_wires)]
    link_rows = [[] for _ in range(n_wires - 1)]
    for letter in letters:
        symbols = symbols_by_letter.get(letter)
        if symbols is None:
            symbols = {w: f"[{letter}]" for w in range(n_wires)}
        active = sorted(symbols)
        lo = active[0] if active else 0
        hi = active[-1] if active else -1
        width = max([1] + [len(g) for g in symbols.values()])
        for w in range(n_wires):
            if w in symbols:
                glyph = symbols[w]
            elif lo < w < hi:
                glyph = "|"
            else:
                glyph = ""
            wire_rows[w].append("-" + glyph.center(width, "-") + "-")
        for w in range(n_wires - 1):
            joint = "|" if lo <= w and w + 1 <= hi else ""
            link_rows[w].append(" " + joint.center(width) + " ")

    lines = []
    for w in range(n_wires):
        lines.append(labels[w] + ("".join(wire_rows[w]) or "--"))
        if w < n_wires - 1:
            lines.append(" " * pad + "".join(link_rows[w]).rstrip())
    return "\n".join(lines)
