"""Exact decision procedures on the subgroup generated by a gate set.

Two engines back the same questions (order, membership): breadth-first
enumeration of the whole element set, which also yields the store the word
synthesizer searches, and a deterministic Schreier-Sims stabilizer chain for
groups too large to enumerate.  Both are exact; nothing is probabilistic.
"""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .permutation import Permutation, compose, identity, inverse

DEFAULT_ENUM_CAP = 2**22

METHOD_ENUMERATED = "enumerated"
METHOD_CHAIN = "stabilizer-chain"

CACHE_FORMAT_VERSION = 1


class EnumerationCapExceeded(RuntimeError):
    """Raised when a closure or search would exceed its element cap."""

    def __init__(self, cap: int, partial: int):
        self.cap = cap
        self.partial = partial
        super().__init__(
            f"element cap {cap} exceeded; {partial} elements found so far"
        )


@dataclass(frozen=True)
class GeneratorSet:
    """Named permutations acting on a common point set."""

    degree: int
    generators: tuple[tuple[str, Permutation], ...]

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("at least one generator is required")
        names = [name for name, _ in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"generator names must be unique, got {names}")
        for name, perm in self.generators:
            if perm.degree != self.degree:
                raise ValueError(
                    f"generator {name!r} has degree {perm.degree}, expected {self.degree}"
                )

    @classmethod
    def from_named(cls, pairs) -> "GeneratorSet":
        pairs = tuple((str(name), perm) for name, perm in pairs)
        if not pairs:
            raise ValueError("at least one generator is required")
        return cls(pairs[0][1].degree, pairs)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.generators)

    @property
    def permutations(self) -> tuple[Permutation, ...]:
        return tuple(perm for _, perm in self.generators)

    def get(self, name: str) -> Permutation:
        for nm, perm in self.generators:
            if nm == name:
                return perm
        raise ValueError(f"unknown generator {name!r}")


class _Level:
    __slots__ = ("point", "gens", "transversal", "orbit")

    def __init__(self, point: int):
        self.point = point
        self.gens: list[Permutation] = []
        # transversal[p] is a group element mapping this level's base point to p
        self.transversal: dict[int, Permutation] = {}
        self.orbit: list[int] = []


class StabilizerChain:
    """Deterministic Schreier-Sims stabilizer chain.

    New base points are the smallest point moved by the residue creating the
    level, orbits are explored breadth-first with the generator order fixed,
    and Schreier generators are processed in orbit discovery order, so equal
    inputs produce an identical chain on every run.
    """

    def __init__(self, gens: GeneratorSet):
        self.degree = gens.degree
        self.levels: list[_Level] = []
        for _, g in gens.generators:
            self._add(0, g)

    def order(self) -> int:
        total = 1
        for level in self.levels:
            total *= len(level.orbit)
        return total

    def base(self) -> tuple[int, ...]:
        return tuple(level.point for level in self.levels)

    def contains(self, perm: Permutation) -> bool:
        if perm.degree != self.degree:
            raise ValueError(
                f"degree mismatch: {perm.degree} vs {self.degree}"
            )
        residue, _ = self._sift(0, perm)
        return residue.is_identity()

    def _sift(self, start: int, g: Permutation) -> tuple[Permutation, int]:
        i = start
        while i < len(self.levels) and not g.is_identity():
            level = self.levels[i]
            rep = level.transversal.get(g(level.point))
            if rep is None:
                return g, i
            g = compose(inverse(rep), g)
            i += 1
        return g, i

    def _add(self, start: int, g: Permutation) -> None:
        residue, i = self._sift(start, g)
        if residue.is_identity():
            return
        if i == len(self.levels):
            moved = next(p for p in range(self.degree) if residue(p) != p)
            self.levels.append(_Level(moved))
        level = self.levels[i]
        level.gens.append(residue)
        self._rebuild_orbit(i)
        for p in list(level.orbit):
            u_p = level.transversal[p]
            for s in level.gens:
                u_q = level.transversal[s(p)]
                schreier = compose(inverse(u_q), compose(s, u_p))
                self._add(i + 1, schreier)

    def _rebuild_orbit(self, i: int) -> None:
        level = self.levels[i]
        level.transversal = {level.point: identity(self.degree)}
        level.orbit = [level.point]
        queue = deque([level.point])
        while queue:
            p = queue.popleft()
            u_p = level.transversal[p]
            for s in level.gens:
                q = s(p)
                if q not in level.transversal:
                    level.transversal[q] = compose(s, u_p)
                    level.orbit.append(q)
                    queue.append(q)

    def levels_data(self) -> list[dict]:
        return [
            {"point": lv.point, "generators": [list(g.images) for g in lv.gens]}
            for lv in self.levels
        ]

    @classmethod
    def from_levels_data(cls, degree: int, data: list[dict]) -> "StabilizerChain":
        chain = object.__new__(cls)
        chain.degree = degree
        chain.levels = []
        for entry in data:
            level = _Level(int(entry["point"]))
            for images in entry["generators"]:
                perm = Permutation(images)
                if perm.degree != degree:
                    raise ValueError("level generator degree mismatch")
                level.gens.append(perm)
            chain.levels.append(level)
        for i in range(len(chain.levels)):
            chain._rebuild_orbit(i)
        return chain


class GroupHandle:
    """A completed group computation: exact order plus a membership backend."""

    __slots__ = ("method", "degree", "order", "elements", "_index", "_chain")

    def __init__(
        self,
        method: str,
        degree: int,
        order: int,
        elements: tuple[Permutation, ...] | None = None,
        chain: StabilizerChain | None = None,
    ):
        if method == METHOD_ENUMERATED and elements is None:
            raise ValueError("enumerated handles carry the element store")
        if method == METHOD_CHAIN and chain is None:
            raise ValueError("chain handles carry the stabilizer chain")
        self.method = method
        self.degree = degree
        self.order = order
        self.elements = elements
        self._index = (
            frozenset(p.images for p in elements) if elements is not None else None
        )
        self._chain = chain

    def contains(self, perm: Permutation) -> bool:
        if perm.degree != self.degree:
            raise ValueError(
                f"degree mismatch: {perm.degree} vs {self.degree}"
            )
        if self._index is not None:
            return perm.images in self._index
        return self._chain.contains(perm)

    def __repr__(self) -> str:
        return (
            f"GroupHandle(method={self.method!r}, degree={self.degree}, "
            f"order={self.order})"
        )


def enumerate_group(
    gens: GeneratorSet, cap: int = DEFAULT_ENUM_CAP
) -> GroupHandle:
    """Breadth-first closure under right multiplication, deduplicated.

    Deterministic: FIFO frontier, generators applied in list order, elements
    stored in discovery order starting from the identity.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    start = identity(gens.degree)
    elements = [start]
    index = {start.images: 0}
    frontier = deque([start])
    perms = gens.permutations
    while frontier:
        g = frontier.popleft()
        for p in perms:
            h = compose(g, p)
            if h.images in index:
                continue
            if len(elements) >= cap:
                raise EnumerationCapExceeded(cap, len(elements))
            index[h.images] = len(elements)
            elements.append(h)
            frontier.append(h)
    return GroupHandle(
        METHOD_ENUMERATED, gens.degree, len(elements), elements=tuple(elements)
    )


def build_chain(gens: GeneratorSet) -> GroupHandle:
    """Stabilizer-chain handle: exact order and sifting membership."""
    chain = StabilizerChain(gens)
    return GroupHandle(METHOD_CHAIN, gens.degree, chain.order(), chain=chain)


def build_group(gens: GeneratorSet, cap: int = DEFAULT_ENUM_CAP) -> GroupHandle:
    """Enumerate when the group fits under the cap, else fall back to a chain."""
    try:
        return enumerate_group(gens, cap)
    except EnumerationCapExceeded:
        return build_chain(gens)


def group_order(gens: GeneratorSet) -> int:
    """Exact order of the generated group via the stabilizer chain."""
    return build_chain(gens).order


def group_contains(gens: GeneratorSet, target: Permutation) -> bool:
    """Whether target is a composition of the generators (exact)."""
    return build_chain(gens).contains(target)


def generator_digest(gens: GeneratorSet) -> str:
    """Canonical digest of a generator set, used as the cache key."""
    payload = json.dumps(
        {
            "degree": gens.degree,
            "generators": [[name, list(p.images)] for name, p in gens.generators],
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def cache_path(cache_dir: str | Path, gens: GeneratorSet, method: str) -> Path:
    return Path(cache_dir) / f"{generator_digest(gens)}.{method}.json"


def save_group(
    handle: GroupHandle, gens: GeneratorSet, cache_dir: str | Path
) -> Path:
    """Serialize a completed handle under a digest of its generator set."""
    data = {
        "format_version": CACHE_FORMAT_VERSION,
        "method": handle.method,
        "degree": handle.degree,
        "order": handle.order,
        "generators": [[name, list(p.images)] for name, p in gens.generators],
    }
    if handle.method == METHOD_ENUMERATED:
        data["elements"] = [list(p.images) for p in handle.elements]
    else:
        data["levels"] = handle._chain.levels_data()
    path = cache_path(cache_dir, gens, handle.method)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, separators=(",", ":")))
    return path


def load_group(
    gens: GeneratorSet, cache_dir: str | Path, method: str | None = None
) -> GroupHandle | None:
    """Load a cached handle, or None on miss, corruption or any mismatch."""
    methods = [method] if method else [METHOD_ENUMERATED, METHOD_CHAIN]
    expected_gens = [[name, list(p.images)] for name, p in gens.generators]
    for m in methods:
        path = cache_path(cache_dir, gens, m)
        if not path.is_file():
            continue
        try:
            data = json.loads(path.read_text())
            if data["format_version"] != CACHE_FORMAT_VERSION:
                continue
            if data["method"] != m or data["degree"] != gens.degree:
                continue
            if data["generators"] != expected_gens:
                continue
            if m == METHOD_ENUMERATED:
                elements = tuple(Permutation(imgs) for imgs in data["elements"])
                if len(elements) != data["order"] or not elements[0].is_identity():
                    continue
                handle = GroupHandle(
                    m, gens.degree, len(elements), elements=elements
                )
            else:
                chain = StabilizerChain.from_levels_data(
                    gens.degree, data["levels"]
                )
                if chain.order() != data["order"]:
                    continue
                handle = GroupHandle(m, gens.degree, chain.order(), chain=chain)
            # a cache entry must agree that the generators are members
            if not all(handle.contains(p) for p in gens.permutations):
                continue
            return handle
        except (KeyError, TypeError, ValueError, OSError, json.JSONDecodeError):
            continue
    return None
