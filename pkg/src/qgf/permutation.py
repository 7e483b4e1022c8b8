"""Exact permutation algebra on the point set {0, ..., N-1}.

Permutations are immutable image tables: ``images[i]`` is where point ``i``
goes.  Composition follows the "tau first, then sigma" convention, so
``compose(sigma, tau)(i) == sigma(tau(i))``.
"""

from __future__ import annotations

import enum
import re
from collections.abc import Iterable
from dataclasses import dataclass


class Permutation:
    """A bijection on {0..N-1} stored as a tuple of images."""

    __slots__ = ("_images",)

    def __init__(self, images: Iterable[int]):
        imgs = tuple(images)
        if not imgs:
            raise ValueError("a permutation needs at least one point")
        if set(imgs) != set(range(len(imgs))):
            raise ValueError(
                f"images {imgs!r} are not a bijection on 0..{len(imgs) - 1}"
            )
        self._images = imgs

    @property
    def images(self) -> tuple[int, ...]:
        return self._images

    @property
    def degree(self) -> int:
        return len(self._images)

    def __call__(self, point: int) -> int:
        return self._images[point]

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __pow__(self, exponent: int) -> Permutation:
        if exponent < 0:
            return inverse(self) ** (-exponent)
        result = identity(self.degree)
        base = self
        k = exponent
        while k:
            if k & 1:
                result = compose(result, base)
            base = compose(base, base)
            k >>= 1
        return result

    def inverse(self) -> Permutation:
        return inverse(self)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self._images))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._images == other._images

    def __hash__(self) -> int:
        return hash(self._images)

    def __repr__(self) -> str:
        return f"Permutation({list(self._images)!r})"


@dataclass(frozen=True)
class CycleData:
    """Canonical disjoint-cycle decomposition with derived statistics.

    Cycles cover every point (fixed points appear as 1-cycles), each cycle
    starts at its smallest element, and cycles are ordered by that element.
    """

    cycles: tuple[tuple[int, ...], ...]
    cycle_type: tuple[int, ...]
    fixed_points: int
    transposition_count: int
    signature: int


class MatrixConvention(enum.Enum):
    """Which axis of the 0/1 matrix indexes the input point."""

    COLUMN_IS_INPUT = "column-is-input"
    ROW_IS_INPUT = "row-is-input"


@dataclass(frozen=True)
class PermutationMatrix:
    """0/1 matrix view over a permutation; never stored densely.

    Under COLUMN_IS_INPUT, entry (j, i) is 1 iff sigma(i) = j.  ROW_IS_INPUT
    is the transpose: entry (i, j) is 1 iff sigma(i) = j.
    """

    perm: Permutation
    convention: MatrixConvention

    @property
    def degree(self) -> int:
        return self.perm.degree

    def entry(self, row: int, col: int) -> int:
        if self.convention is MatrixConvention.COLUMN_IS_INPUT:
            return 1 if self.perm(col) == row else 0
        return 1 if self.perm(row) == col else 0

    def one_column_by_row(self) -> tuple[int, ...]:
        """For each row, the column holding that row's single 1."""
        if self.convention is MatrixConvention.ROW_IS_INPUT:
            return self.perm.images
        return inverse(self.perm).images

    def row(self, r: int) -> tuple[int, ...]:
        cells = [0] * self.degree
        cells[self.one_column_by_row()[r]] = 1
        return tuple(cells)

    def to_dense(self) -> list[list[int]]:
        cols = self.one_column_by_row()
        dense = []
        for c in cols:
            cells = [0] * self.degree
            cells[c] = 1
            dense.append(cells)
        return dense

    def transposed(self) -> PermutationMatrix:
        if self.convention is MatrixConvention.COLUMN_IS_INPUT:
            return PermutationMatrix(self.perm, MatrixConvention.ROW_IS_INPUT)
        return PermutationMatrix(self.perm, MatrixConvention.COLUMN_IS_INPUT)


def identity(degree: int) -> Permutation:
    """The identity permutation on ``degree`` points."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    return Permutation(range(degree))


def compose(sigma: Permutation, tau: Permutation) -> Permutation:
    """Apply tau first, then sigma: result(i) = sigma(tau(i))."""
    if sigma.degree != tau.degree:
        raise ValueError(
            f"degree mismatch: {sigma.degree} vs {tau.degree}"
        )
    s = sigma.images
    return Permutation(s[t] for t in tau.images)


def inverse(sigma: Permutation) -> Permutation:
    """The permutation undoing sigma."""
    inv = [0] * sigma.degree
    for i, j in enumerate(sigma.images):
        inv[j] = i
    return Permutation(inv)


def cycle_decomposition(sigma: Permutation) -> CycleData:
    """Disjoint cycles of sigma in canonical order, plus derived counts."""
    images = sigma.images
    n = sigma.degree
    seen = bytearray(n)
    cycles = []
    for start in range(n):
        if seen[start]:
            continue
        cycle = []
        cur = start
        while not seen[cur]:
            seen[cur] = 1
            cycle.append(cur)
            cur = images[cur]
        cycles.append(tuple(cycle))
    transpositions = n - len(cycles)
    return CycleData(
        cycles=tuple(cycles),
        cycle_type=tuple(sorted(len(c) for c in cycles)),
        fixed_points=sum(1 for c in cycles if len(c) == 1),
        transposition_count=transpositions,
        signature=1 if transpositions % 2 == 0 else -1,
    )


def signature(sigma: Permutation) -> int:
    """+1 for even permutations, -1 for odd: (-1)**(N - cycle count)."""
    images = sigma.images
    n = sigma.degree
    seen = bytearray(n)
    cycles = 0
    for start in range(n):
        if seen[start]:
            continue
        cycles += 1
        cur = start
        while not seen[cur]:
            seen[cur] = 1
            cur = images[cur]
    return 1 if (n - cycles) % 2 == 0 else -1


def inversion_count(sigma: Permutation) -> int:
    """Number of pairs i < j with sigma(i) > sigma(j), by merge counting."""

    def count(seq: list[int]) -> tuple[list[int], int]:
        if len(seq) <= 1:
            return seq, 0
        mid = len(seq) // 2
        left, a = count(seq[:mid])
        right, b = count(seq[mid:])
        merged: list[int] = []
        inv = a + b
        i = j = 0
        while i < len(left) and j < len(right):
            if left[i] <= right[j]:
                merged.append(left[i])
                i += 1
            else:
                merged.append(right[j])
                j += 1
                inv += len(left) - i
        merged.extend(left[i:])
        merged.extend(right[j:])
        return merged, inv

    return count(list(sigma.images))[1]


def to_matrix(
    sigma: Permutation, convention: MatrixConvention
) -> PermutationMatrix:
    """The 0/1 matrix view of sigma under the given convention."""
    if not isinstance(convention, MatrixConvention):
        raise ValueError(f"unknown matrix convention {convention!r}")
    return PermutationMatrix(sigma, convention)


def determinant_sign(matrix: PermutationMatrix) -> int:
    """Determinant sign by integer elimination with row-swap sign tracking.

    Deliberately independent of cycle counting: the matrix is reduced to the
    identity by row swaps, each negating the determinant.  Every pivot of a
    permutation matrix is 1 and every eliminated column is already clear, so
    the accumulated swap sign is the determinant.
    """
    col_of_row = list(matrix.one_column_by_row())
    n = len(col_of_row)
    row_of_col = [0] * n
    for r, c in enumerate(col_of_row):
        row_of_col[c] = r
    sign = 1
    for k in range(n):
        r = row_of_col[k]
        if r != k:
            col_of_row[k], col_of_row[r] = col_of_row[r], col_of_row[k]
            row_of_col[col_of_row[k]] = k
            row_of_col[col_of_row[r]] = r
            sign = -sign
    return sign


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def format_cycles(sigma: Permutation) -> str:
    """Cycle-notation text, fixed points omitted; "()" for the identity."""
    parts = [
        "(" + " ".join(map(str, c)) + ")"
        for c in cycle_decomposition(sigma).cycles
        if len(c) > 1
    ]
    return "".join(parts) or "()"


def parse_cycles(text: str, degree: int | None = None) -> Permutation:
    """Parse cycle-notation text like "(1 3)(2 6)(5 7)".

    Points not mentioned are fixed.  The degree is inferred from the largest
    point unless given explicitly.
    """
    leftover = _CYCLE_RE.sub("", text)
    if leftover.strip():
        raise ValueError(f"unparseable cycle text {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        points = [int(tok) for tok in re.split(r"[,\s]+", body.strip()) if tok]
        if points:
            cycles.append(points)
    all_points = [p for c in cycles for p in c]
    if len(set(all_points)) != len(all_points):
        raise ValueError("cycles are not disjoint")
    needed = max(all_points) + 1 if all_points else 1
    if degree is None:
        degree = needed
    elif degree < needed:
        raise ValueError(f"degree {degree} too small for point {needed - 1}")
    images = list(range(degree))
    for cycle in cycles:
        for a, b in zip(cycle, cycle[1:]):
            images[a] = b
        images[cycle[-1]] = cycle[0]
    return Permutation(images)


def parse_two_line(text: str) -> Permutation:
    """Parse two-line notation: a line of points over a line of images."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 2:
        raise ValueError("two-line notation needs exactly two rows")
    top = [int(tok) for tok in lines[0].split()]
    bottom = [int(tok) for tok in lines[1].split()]
    if len(top) != len(bottom):
        raise ValueError("rows have different lengths")
    if set(top) != set(range(len(top))):
        raise ValueError("top row must list each point exactly once")
    images = [0] * len(top)
    for point, image in zip(top, bottom):
        images[point] = image
    return Permutation(images)
