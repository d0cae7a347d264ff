"""Distance requirement matrices for single partitions and multi-partition problems.

A problem pairs H partitions with ascending distance demands d_1 <= ... <= d_H.
The requirement matrix records, per message pair, how much parity distance is
still needed once the message Hamming distance is accounted for; the binding
demand comes from the largest-index partition separating the pair.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Sequence, TextIO

from .errors import InputError, ShapeError
from .partition import Partition
from .space import Space, Vec, hamming_distance

DRM_MAGIC = "gfcpc-drm v1"


@dataclass(frozen=True)
class Problem:
    """H partitions with distances, canonically sorted ascending by distance."""

    space: Space
    partitions: tuple[Partition, ...]
    distances: tuple[int, ...]
    # original_order[j] = caller's index of the j-th canonical (partition, distance) pair
    original_order: tuple[int, ...]

    @property
    def H(self) -> int:
        return len(self.partitions)

    def t(self, h: int) -> int:
        """Correctable error weight for level h (1-based): floor((d_h - 1) / 2)."""
        return (self.distances[h - 1] - 1) // 2


def canonicalize_problem(
    partitions: Sequence[Partition], distances: Sequence[int]
) -> Problem:
    """Stably sort (partition, distance) pairs by distance, recording the permutation."""
    if len(partitions) != len(distances):
        raise InputError(
            f"{len(partitions)} partitions but {len(distances)} distances"
        )
    if not partitions:
        raise InputError("a problem needs at least one partition")
    space = partitions[0].space
    for p in partitions[1:]:
        if p.space != space:
            raise ShapeError(f"space mismatch: {p.space} vs {space}")
    for d in distances:
        if d < 1:
            raise InputError(f"distances must be positive, got {d}")
    order = sorted(range(len(distances)), key=lambda i: distances[i])
    return Problem(
        space=space,
        partitions=tuple(partitions[i] for i in order),
        distances=tuple(distances[i] for i in order),
        original_order=tuple(order),
    )


@dataclass(frozen=True)
class RequirementMatrix:
    """Symmetric nonnegative parity-distance demands over an ordered message list.

    source_level[i][j] is the 1-based index of the partition that set the
    entry, or None on the diagonal and for pairs no partition separates.
    """

    messages: tuple[Vec, ...]
    entries: tuple[tuple[int, ...], ...]
    source_level: tuple[tuple[int | None, ...], ...]

    @property
    def m(self) -> int:
        return len(self.messages)

    def entry(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def max_entry(self) -> int:
        return max((e for row in self.entries for e in row), default=0)

    def is_zero(self) -> bool:
        return self.max_entry() == 0


def _check_messages(msgs: Sequence[Vec], space: Space) -> tuple[Vec, ...]:
    out = tuple(space.validate(u) for u in msgs)
    if len(set(out)) != len(out):
        raise InputError("duplicate messages in DRM request")
    return out


def single_drm(p: Partition, d: int, msgs: Sequence[Vec]) -> RequirementMatrix:
    """Demands max(d - d(u_i, u_j), 0) between messages in different blocks of p."""
    if d < 1:
        raise InputError(f"distance must be positive, got {d}")
    messages = _check_messages(msgs, p.space)
    m = len(messages)
    entries = [[0] * m for _ in range(m)]
    levels: list[list[int | None]] = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            if p.block_of(messages[i]) != p.block_of(messages[j]):
                need = max(d - hamming_distance(messages[i], messages[j]), 0)
                entries[i][j] = entries[j][i] = need
                levels[i][j] = levels[j][i] = 1
    return RequirementMatrix(
        messages, tuple(map(tuple, entries)), tuple(map(tuple, levels))
    )


def gfcpc_drm(prob: Problem, msgs: Sequence[Vec]) -> RequirementMatrix:
    """Definition of the multi-partition requirement matrix.

    The entry for a separated pair uses the largest h whose partition splits
    the pair; with ascending distances that level carries the binding demand.
    """
    messages = _check_messages(msgs, prob.space)
    m = len(messages)
    entries = [[0] * m for _ in range(m)]
    levels: list[list[int | None]] = [[None] * m for _ in range(m)]
    block_ids = [
        [p.block_of(u) for u in messages] for p in prob.partitions
    ]
    for i in range(m):
        for j in range(i + 1, m):
            h_prime = 0
            for h in range(prob.H, 0, -1):
                if block_ids[h - 1][i] != block_ids[h - 1][j]:
                    h_prime = h
                    break
            if h_prime == 0:
                continue
            need = max(
                prob.distances[h_prime - 1]
                - hamming_distance(messages[i], messages[j]),
                0,
            )
            entries[i][j] = entries[j][i] = need
            levels[i][j] = levels[j][i] = h_prime
    return RequirementMatrix(
        messages, tuple(map(tuple, entries)), tuple(map(tuple, levels))
    )


def entrywise_max(ms: Sequence[RequirementMatrix]) -> RequirementMatrix:
    """Entry-by-entry maximum over matrices sharing one message order."""
    if not ms:
        raise InputError("entrywise_max needs at least one matrix")
    first = ms[0]
    for other in ms[1:]:
        if other.messages != first.messages:
            raise ShapeError("requirement matrices use different message orders")
    m = first.m
    entries = [[0] * m for _ in range(m)]
    levels: list[list[int | None]] = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            best = max(mat.entries[i][j] for mat in ms)
            entries[i][j] = best
            # largest contributing matrix index wins on ties
            contributing = [
                idx
                for idx, mat in enumerate(ms, start=1)
                if mat.source_level[i][j] is not None and mat.entries[i][j] == best
            ]
            levels[i][j] = max(contributing) if contributing else None
    return RequirementMatrix(
        first.messages, tuple(map(tuple, entries)), tuple(map(tuple, levels))
    )


# ---------------------------------------------------------------------------
# File format: gfcpc-drm v1


def write_drm(mat: RequirementMatrix, space: Space, out: TextIO) -> None:
    out.write(f"{DRM_MAGIC}\n")
    out.write(f"m {mat.m}\n")
    for row in mat.entries:
        out.write(" ".join(str(e) for e in row) + "\n")
    for i, u in enumerate(mat.messages):
        out.write(f"msg {i} {space.render(u)}\n")


def drm_to_text(mat: RequirementMatrix, space: Space) -> str:
    buf = io.StringIO()
    write_drm(mat, space, buf)
    return buf.getvalue()


def read_drm(src: TextIO, space: Space) -> RequirementMatrix:
    lines = [ln for ln in src.read().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != DRM_MAGIC:
        raise InputError(f"line 1: expected header {DRM_MAGIC!r}")
    if len(lines) < 2 or not lines[1].startswith("m "):
        raise InputError("line 2: expected 'm <M>'")
    try:
        m = int(lines[1].split()[1])
    except (IndexError, ValueError):
        raise InputError("line 2: expected 'm <M>'") from None
    if len(lines) != 2 + 2 * m:
        raise InputError(f"expected {2 + 2 * m} lines for m={m}, got {len(lines)}")
    entries = []
    for lineno, line in enumerate(lines[2 : 2 + m], start=3):
        try:
            row = tuple(int(x) for x in line.split())
        except ValueError:
            raise InputError(f"line {lineno}: non-integer matrix entry") from None
        if len(row) != m:
            raise InputError(f"line {lineno}: expected {m} entries, got {len(row)}")
        if any(e < 0 for e in row):
            raise InputError(f"line {lineno}: negative entry")
        entries.append(row)
    messages: list[Vec] = []
    for lineno, line in enumerate(lines[2 + m :], start=3 + m):
        fields = line.split()
        if len(fields) != 3 or fields[0] != "msg" or fields[1] != str(len(messages)):
            raise InputError(f"line {lineno}: expected 'msg {len(messages)} <vec>'")
        messages.append(space.parse(fields[2]))
    for i in range(m):
        for j in range(m):
            if entries[i][j] != entries[j][i]:
                raise InputError(f"matrix not symmetric at ({i}, {j})")
        if entries[i][i] != 0:
            raise InputError(f"nonzero diagonal at ({i}, {i})")
    levels = tuple(
        tuple(None for _ in range(m)) for _ in range(m)
    )
    return RequirementMatrix(tuple(messages), tuple(entries), levels)
