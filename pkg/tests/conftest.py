"""Shared helpers for the test suite: random problems and partitions."""

from __future__ import annotations

import random

from gfcpc.drm import Problem, canonicalize_problem
from gfcpc.partition import Partition
from gfcpc.space import Space


def random_partition(rng: random.Random, space: Space, max_blocks: int = 4) -> Partition:
    """A uniform-ish random partition: each vector draws a label."""
    n_labels = rng.randint(1, max_blocks)
    labels = {u: rng.randrange(n_labels) for u in space.enumerate()}
    groups: dict[int, list] = {}
    for u, g in labels.items():
        groups.setdefault(g, []).append(u)
    return Partition.from_blocks(space, groups.values())


def random_problem(
    rng: random.Random,
    q: int = 2,
    k_max: int = 3,
    h_max: int = 3,
    d_max: int = 5,
) -> Problem:
    space = Space(q, rng.randint(1, k_max))
    H = rng.randint(1, h_max)
    partitions = [random_partition(rng, space) for _ in range(H)]
    distances = sorted(rng.randint(1, d_max) for _ in range(H))
    return canonicalize_problem(partitions, distances)
