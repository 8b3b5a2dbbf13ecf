"""Breadth-first search over finite map spaces, shared by the contiguity and
finite-space homotopy deciders."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Optional

from .errors import BadParameter, ResourceLimit


@dataclass(frozen=True)
class SearchLimits:
    max_states: int = 250_000
    max_neighbors: int = 250_000

    def __post_init__(self):
        if self.max_states <= 0 or self.max_neighbors <= 0:
            raise BadParameter("search limits must be positive")


DEFAULT_LIMITS = SearchLimits()


def bfs_path(
    start: Hashable,
    is_target: Callable[[Hashable], bool],
    neighbors: Callable[[Hashable], Iterable[Hashable]],
    limits: SearchLimits = DEFAULT_LIMITS,
) -> Optional[list]:
    """Shortest path from ``start`` to a target state, or None once the
    reachable component is exhausted.  Raises ResourceLimit when the budget
    runs out before either happens.

    Neighbours are expanded in the order ``neighbors`` yields them, so the
    returned path is deterministic.
    """
    if is_target(start):
        return [start]
    parent = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        count = 0
        for nb in neighbors(cur):
            count += 1
            if count > limits.max_neighbors:
                raise ResourceLimit(f"more than {limits.max_neighbors} neighbours of one state")
            if nb in parent:
                continue
            parent[nb] = cur
            if is_target(nb):
                path = [nb]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
            if len(parent) > limits.max_states:
                raise ResourceLimit(f"search exceeded {limits.max_states} states")
            queue.append(nb)
    return None


def component(
    start: Hashable,
    neighbors: Callable[[Hashable], Iterable[Hashable]],
    limits: SearchLimits = DEFAULT_LIMITS,
) -> set:
    """Every state reachable from ``start``."""
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nb in neighbors(cur):
            if nb not in seen:
                seen.add(nb)
                if len(seen) > limits.max_states:
                    raise ResourceLimit(f"component exceeded {limits.max_states} states")
                queue.append(nb)
    return seen


def dedupe_consecutive(seq: list) -> list:
    out = []
    for x in seq:
        if not out or out[-1] != x:
            out.append(x)
    return out
