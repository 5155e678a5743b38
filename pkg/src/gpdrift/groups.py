"""Vertex groups: the operations the normal form needs from each factor.

Elements are opaque to the rest of the library; a group object supplies
multiplication, inversion, an identity test, and a sampler that never
returns the identity (the letter alphabet excludes it).
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random


class VertexGroup:
    """Interface for one vertex group."""

    def multiply(self, x, y):
        raise NotImplementedError

    def invert(self, x):
        raise NotImplementedError

    def is_identity(self, x) -> bool:
        raise NotImplementedError

    def sample_nontrivial(self, rng: Random):
        raise NotImplementedError

    def from_int(self, k: int):
        """Map an integer onto a group element; magnitude samplers use this."""
        raise NotImplementedError


@dataclass(frozen=True)
class IntegerGroup(VertexGroup):
    """Infinite cyclic group written additively; elements are nonzero ints."""

    def multiply(self, x, y):
        return x + y

    def invert(self, x):
        return -x

    def is_identity(self, x) -> bool:
        return x == 0

    def sample_nontrivial(self, rng: Random):
        return rng.choice((1, -1))

    def from_int(self, k: int):
        return int(k)


@dataclass(frozen=True)
class CyclicGroup(VertexGroup):
    """Integers mod ``modulus`` under addition; elements are 0..modulus-1."""

    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")

    def multiply(self, x, y):
        return (x + y) % self.modulus

    def invert(self, x):
        return (-x) % self.modulus

    def is_identity(self, x) -> bool:
        return x % self.modulus == 0

    def sample_nontrivial(self, rng: Random):
        return rng.randrange(1, self.modulus)

    def from_int(self, k: int):
        return k % self.modulus


def uniform_groups(count: int, group: VertexGroup | None = None) -> tuple[VertexGroup, ...]:
    """One shared group object for every vertex (default: the integers)."""
    return tuple([group if group is not None else IntegerGroup()] * count)


def groups_from_spec(spec: str, count: int) -> tuple[VertexGroup, ...]:
    """Parse ``"z"``, ``"zmod:5"``, or a comma list with one entry per vertex."""
    parts = [p.strip() for p in spec.split(",")]
    if len(parts) == 1:
        parts = parts * count
    if len(parts) != count:
        raise ValueError(f"group spec lists {len(parts)} entries for {count} vertices")
    out: list[VertexGroup] = []
    for p in parts:
        if p == "z":
            out.append(IntegerGroup())
        elif p.startswith("zmod:"):
            try:
                out.append(CyclicGroup(int(p[5:])))
            except ValueError as exc:
                raise ValueError(f"bad modulus in group spec {p!r}") from exc
        else:
            raise ValueError(f"unknown group spec {p!r} (expected 'z' or 'zmod:<m>')")
    return tuple(out)
