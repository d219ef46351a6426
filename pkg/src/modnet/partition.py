"""Ordered partitions of agent sets, stored as bitmasks."""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import IndexOutOfRange, NotAPartition


class OrderedPartition:
    """A sequence of nonempty, pairwise disjoint agent masks.

    The carrier is the union of the parts; it need not be the whole agent set.
    """

    __slots__ = ("_parts",)

    def __init__(self, parts: Iterable[int]):
        parts = tuple(int(p) for p in parts)
        seen = 0
        for i, p in enumerate(parts, 1):
            if p <= 0:
                raise NotAPartition(f"part {i} is empty")
            if p & seen:
                raise NotAPartition(f"part {i} overlaps an earlier part")
            seen |= p
        self._parts = parts

    @classmethod
    def of(cls, net, parts: Iterable[Iterable]) -> "OrderedPartition":
        """Build from agent names or indices, e.g. ``[["a1"], ["a2", "a3"]]``."""
        return cls(net.mask(list(p)) if not isinstance(p, str) else net.mask([p])
                   for p in parts)

    @property
    def parts(self) -> tuple[int, ...]:
        return self._parts

    @property
    def carrier(self) -> int:
        out = 0
        for p in self._parts:
            out |= p
        return out

    def covers(self, net) -> bool:
        return self.carrier == net.full_mask

    def prefix(self, i: int) -> int:
        """Union of the first ``i`` parts."""
        out = 0
        for p in self._parts[:i]:
            out |= p
        return out

    def __len__(self):
        return len(self._parts)

    def __iter__(self):
        return iter(self._parts)

    def __getitem__(self, i):
        return self._parts[i]

    def __eq__(self, other):
        if not isinstance(other, OrderedPartition):
            return NotImplemented
        return self._parts == other._parts

    def __hash__(self):
        return hash(self._parts)

    def __repr__(self):
        return f"OrderedPartition({[bin(p) for p in self._parts]})"

    def names(self, net) -> list[list[str]]:
        return [net.member_names(p) for p in self._parts]

    def format(self, net) -> str:
        return "|".join(",".join(part) for part in self.names(net))


def parse_partition(net, spec: str) -> OrderedPartition:
    """Parse ``"a1|a2,a3|a4"``: parts separated by ``|``, members by ``,``."""
    parts = []
    for chunk in spec.split("|"):
        members = [m.strip() for m in chunk.split(",") if m.strip()]
        if not members:
            raise NotAPartition(f"empty part in {spec!r}")
        parts.append(net.mask(members))
    return OrderedPartition(parts)


def fold(pi: OrderedPartition, i: int, j: int) -> OrderedPartition:
    """Merge parts ``i..j`` (1-based, inclusive) into one."""
    m = len(pi)
    if not 1 <= i <= j <= m:
        raise IndexOutOfRange(f"cannot fold parts {i}..{j} of a {m}-part partition")
    parts: Sequence[int] = pi.parts
    merged = 0
    for p in parts[i - 1:j]:
        merged |= p
    return OrderedPartition(parts[:i - 1] + (merged,) + parts[j:])
