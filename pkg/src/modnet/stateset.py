"""Dense bitmap sets of packed states."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .network import encode_state, format_state


def textual_keys(states: np.ndarray, n: int) -> np.ndarray:
    """Bit-reversed values, so that sorting by them sorts the state strings."""
    states = np.asarray(states, dtype=np.int64)
    key = np.zeros_like(states)
    for i in range(n):
        key |= ((states >> i) & 1) << (n - 1 - i)
    return key


def textual_sort(states: np.ndarray, n: int) -> np.ndarray:
    states = np.asarray(states, dtype=np.int64)
    return states[np.argsort(textual_keys(states, n), kind="stable")]


class StateSet:
    """An immutable subset of the ``2**n`` states of an ``n``-agent network.

    Iteration yields packed states in ascending integer order;
    :meth:`to_strings` gives the textual order used in reports.
    """

    __slots__ = ("_n", "_bits", "_count")

    def __init__(self, n: int, bits: np.ndarray):
        bits = np.asarray(bits, dtype=bool)
        if bits.shape != (1 << n,):
            raise ValueError(f"bitmap must have {1 << n} entries, got {bits.shape}")
        if bits.flags.writeable:
            bits = bits.copy()
            bits.flags.writeable = False
        self._n = n
        self._bits = bits
        self._count = int(np.count_nonzero(bits))

    @classmethod
    def empty(cls, n: int) -> "StateSet":
        return cls(n, np.zeros(1 << n, dtype=bool))

    @classmethod
    def full(cls, n: int) -> "StateSet":
        return cls(n, np.ones(1 << n, dtype=bool))

    @classmethod
    def from_states(cls, n: int, states: Iterable[int | str]) -> "StateSet":
        bits = np.zeros(1 << n, dtype=bool)
        idx = [encode_state(s, n) if isinstance(s, str) else int(s) for s in states]
        if idx:
            arr = np.asarray(idx, dtype=np.int64)
            if arr.min() < 0 or arr.max() >= 1 << n:
                raise ValueError(f"state outside the {n}-agent state space")
            bits[arr] = True
        return cls(n, bits)

    @property
    def n(self) -> int:
        return self._n

    @property
    def bitmap(self) -> np.ndarray:
        return self._bits

    def states(self) -> np.ndarray:
        return np.flatnonzero(self._bits)

    def __len__(self):
        return self._count

    def __bool__(self):
        return self._count > 0

    def __iter__(self):
        return (int(s) for s in self.states())

    def __contains__(self, s):
        if isinstance(s, str):
            s = encode_state(s, self._n)
        return 0 <= s < len(self._bits) and bool(self._bits[s])

    def _check(self, other):
        if not isinstance(other, StateSet):
            return NotImplemented
        if other._n != self._n:
            raise ValueError("state sets of different networks")
        return other

    def __eq__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self._count == other._count and np.array_equal(self._bits, other._bits)

    def __hash__(self):
        return hash((self._n, self._bits.tobytes()))

    def __or__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return StateSet(self._n, self._bits | other._bits)

    def __and__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return StateSet(self._n, self._bits & other._bits)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return StateSet(self._n, self._bits & ~other._bits)

    def __le__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return not np.any(self._bits & ~other._bits)

    def __ge__(self, other):
        return other <= self

    def isdisjoint(self, other) -> bool:
        self._check(other)
        return not np.any(self._bits & other._bits)

    def to_strings(self) -> list[str]:
        return [format_state(int(s), self._n) for s in textual_sort(self.states(), self._n)]

    def __repr__(self):
        shown = self.to_strings()
        if len(shown) > 8:
            shown = shown[:8] + ["..."]
        return f"StateSet(n={self._n}, |{self._count}| {{{', '.join(shown)}}})"
