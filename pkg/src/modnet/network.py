"""Interaction networks: agents, Boolean update expressions, packed states.

A state of an ``n``-agent network is packed into an unsigned integer where
bit ``i`` holds the local state of the agent with index ``i``.  Textual
renderings put the first agent on the left, so the string
``"1100"`` means agents 0 and 1 are on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    DuplicateDefinition,
    InputAgent,
    LengthMismatch,
    TooManyAgents,
    UnknownAgent,
)

MAX_AGENTS = 24
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


# -- expressions --------------------------------------------------------------


class Expr:
    """Base class of the Boolean expression AST."""

    __slots__ = ()

    def variables(self) -> list[str]:
        """Referenced agent names, in order of first occurrence."""
        seen: dict[str, None] = {}
        self._collect(seen)
        return list(seen)

    def _collect(self, seen):
        raise NotImplementedError

    def evaluate(self, value) -> bool:
        """Evaluate with ``value(name) -> bool``."""
        raise NotImplementedError

    def evaluate_array(self, column, size):
        """Vectorised evaluation; ``column(name)`` returns a bool array."""
        raise NotImplementedError


@dataclass(frozen=True)
class Const(Expr):
    value: bool

    def _collect(self, seen):
        pass

    def evaluate(self, value):
        return bool(self.value)

    def evaluate_array(self, column, size):
        return np.full(size, bool(self.value))


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def _collect(self, seen):
        seen.setdefault(self.name, None)

    def evaluate(self, value):
        return bool(value(self.name))

    def evaluate_array(self, column, size):
        return column(self.name)


@dataclass(frozen=True)
class Not(Expr):
    arg: Expr

    def _collect(self, seen):
        self.arg._collect(seen)

    def evaluate(self, value):
        return not self.arg.evaluate(value)

    def evaluate_array(self, column, size):
        return ~self.arg.evaluate_array(column, size)


@dataclass(frozen=True)
class And(Expr):
    args: tuple

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("And needs at least two operands")

    def _collect(self, seen):
        for a in self.args:
            a._collect(seen)

    def evaluate(self, value):
        return all(a.evaluate(value) for a in self.args)

    def evaluate_array(self, column, size):
        out = self.args[0].evaluate_array(column, size).copy()
        for a in self.args[1:]:
            out &= a.evaluate_array(column, size)
        return out


@dataclass(frozen=True)
class Or(Expr):
    args: tuple

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("Or needs at least two operands")

    def _collect(self, seen):
        for a in self.args:
            a._collect(seen)

    def evaluate(self, value):
        return any(a.evaluate(value) for a in self.args)

    def evaluate_array(self, column, size):
        out = self.args[0].evaluate_array(column, size).copy()
        for a in self.args[1:]:
            out |= a.evaluate_array(column, size)
        return out


class _InputMarker:
    """Marks an agent without update function (empty evolution relation)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INPUT"

    def __reduce__(self):
        return (_InputMarker, ())


INPUT = _InputMarker()

LocalFunction = Union[Expr, _InputMarker]


# -- agents and networks ------------------------------------------------------


@dataclass(frozen=True)
class Agent:
    index: int
    name: str
    # Local domain size. Only Boolean agents are supported; the field exists
    # so a multi-valued codec can be added without touching the algorithms.
    levels: int = 2

    def __str__(self):
        return self.name


AgentRef = Union[Agent, str, int]


class InteractionNetwork:
    """A family of local update functions, one per agent.

    Instances are immutable.  Whole-state-space tables (``next_values``,
    ``moves``) are computed lazily on first use and cached.
    """

    def __init__(self, agents: Sequence[Agent | str], functions: Sequence[LocalFunction],
                 max_agents: int = MAX_AGENTS):
        if len(agents) != len(functions):
            raise LengthMismatch(
                f"{len(agents)} agents but {len(functions)} local functions")
        cap = min(max_agents, MAX_AGENTS)
        if len(agents) > cap:
            raise TooManyAgents(f"{len(agents)} agents exceeds the cap of {cap}")
        built = []
        for i, a in enumerate(agents):
            name = a.name if isinstance(a, Agent) else a
            if not IDENT_RE.match(name):
                raise ValueError(f"invalid agent name {name!r}")
            built.append(Agent(i, name))
        self._agents = tuple(built)
        self._index = {}
        for a in self._agents:
            if a.name in self._index:
                raise DuplicateDefinition(f"agent {a.name!r} defined twice")
            self._index[a.name] = a.index
        for a, f in zip(self._agents, functions):
            if f is INPUT:
                continue
            if not isinstance(f, Expr):
                raise TypeError(f"local function of {a.name} is not an expression")
            for v in f.variables():
                if v not in self._index:
                    raise UnknownAgent(f"{a.name} refers to undeclared agent {v!r}")
        self._functions = tuple(functions)

    # basic accessors

    @property
    def agents(self) -> tuple[Agent, ...]:
        return self._agents

    @property
    def functions(self) -> tuple[LocalFunction, ...]:
        return self._functions

    @property
    def n(self) -> int:
        return len(self._agents)

    @property
    def names(self) -> list[str]:
        return [a.name for a in self._agents]

    @property
    def n_states(self) -> int:
        return 1 << self.n

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"InteractionNetwork({self.names})"

    def __eq__(self, other):
        if not isinstance(other, InteractionNetwork):
            return NotImplemented
        return self.names == other.names and self._functions == other._functions

    def __hash__(self):
        return hash((tuple(self.names), self._functions))

    def index(self, a: AgentRef) -> int:
        if isinstance(a, Agent):
            a = a.index
        if isinstance(a, (int, np.integer)):
            if not 0 <= a < self.n:
                raise UnknownAgent(f"agent index {a} out of range")
            return int(a)
        try:
            return self._index[a]
        except KeyError:
            raise UnknownAgent(f"unknown agent {a!r}") from None

    def agent(self, a: AgentRef) -> Agent:
        return self._agents[self.index(a)]

    def function(self, a: AgentRef) -> LocalFunction:
        return self._functions[self.index(a)]

    def is_input(self, a: AgentRef) -> bool:
        return self._functions[self.index(a)] is INPUT

    @cached_property
    def input_mask(self) -> int:
        return sum(1 << i for i, f in enumerate(self._functions) if f is INPUT)

    def mask(self, agents: Iterable[AgentRef] | int) -> int:
        """Bitmask of an agent set given as names, indices or ``Agent`` objects.

        An ``int`` is taken to already be a mask.
        """
        if isinstance(agents, (int, np.integer)) and not isinstance(agents, bool):
            if agents & ~self.full_mask:
                raise UnknownAgent(f"mask {agents:#x} has bits outside the network")
            return int(agents)
        if isinstance(agents, (str, Agent)):
            agents = [agents]
        m = 0
        for a in agents:
            m |= 1 << self.index(a)
        return m

    def members(self, mask: int) -> list[Agent]:
        return [a for a in self._agents if mask >> a.index & 1]

    def member_names(self, mask: int) -> list[str]:
        return [a.name for a in self.members(mask)]

    # state-space tables

    @cached_property
    def _all_states(self):
        return np.arange(self.n_states, dtype=np.uint32)

    def _column(self, name):
        i = self._index[name]
        return ((self._all_states >> np.uint32(i)) & np.uint32(1)).astype(bool)

    def next_values(self, a: AgentRef) -> np.ndarray:
        """Bool array over all packed states: next local value of agent ``a``."""
        i = self.index(a)
        return self._next_table[i]

    @cached_property
    def _next_table(self):
        size = self.n_states
        cols = {}

        def column(name):
            if name not in cols:
                cols[name] = self._column(name)
            return cols[name]

        table = []
        for a, f in zip(self._agents, self._functions):
            if f is INPUT:
                table.append(None)
            else:
                arr = np.asarray(f.evaluate_array(column, size), dtype=bool)
                arr.flags.writeable = False
                table.append(arr)
        return tuple(table)

    @cached_property
    def moves(self) -> np.ndarray:
        """uint32 array over states: bit ``a`` set iff updating ``a`` changes the state."""
        out = np.zeros(self.n_states, dtype=np.uint32)
        for i, f in enumerate(self._functions):
            if f is INPUT:
                continue
            cur = ((self._all_states >> np.uint32(i)) & np.uint32(1)).astype(bool)
            flip = self._next_table[i] != cur
            out |= flip.astype(np.uint32) << np.uint32(i)
        out.flags.writeable = False
        return out

    # rendering helpers

    def format_state(self, s: int) -> str:
        return format_state(s, self.n)

    def parse_state(self, text: str) -> int:
        return encode_state(text, self.n)


def build_network(defs: Iterable[tuple[str, LocalFunction]],
                  max_agents: int = MAX_AGENTS) -> InteractionNetwork:
    """Build a network from ``(name, function)`` definitions.

    Defined agents come first, in definition order; names that are referenced
    but never defined are appended as input agents in order of first reference.
    """
    defs = list(defs)
    names: list[str] = []
    funcs: list[LocalFunction] = []
    defined: set[str] = set()
    for name, f in defs:
        if name in defined:
            raise DuplicateDefinition(f"agent {name!r} defined twice")
        defined.add(name)
        names.append(name)
        funcs.append(f)
    inputs: dict[str, None] = {}
    for _, f in defs:
        if f is INPUT:
            continue
        for v in f.variables():
            if v not in defined:
                inputs.setdefault(v, None)
    names.extend(inputs)
    funcs.extend([INPUT] * len(inputs))
    return InteractionNetwork(names, funcs, max_agents=max_agents)


def evaluate_local(net: InteractionNetwork, a: AgentRef, s: int) -> int:
    """Next local value of agent ``a`` from packed state ``s``."""
    i = net.index(a)
    f = net.functions[i]
    if f is INPUT:
        raise InputAgent(f"{net.agents[i].name} is an input agent and never updates")
    if not 0 <= s < net.n_states:
        raise ValueError(f"state {s} is not a valid state of a {net.n}-agent network")
    return int(f.evaluate(lambda name: s >> net._index[name] & 1))


# -- state codec --------------------------------------------------------------


def encode_state(v: Sequence[int] | str, n: int | None = None) -> int:
    """Pack a bit vector (or a ``"0101"`` string) into an integer state."""
    if isinstance(v, str):
        if any(c not in "01" for c in v):
            raise ValueError(f"invalid state string {v!r}")
        bits = [c == "1" for c in v]
    else:
        bits = [bool(b) for b in v]
    if n is not None and len(bits) != n:
        raise LengthMismatch(f"state has {len(bits)} components, expected {n}")
    s = 0
    for i, b in enumerate(bits):
        if b:
            s |= 1 << i
    return s


def decode_state(s: int, n: int) -> tuple[int, ...]:
    if s < 0 or s >> n:
        raise LengthMismatch(f"state {s} has bits beyond agent {n - 1}")
    return tuple(s >> i & 1 for i in range(n))


def format_state(s: int, n: int) -> str:
    return "".join("1" if s >> i & 1 else "0" for i in range(n))


def state_key(s: int, n: int) -> int:
    """Sort key giving the textual (first-agent-most-significant) order."""
    return int(format_state(s, n), 2) if n else 0
