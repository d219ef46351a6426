"""Iterative Tarjan SCC: a jitted kernel for packed state graphs, and a
plain version for small explicit graphs (regulation graphs)."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _tarjan_packed(moves, agents, roots, carrier):
    # Successors of v are v ^ (1 << a) for each a in `agents` whose bit is set
    # in moves[v]; targets outside `carrier` are ignored.
    size = moves.shape[0]
    m = roots.shape[0]
    index = np.full(size, -1, np.int32)
    low = np.zeros(size, np.int32)
    comp = np.full(size, -1, np.int32)
    onstack = np.zeros(size, np.bool_)
    stack = np.empty(m, np.int64)
    cs_node = np.empty(m, np.int64)
    cs_pos = np.empty(m, np.int64)
    k = agents.shape[0]
    counter = 0
    sp = 0
    ncomp = 0
    for ri in range(m):
        r = roots[ri]
        if index[r] != -1:
            continue
        top = 0
        cs_node[0] = r
        cs_pos[0] = 0
        index[r] = counter
        low[r] = counter
        counter += 1
        stack[sp] = r
        sp += 1
        onstack[r] = True
        while top >= 0:
            v = cs_node[top]
            p = cs_pos[top]
            mv = np.int64(moves[v])
            descended = False
            while p < k:
                a = agents[p]
                p += 1
                if (mv >> a) & 1:
                    w = v ^ (np.int64(1) << a)
                    if not carrier[w]:
                        continue
                    if index[w] == -1:
                        cs_pos[top] = p
                        top += 1
                        cs_node[top] = w
                        cs_pos[top] = 0
                        index[w] = counter
                        low[w] = counter
                        counter += 1
                        stack[sp] = w
                        sp += 1
                        onstack[w] = True
                        descended = True
                        break
                    elif onstack[w] and index[w] < low[v]:
                        low[v] = index[w]
            if descended:
                continue
            if low[v] == index[v]:
                while True:
                    sp -= 1
                    w = stack[sp]
                    onstack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            top -= 1
            if top >= 0:
                u = cs_node[top]
                if low[v] < low[u]:
                    low[u] = low[v]
    return comp, ncomp


def packed_sccs(moves: np.ndarray, agents: list[int], carrier: np.ndarray):
    """SCCs of the asynchronous graph restricted to ``agents`` and ``carrier``.

    Returns ``(comp, ncomp, terminal)``: the component id of every state
    (``-1`` outside the carrier), the component count, and for every
    component whether no transition leaves it.  A transition leading out of
    the carrier also makes its component non-terminal.
    """
    roots = np.flatnonzero(carrier).astype(np.int64)
    agents_arr = np.asarray(sorted(agents), dtype=np.int64)
    comp, ncomp = _tarjan_packed(moves, agents_arr, roots, carrier)
    terminal = np.ones(ncomp, dtype=bool)
    mv = moves[roots]
    for a in agents_arr:
        src = roots[(mv >> np.uint32(a)) & np.uint32(1) == 1]
        if src.size == 0:
            continue
        dst = src ^ (1 << int(a))
        cs = comp[src]
        terminal[cs[cs != comp[dst]]] = False
    return comp, ncomp, terminal


def tarjan(nodes, successors):
    """Strongly connected components of an explicit graph.

    ``successors(v)`` returns an iterable of nodes.  Components are returned
    in completion order, which is a reverse topological order.
    """
    index: dict = {}
    low: dict = {}
    onstack: set = set()
    stack: list = []
    out = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack.add(root)
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack.add(w)
                    work.append((w, iter(successors(w))))
                    break
                if w in onstack:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if low[v] == index[v]:
                    scc = []
                    while True:
                        w = stack.pop()
                        onstack.discard(w)
                        scc.append(w)
                        if w == v:
                            break
                    out.append(scc)
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
    return out
