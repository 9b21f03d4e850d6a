"""Exact minimum-cost transport on a dense bipartite graph.

Transportation simplex over exact rationals with a spanning-tree basis.
Entering arcs follow Bland's rule in lexicographic (row, column) order,
which is deterministic and cannot cycle, so the returned optimum is the
exact LP value for the given (pinned) rational costs.  The dual potentials
are returned so callers can verify optimality independently: every
reduced cost c_ij - u_i - v_j is nonnegative at the optimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dyadics import ZERO

Cost = list[list[Fraction]]


@dataclass
class TransportResult:
    value: Fraction
    plan: dict[tuple[int, int], Fraction]
    potentials_u: list[Fraction]
    potentials_v: list[Fraction]

    def verify_optimal(self, cost: Cost) -> bool:
        """Exact optimality certificate: feasibility is the caller's data,
        complementary slackness holds by construction, so nonnegative
        reduced costs on all arcs certify a true optimum."""
        n, m = len(self.potentials_u), len(self.potentials_v)
        for i in range(n):
            for j in range(m):
                if cost[i][j] - self.potentials_u[i] - self.potentials_v[j] < 0:
                    return False
        return True


def min_cost_transport(supplies: list[Fraction], demands: list[Fraction], cost: Cost
                       ) -> TransportResult:
    """Solve min sum f_ij c_ij with row sums = supplies, col sums = demands.

    Requires sum(supplies) == sum(demands), all entries exact Fractions.
    """
    n, m = len(supplies), len(demands)
    if sum(supplies) != sum(demands):
        raise ValueError("unbalanced transport problem")
    if n == 0 or m == 0:
        raise ValueError("empty transport problem")

    # Northwest-corner initial basic feasible solution; the basis always
    # holds exactly n + m - 1 arcs (degenerate zero flows included).
    flow: dict[tuple[int, int], Fraction] = {}
    basis: list[tuple[int, int]] = []
    a = [Fraction(s) for s in supplies]
    b = [Fraction(d) for d in demands]
    i = j = 0
    while len(basis) < n + m - 1:
        t = min(a[i], b[j])
        flow[(i, j)] = t
        basis.append((i, j))
        a[i] -= t
        b[j] -= t
        if i == n - 1 and j == m - 1:
            break
        if a[i] == 0 and i < n - 1:
            i += 1
        elif j < m - 1:
            j += 1
        else:
            i += 1

    basis_set = set(basis)

    def duals() -> tuple[list, list]:
        u: list = [None] * n
        v: list = [None] * m
        u[0] = ZERO
        adj_rows: dict[int, list[int]] = {}
        adj_cols: dict[int, list[int]] = {}
        for (bi, bj) in basis_set:
            adj_rows.setdefault(bi, []).append(bj)
            adj_cols.setdefault(bj, []).append(bi)
        stack = [("r", 0)]
        while stack:
            kind, k = stack.pop()
            if kind == "r":
                for bj in adj_rows.get(k, ()):
                    if v[bj] is None:
                        v[bj] = cost[k][bj] - u[k]
                        stack.append(("c", bj))
            else:
                for bi in adj_cols.get(k, ()):
                    if u[bi] is None:
                        u[bi] = cost[bi][k] - v[k]
                        stack.append(("r", bi))
        return u, v

    def cycle_through(enter: tuple[int, int]) -> list[tuple[int, int]]:
        """Alternating row/column cycle the entering arc closes in the tree."""
        ei, ej = enter
        adj_rows: dict[int, list[tuple[int, int]]] = {}
        adj_cols: dict[int, list[tuple[int, int]]] = {}
        for arc in basis_set:
            adj_rows.setdefault(arc[0], []).append(arc)
            adj_cols.setdefault(arc[1], []).append(arc)
        # BFS from column node ej back to row node ei through basis arcs.
        parent: dict[tuple[str, int], tuple[tuple[str, int], tuple[int, int]]] = {}
        start = ("c", ej)
        goal = ("r", ei)
        frontier = [start]
        seen = {start}
        while frontier and goal not in parent:
            nxt = []
            for node in frontier:
                kind, k = node
                arcs_here = adj_cols.get(k, ()) if kind == "c" else adj_rows.get(k, ())
                for arc in arcs_here:
                    other = ("r", arc[0]) if kind == "c" else ("c", arc[1])
                    if other not in seen:
                        seen.add(other)
                        parent[other] = (node, arc)
                        nxt.append(other)
            frontier = nxt
        arcs = [enter]
        node = goal
        while node != start:
            prev, arc = parent[node]
            arcs.append(arc)
            node = prev
        return arcs

    max_iters = 12 * (n + m) * (n + m) + 400
    for _ in range(max_iters):
        u, v = duals()
        enter = None
        for ei in range(n):
            ui = u[ei]
            row = cost[ei]
            for ej in range(m):
                if (ei, ej) in basis_set:
                    continue
                if row[ej] - ui - v[ej] < 0:
                    enter = (ei, ej)
                    break
            if enter:
                break
        if enter is None:
            value = sum(flow[arc] * cost[arc[0]][arc[1]] for arc in basis_set)
            plan = {arc: f for arc, f in flow.items() if f > 0}
            return TransportResult(value, plan, u, v)
        arcs = cycle_through(enter)
        # Even positions gain flow, odd positions lose it.
        losers = arcs[1::2]
        theta = min(flow[arc] for arc in losers)
        leave = min(arc for arc in losers if flow[arc] == theta)
        for pos, arc in enumerate(arcs):
            if pos % 2 == 0:
                flow[arc] = flow.get(arc, ZERO) + theta
            else:
                flow[arc] -= theta
        basis_set.remove(leave)
        basis_set.add(enter)
        del flow[leave]
    raise RuntimeError("transport simplex exceeded its iteration bound")
