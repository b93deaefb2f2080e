"""Maximum bipartite matching (Hopcroft-Karp)."""

from __future__ import annotations

from collections import deque

INF = -1


def hopcroft_karp(
    left_size: int, right_size: int, edges: list[tuple[int, int]]
) -> list[tuple[int, int]]:
    """Maximum-cardinality matching of a bipartite graph, O(E * sqrt(V)).

    Vertices are 0..left_size-1 on the left and 0..right_size-1 on the
    right. Adjacency is processed in sorted order so the returned matching
    is deterministic. The matching is perfect iff its size equals both
    side sizes.
    """
    adj: list[list[int]] = [[] for _ in range(left_size)]
    for u, v in edges:
        if not (0 <= u < left_size and 0 <= v < right_size):
            raise ValueError(f"edge ({u},{v}) out of range")
        adj[u].append(v)
    for row in adj:
        row.sort()

    match_l = [INF] * left_size
    match_r = [INF] * right_size
    dist = [0] * left_size

    def bfs() -> bool:
        queue: deque[int] = deque()
        for u in range(left_size):
            if match_l[u] == INF:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == INF:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match_r[v]
            if w == INF or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = INF
        return False

    while bfs():
        for u in range(left_size):
            if match_l[u] == INF:
                dfs(u)
    return [(u, match_l[u]) for u in range(left_size) if match_l[u] != INF]
