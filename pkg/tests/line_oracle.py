"""Brute-force census of periodic lines for small monomial periodic quivers.

Candidates are enumerated directly as vertex sets S x (c + gZ), one cover vertex
per orbit in each period, and kept when the induced subquiver is a connected
two-regular line whose directed runs avoid the zero relations and which no
quiver path leaves and re-enters.  Only rank-one groups.
"""

import itertools


def brute_lines(pp, K: int = 3) -> set:
    verts = list(pp.vertices)
    arrows = list(pp.arrows.values())
    zero = [r.terms[0][1] for r in pp.relations]
    keys = set()
    for k in range(1, len(verts) + 1):
        for S in itertools.combinations(verts, k):
            for rest in itertools.product(range(-K, K + 1), repeat=k - 1):
                c = dict(zip(S, (0,) + rest))
                for g in range(1, K + 1):
                    if _is_line(S, c, g, arrows, zero, len(verts), K):
                        keys.add((g, min(frozenset((v, (c[v] + t) % g) for v in S) for t in range(g))))
    return keys


def _is_line(S, c, g, arrows, zero, n, K) -> bool:
    def member(u, d):
        return u in c and (d - c[u]) % g == 0

    def outs(v, d):
        return [(a.id, (a.target, d + a.shift[0])) for a in arrows
                if a.source == v and member(a.target, d + a.shift[0])]

    def ins(v, d):
        return [a for a in arrows if a.target == v and member(a.source, d - a.shift[0])]

    if any(len(outs(v, c[v])) + len(ins(v, c[v])) != 2 for v in S):
        return False
    # connected over a few periods
    nodes = [(v, c[v] + t * g) for t in range(-3, 4) for v in S]
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for x in nodes:
        for _, y in outs(*x):
            if y in parent:
                parent[find(x)] = find(y)
    s0 = (S[0], 0)
    if find(s0) != find((S[0], g)) or any(find((v, c[v])) != find(s0) for v in S):
        return False
    # directed runs along the line avoid zero relations
    for v in S:
        stack = [((v, c[v]), ())]
        while stack:
            x, w = stack.pop()
            if len(w) >= 2 * len(S) + 2:
                continue
            for aid, y in outs(*x):
                w2 = w + (aid,)
                if any(len(w2) >= len(z) and w2[-len(z):] == z for z in zero):
                    return False
                stack.append((y, w2))
    # convexity, searched to a fixed depth
    depth = 3 * n * (K + 1)
    for v in S:
        front = {(a.target, c[v] + a.shift[0]) for a in arrows if a.source == v}
        front = {x for x in front if not member(*x)}
        seen = set()
        for _ in range(depth):
            nxt = set()
            for u, e in front - seen:
                seen.add((u, e))
                for a in arrows:
                    if a.source == u:
                        t = (a.target, e + a.shift[0])
                        if member(*t):
                            return False
                        nxt.add(t)
            if not nxt:
                break
            front = nxt
    return True
