"""Seeded generators shared by the graph and substitution test modules."""

from brauerkit.graph import empty, make_graph, make_xgraph
from brauerkit.substitution import make_gog


def random_graph(rng, max_vertices=4, max_orbits=5):
    """Arbitrary involutive graph; edges attach independently or stay ports."""
    nv = rng.randint(0, max_vertices)
    vertices = list(range(1, nv + 1))
    k = rng.randint(1, max_orbits)
    edges = list(range(1, 2 * k + 1))
    tau = [(2 * i - 1, 2 * i) for i in range(1, k + 1)]
    halves = []
    for e in edges:
        if vertices and rng.random() < 0.7:
            halves.append((e, rng.choice(vertices)))
    return make_graph(edges, tau, halves, vertices)


def random_admissible(rng, x_labels, max_vertices=2, max_extra=2):
    """Admissible graph over the given port labels: one attached partner
    per port, plus some fully attached inner orbits."""
    xs = list(x_labels)
    if not xs and rng.random() < 0.3:
        return make_xgraph(empty(), {})
    nv = rng.randint(1, max_vertices)
    vertices = [("u", i) for i in range(1, nv + 1)]
    edges, tau, halves = [], [], []
    rho = {}
    for i, x in enumerate(xs, 1):
        p, q = ("p", i), ("q", i)
        edges.extend((p, q))
        tau.append((p, q))
        halves.append((q, rng.choice(vertices)))
        rho[p] = x
    lo = 0 if xs else 1
    for j in range(1, rng.randint(lo, max_extra) + 1):
        a, b = ("a", j), ("b", j)
        edges.extend((a, b))
        tau.append((a, b))
        halves.append((a, rng.choice(vertices)))
        halves.append((b, rng.choice(vertices)))
    g = make_graph(edges, tau, halves, vertices)
    return make_xgraph(g, rho)


def random_gog(rng, base, max_vertices=2, max_extra=2):
    assign = {
        v: random_admissible(rng, base.vertex_edges(v), max_vertices, max_extra)
        for v in base.vertices
    }
    return make_gog(base, assign)
