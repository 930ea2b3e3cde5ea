"""Brute-force oracles and small graph factories shared by the tests."""

import itertools
import random
from collections import defaultdict

from patternweaver import AttributedGraph, GraphLabel, LabeledCollection
from patternweaver.core.dfscode import DFSCode, canonical_code


def make_graph(labels, edges=()) -> AttributedGraph:
    """Helper to build a graph from vertex labels and (u, v, label) edges."""
    return AttributedGraph(tuple(labels), tuple(edges))


def make_collection(pairs) -> LabeledCollection:
    """Helper to build a collection from (graph, "A"/"N") pairs."""
    return LabeledCollection.from_pairs((g, GraphLabel(label)) for g, label in pairs)


TRIANGLE = make_graph((0, 0, 0), [(0, 1, 0), (1, 2, 0), (0, 2, 0)])


def brute_isomorphic(first: AttributedGraph, second: AttributedGraph) -> bool:
    """Label-preserving isomorphism by trying every bijection."""
    if first.n_vertices != second.n_vertices or first.n_edges != second.n_edges:
        return False
    n = first.n_vertices
    target = {(min(u, v), max(u, v)): label for u, v, label in second.edges}
    for perm in itertools.permutations(range(n)):
        if any(first.vertex_labels[v] != second.vertex_labels[perm[v]] for v in range(n)):
            continue
        mapped = {
            (min(perm[u], perm[v]), max(perm[u], perm[v])): label for u, v, label in first.edges
        }
        if mapped == target:
            return True
    return False


def brute_count(pattern: AttributedGraph, graph: AttributedGraph, induced: bool = False) -> int:
    """Number of injective label-preserving mappings, by exhaustive enumeration."""
    count = 0
    p_edges = {(min(u, v), max(u, v)): label for u, v, label in pattern.edges}
    for image in itertools.permutations(range(graph.n_vertices), pattern.n_vertices):
        if any(
            pattern.vertex_labels[k] != graph.vertex_labels[image[k]]
            for k in range(pattern.n_vertices)
        ):
            continue
        ok = True
        for a, b in itertools.combinations(range(pattern.n_vertices), 2):
            g_label = graph.edge_label(image[a], image[b])
            p_label = p_edges.get((a, b))
            if p_label is not None and g_label != p_label:
                ok = False
                break
            if induced and p_label is None and g_label is not None:
                ok = False
                break
        if ok:
            count += 1
    return count


def _edge_subgraph(graph: AttributedGraph, edges) -> AttributedGraph:
    vertices = sorted({x for u, v, _ in edges for x in (u, v)})
    index = {v: i for i, v in enumerate(vertices)}
    return AttributedGraph(
        tuple(graph.vertex_labels[v] for v in vertices),
        tuple((index[u], index[v], label) for u, v, label in edges),
    )


def connected_subgraph_codes(
    graph: AttributedGraph, max_vertices: int, max_edges: int
) -> set[DFSCode]:
    """Canonical codes of every connected subgraph within the caps."""
    codes = {DFSCode.single_vertex(label) for label in graph.vertex_labels}
    for size in range(1, min(max_edges, graph.n_edges) + 1):
        for edges in itertools.combinations(graph.edges, size):
            sub = _edge_subgraph(graph, edges)
            if sub.n_vertices <= max_vertices and sub.is_connected():
                codes.add(canonical_code(sub))
    return codes


def brute_frequent(
    collection: LabeledCollection, minsup: int, max_vertices: int, max_edges: int
) -> dict[DFSCode, tuple[int, ...]]:
    """Every frequent pattern with the sorted ids of the graphs that hold it."""
    hosts: dict[DFSCode, list[int]] = defaultdict(list)
    for gi, graph in enumerate(collection.graphs):
        for code in connected_subgraph_codes(graph, max_vertices, max_edges):
            hosts[code].append(gi)
    return {code: tuple(sorted(ids)) for code, ids in hosts.items() if len(ids) >= minsup}


def random_graph(
    rng: random.Random, n_vertices: int, n_edges: int, vertex_labels: int = 2, edge_labels: int = 2
) -> AttributedGraph:
    """Random simple graph with at most ``n_edges`` edges."""
    pairs = list(itertools.combinations(range(n_vertices), 2))
    rng.shuffle(pairs)
    return AttributedGraph(
        tuple(rng.randrange(vertex_labels) for _ in range(n_vertices)),
        tuple((u, v, rng.randrange(edge_labels)) for u, v in pairs[:n_edges]),
    )


def random_collection(rng: random.Random, n_graphs: int = 10, max_vertices: int = 7):
    pairs = []
    for k in range(n_graphs):
        n = rng.randint(2, max_vertices)
        m = rng.randint(1, min(8, n * (n - 1) // 2))
        pairs.append((random_graph(rng, n, m), "A" if k % 2 == 0 else "N"))
    return make_collection(pairs)


def random_dfs_code(graph: AttributedGraph, rng: random.Random) -> DFSCode:
    """Code of one random depth-first traversal of a connected graph."""
    index: dict[int, int] = {}
    edges = []

    def visit(v: int) -> None:
        neighbors = list(graph.adjacency[v])
        rng.shuffle(neighbors)
        for w in neighbors:
            if w in index:
                continue
            index[w] = len(index)
            edges.append((index[v], index[w], graph.vertex_labels[v], graph.adjacency[v][w],
                          graph.vertex_labels[w]))
            closing = sorted((index[u], u) for u in graph.adjacency[w] if u in index and u != v)
            for j, u in closing:
                edges.append((index[w], j, graph.vertex_labels[w], graph.adjacency[w][u],
                              graph.vertex_labels[u]))
            visit(w)

    root = rng.randrange(graph.n_vertices)
    index[root] = 0
    visit(root)
    return DFSCode(tuple(edges), graph.vertex_labels[root])


CONTRACT_HEADER = (
    "contract_id,buyer_id,winner_id,lot_count,offers_received,"
    "year,region_code,activity_sector,agent_category"
)

# M1 and M2 share winner C2; M3 works alone with C4.
# c09..c12 fall outside region R1, the works sector, 2020 or the municipality category.
CONTRACTS = f"""\
{CONTRACT_HEADER}
c01,M1,C1,1,1,2020,R1,works,municipality
c02,M1,C1,2,3,2020,R1,works,municipality
c03,M1,C2,6,1,2020,R1,works,municipality
c04,M2,C2,1,4,2020,R1,works,municipality
c05,M2,C3,3,,2020,R1,works,municipality
c06,M3,C4,1,1,2020,R1,works,municipality
c07,M3,C4,1,2,2020,R1,works,municipality
c08,M3,C4,1,2,2020,R1,works,municipality
c09,M1,C1,1,2,2020,R2,works,municipality
c10,M2,C2,1,1,2020,R1,supplies,municipality
c11,M2,C3,1,1,2019,R1,works,municipality
c12,D1,C1,1,1,2020,R1,works,department
"""


def write_bundle(directory, name="TOY", node_labels=True, edge_labels=True):
    """Helper to write a two-graph benchmark bundle."""
    bundle = directory / name
    bundle.mkdir()
    # graph 1: vertices 1-3 (path), graph 2: vertices 4-5 (edge)
    (bundle / f"{name}_A.txt").write_text("1, 2\n2, 1\n2, 3\n3, 2\n4, 5\n5, 4\n")
    (bundle / f"{name}_graph_indicator.txt").write_text("1\n1\n1\n2\n2\n")
    (bundle / f"{name}_graph_labels.txt").write_text("1\n-1\n")
    if node_labels:
        (bundle / f"{name}_node_labels.txt").write_text("0\n1\n0\n2\n2\n")
    if edge_labels:
        (bundle / f"{name}_edge_labels.txt").write_text("5\n5\n6\n6\n7\n7\n")
    return bundle
