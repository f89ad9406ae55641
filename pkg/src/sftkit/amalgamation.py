"""Vertex merging moves on multigraphs and the one-sided conjugacy decision.

Two vertices whose incoming edges match count-for-count over every
source can be merged: the merged vertex keeps one copy of the common
incoming pattern and the union of both outgoing bundles.  Splitting a
vertex along a partition of its outgoing edges is the inverse move.
Repeating merges until none remain yields the terminal graph; two edge
shifts are one-sided conjugate exactly when their terminal graphs are
isomorphic, which is what :func:`decide_one_sided_conjugacy` computes.

The merge order is greedy and deterministic; terminal graphs are
expected to be order-independent up to isomorphism, and the decision
runs a second merge order and flags any disagreement instead of hiding
it.
"""

import itertools
from dataclasses import dataclass

from .blockcodes import ConjugacyWitness, SlidingBlockCode, compose, verify_conjugacy
from .matrices import Matrix01, Multigraph, SftError, edge_matrix, graph_of_matrix


class InvalidMoveError(SftError):
    pass


class EmptyPartError(SftError):
    pass


class TooLargeError(SftError):
    def __init__(self, size, limit):
        self.size = size
        self.limit = limit
        super().__init__("graph with %d vertices exceeds the search limit %d" % (size, limit))


class SearchBoundError(SftError):
    pass


@dataclass(frozen=True)
class AmalgamationMove:
    """A single merge: the vertex pair, the in-edge pairing, the new label."""

    v: str
    w: str
    pairing: tuple
    merged: str


def _as_graph(g):
    if isinstance(g, Multigraph):
        return g
    if isinstance(g, Matrix01):
        return graph_of_matrix(g)
    raise SftError("expected a Multigraph or Matrix01, got %r" % type(g).__name__)


def mergeable_pairs(graph):
    """Unordered vertex pairs with identical incoming-count profiles."""
    profiles = {v: graph.in_profile(v) for v in graph.vertices}
    out = []
    for v, w in itertools.combinations(graph.vertices, 2):
        if profiles[v] == profiles[w]:
            out.append((v, w))
    return out


def build_move(graph, v, w):
    """Merge move for (v, w) with the lexicographic in-edge pairing."""
    if v == w or v not in graph.vertices or w not in graph.vertices:
        raise InvalidMoveError("need two distinct vertices of the graph")
    pairing = []
    for u in graph.vertices:
        into_v = sorted(e.id for e in graph.edges if e.src == u and e.dst == v)
        into_w = sorted(e.id for e in graph.edges if e.src == u and e.dst == w)
        if len(into_v) != len(into_w):
            raise InvalidMoveError(
                "in-edge counts from %s differ: %d vs %d" % (u, len(into_v), len(into_w)))
        pairing.extend(zip(into_v, into_w))
    return AmalgamationMove(v, w, tuple(pairing), min(v, w))


def out_amalgamate(graph, move):
    """Apply a merge move; keeps the v-side edge of every in-edge pair."""
    v, w, merged = move.v, move.w, move.merged
    build_move(graph, v, w)  # re-validates the count condition on this graph
    drop = {b for (_, b) in move.pairing}

    def relabel(x):
        return merged if x in (v, w) else x

    edges = [(e.id, relabel(e.src), relabel(e.dst))
             for e in graph.edges if e.id not in drop]
    vertices = [relabel(x) for x in graph.vertices]
    return Multigraph.build(edges, vertices=vertices)


def total_amalgamation(graph, pick="first"):
    """Greedy exhaustive merging; returns the terminal graph and the move log.

    `pick` selects which mergeable pair is taken each round ("first" or
    "last" in the deterministic pair order), used to cross-check that
    the terminal graph does not depend on the order.
    """
    graph = _as_graph(graph)
    log = []
    while True:
        pairs = mergeable_pairs(graph)
        if not pairs:
            return graph, tuple(log)
        v, w = pairs[0] if pick == "first" else pairs[-1]
        move = build_move(graph, v, w)
        graph = out_amalgamate(graph, move)
        log.append(move)


ISO_LIMIT = 10


def graphs_isomorphic(g1, g2):
    """Brute-force multigraph isomorphism; the least vertex bijection or None.

    Compares edge-multiplicity matrices over all vertex bijections,
    after degree-multiset prefilters.  Refuses graphs with more than
    ten vertices.
    """
    g1, g2 = _as_graph(g1), _as_graph(g2)
    for g in (g1, g2):
        if len(g.vertices) > ISO_LIMIT:
            raise TooLargeError(len(g.vertices), ISO_LIMIT)
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None

    def counts(g):
        return {(e.src, e.dst): g.edge_count(e.src, e.dst) for e in g.edges}

    def degree_profile(g):
        return sorted(
            (len(g.out_edges(v)), len(g.in_edges(v))) for v in g.vertices)

    if degree_profile(g1) != degree_profile(g2):
        return None
    c1, c2 = counts(g1), counts(g2)
    vs1 = g1.vertices
    # matching every positive multiplicity of g1 exactly forces equality,
    # since both graphs have the same total edge count
    for perm in itertools.permutations(g2.vertices):
        mapping = dict(zip(vs1, perm))
        if all(c2.get((mapping[u], mapping[v]), 0) == k for (u, v), k in c1.items()):
            return mapping
    return None


@dataclass(frozen=True)
class DecisionReport:
    conjugate: bool
    terminal_a: Multigraph
    terminal_b: Multigraph
    log_a: tuple
    log_b: tuple
    bijection: object
    order_consistent: object

    def to_dict(self):
        return {
            "verdict": "conjugate" if self.conjugate else "not-conjugate",
            "terminal_a": {"vertices": len(self.terminal_a.vertices),
                           "edges": len(self.terminal_a.edges)},
            "terminal_b": {"vertices": len(self.terminal_b.vertices),
                           "edges": len(self.terminal_b.edges)},
            "moves_a": [[m.v, m.w, m.merged] for m in self.log_a],
            "moves_b": [[m.v, m.w, m.merged] for m in self.log_b],
            "bijection": None if self.bijection is None else dict(sorted(self.bijection.items())),
            "order_consistent": self.order_consistent,
        }


def decide_one_sided_conjugacy(a, b):
    """Decide conjugacy of two presented edge shifts via terminal graphs.

    Matrices are converted to their transition graphs first, so the
    verdict concerns the presented one-sided shift either way.
    """
    ga, gb = _as_graph(a), _as_graph(b)
    ta, log_a = total_amalgamation(ga)
    tb, log_b = total_amalgamation(gb)
    consistent = True
    for g, t in ((ga, ta), (gb, tb)):
        other, _ = total_amalgamation(g, pick="last")
        try:
            if graphs_isomorphic(t, other) is None:
                consistent = False
        except TooLargeError:
            consistent = None
    bijection = graphs_isomorphic(ta, tb)
    return DecisionReport(bijection is not None, ta, tb, log_a, log_b,
                          bijection, consistent)


def out_split(graph, vertex, partition):
    """Split `vertex` along a partition of its outgoing edge ids.

    Each part becomes a copy carrying that part's outgoing edges; every
    incoming edge is duplicated once per copy.
    """
    graph = _as_graph(graph)
    split, _ = _out_split_with_origin(graph, vertex, partition)
    return split


def _out_split_with_origin(graph, vertex, partition):
    if vertex not in graph.vertices:
        raise SftError("unknown vertex %r" % vertex)
    parts = [tuple(p) for p in partition]
    if any(not p for p in parts):
        raise EmptyPartError("every part must contain an edge")
    flat = [e for p in parts for e in p]
    out_ids = sorted(e.id for e in graph.out_edges(vertex))
    if sorted(flat) != out_ids:
        raise InvalidMoveError("parts must partition the outgoing edges of %s" % vertex)
    part_of = {eid: idx for idx, p in enumerate(parts) for eid in p}
    k = len(parts)

    def copy_name(j):
        return "%s/%d" % (vertex, j + 1)

    origin = {}
    edges = []
    for e in graph.edges:
        src = copy_name(part_of[e.id]) if e.src == vertex else e.src
        if e.dst == vertex:
            for j in range(k):
                new_id = "%s/%d" % (e.id, j + 1)
                edges.append((new_id, src, copy_name(j)))
                origin[new_id] = e.id
        else:
            edges.append((e.id, src, e.dst))
            origin[e.id] = e.id
    vertices = [v for v in graph.vertices if v != vertex] + [copy_name(j) for j in range(k)]
    return Multigraph.build(edges, vertices=vertices), (origin, part_of)


def out_split_witness(graph, vertex, partition):
    """Split a vertex and return the split graph with its canonical conjugacy.

    The forward code looks one edge ahead to pick the copy of each edge
    ending at the split vertex; the backward code forgets copy marks.
    """
    graph = _as_graph(graph)
    split, (origin, part_of) = _out_split_with_origin(graph, vertex, partition)
    src_m = edge_matrix(graph)
    dst_m = edge_matrix(split)
    by_origin = {}
    for new_id, old_id in origin.items():
        by_origin.setdefault(old_id, []).append(new_id)
    table = {}
    for d, e in ((d, e) for d in graph.edges for e in graph.edges if d.dst == e.src):
        if d.dst == vertex:
            image = "%s/%d" % (d.id, part_of[e.id] + 1)
        else:
            image = d.id
        table[(src_m.index(d.id), src_m.index(e.id))] = dst_m.index(image)
    forward = SlidingBlockCode(src_m, dst_m, 0, 1, table)
    backward = SlidingBlockCode(
        dst_m, src_m, 0, 0,
        {(i,): src_m.index(origin[dst_m.label(i)]) for i in range(dst_m.n)})
    return split, ConjugacyWitness(forward, backward)


def _enumerate_window_tables(source, target, anticipation, prefer_same_labels):
    """Yield total admissibility-respecting window tables, deterministically.

    Backtracking over windows with forward-checked domains: assigning a
    window restricts overlapping windows to followers/predecessors of
    the chosen letter.  A table is also dropped early once the letters
    still missing from its range outnumber the unassigned windows (a
    code whose outputs skip a letter is never onto).
    """
    windows = source.words(anticipation + 1)
    if anticipation == 0:
        succ = {w: frozenset(v for v in windows if source.follows(w[0], v[0]))
                for w in windows}
    else:
        succ = {w: frozenset(v for v in windows if w[1:] == v[:-1]) for w in windows}
    pred = {w: frozenset(v for v in windows if w in succ[v]) for w in windows}
    n_t = target.n
    full = frozenset(range(n_t))
    followers = [frozenset(target.followers(i)) for i in range(n_t)]
    predecessors = [frozenset(target.predecessors(i)) for i in range(n_t)]

    def candidate_order(w, domain):
        order = sorted(domain)
        if prefer_same_labels:
            try:
                first = target.index(source.label(w[0]))
            except SftError:
                return order
            if first in order:
                order.remove(first)
                order.insert(0, first)
        return order

    assignment = {}
    domains = {w: full for w in windows}

    def dfs():
        if len(assignment) == len(windows):
            yield dict(assignment)
            return
        if n_t - len(set(assignment.values())) > len(windows) - len(assignment):
            return  # some target letter can no longer be reached: never onto
        w = min((v for v in windows if v not in assignment),
                key=lambda v: (len(domains[v]), v))
        for letter in candidate_order(w, domains[w]):
            if w in succ[w] and not target.follows(letter, letter):
                continue
            # constraints against assigned neighbours are already folded
            # into domains[w]; propagate into unassigned neighbours only
            saved = []
            ok = True
            for v in (succ[w] | pred[w]):
                if v == w or v in assignment:
                    continue
                nd = domains[v]
                if v in succ[w]:
                    nd = nd & followers[letter]
                if v in pred[w]:
                    nd = nd & predecessors[letter]
                if nd is not domains[v]:
                    saved.append((v, domains[v]))
                    domains[v] = nd
                if not nd:
                    ok = False
                    break
            if ok:
                assignment[w] = letter
                yield from dfs()
                del assignment[w]
            for v, d in saved:
                domains[v] = d

    yield from dfs()


def _derive_inverse(forward, anticipation):
    """The unique memory-0 inverse with given anticipation, if one exists."""
    source, target = forward.source, forward.target
    table = {}
    for u in target.words(anticipation + 1):
        candidates = {
            w[0]
            for w in source.words(anticipation + 1 + forward.anticipation)
            if forward.slide(w) == u
        }
        if len(candidates) != 1:
            return None
        table[u] = candidates.pop()
    return SlidingBlockCode(target, source, 0, anticipation, table)


def brute_force_conjugacy_search(g1, g2, window=3):
    """Exhaustive search for a conjugacy among memory-0 bounded-window codes.

    Enumerates forward tables with anticipation below `window`, derives
    the only possible memory-0 inverse for each anticipation in range,
    and returns the first pair passing full verification, or None.  A
    conjugacy matches the number of points of every period, so pairs
    with differing closed-path counts short-circuit to None.
    """
    if window > 3:
        raise SearchBoundError("search window capped at 3")
    if window < 1:
        raise SearchBoundError("search window must be >= 1")
    m1 = edge_matrix(_as_graph(g1))
    m2 = edge_matrix(_as_graph(g2))
    for p in range(1, 9):
        if m1.power_trace(p) != m2.power_trace(p):
            return None
    same_labels = set(m1.labels) & set(m2.labels)
    for a1 in range(window):
        for table in _enumerate_window_tables(m1, m2, a1, bool(same_labels)):
            forward = SlidingBlockCode(m1, m2, 0, a1, table)
            for a2 in range(window):
                backward = _derive_inverse(forward, a2)
                if backward is None:
                    continue
                witness = ConjugacyWitness(forward, backward)
                if verify_conjugacy(witness).ok:
                    return witness
    return None
