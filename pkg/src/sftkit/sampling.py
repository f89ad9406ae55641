"""Seeded random generators for matrices, graphs, points and groupoid elements.

Everything here is driven by a caller-supplied ``random.Random`` so that
reports and test corpora are reproducible from a printed seed.
"""

from .groupoid import GroupoidElement, make_element, make_point, shift_point
from .matrices import Matrix01, Multigraph, validate_matrix


def random_matrix(rng, max_size=5):
    """Random 0/1 matrix with no zero rows or columns."""
    n = rng.randint(1, max_size)
    grid = [[1 if rng.random() < 0.5 else 0 for _ in range(n)] for _ in range(n)]
    for i in range(n):
        if not any(grid[i]):
            grid[i][rng.randrange(n)] = 1
    for j in range(n):
        if not any(grid[i][j] for i in range(n)):
            grid[rng.randrange(n)][j] = 1
    return validate_matrix(grid)


def random_graph(rng, max_vertices=6, max_multiplicity=3, extra_edges=None):
    """Random multigraph where every vertex has an in and an out edge."""
    v = rng.randint(2, max_vertices)
    names = [str(i + 1) for i in range(v)]
    edges = []

    def multiplicity(src, dst):
        return sum(1 for (_, s, d) in edges if s == src and d == dst)

    def add(src, dst):
        if multiplicity(src, dst) >= max_multiplicity:
            return False
        edges.append(("e%d" % (len(edges) + 1), src, dst))
        return True

    for name in names:
        add(name, rng.choice(names))
    for name in names:
        if not any(d == name for (_, _, d) in edges):
            add(rng.choice(names), name)
    if extra_edges is None:
        extra_edges = rng.randint(0, v)
    for _ in range(extra_edges):
        add(rng.choice(names), rng.choice(names))
    return Multigraph.build(edges)


def random_cycle_word(rng, matrix, max_len=4, tries=64):
    """Admissible word that closes up (last letter may precede the first)."""
    for _ in range(tries):
        length = rng.randint(1, max_len)
        word = [rng.randrange(matrix.n)]
        for _ in range(length - 1):
            word.append(rng.choice(matrix.followers(word[-1])))
        if matrix.follows(word[-1], word[0]):
            return tuple(word)
    # deterministic fallback: walk until a letter repeats
    seen = {}
    cur = 0
    walk = []
    while cur not in seen:
        seen[cur] = len(walk)
        walk.append(cur)
        cur = matrix.followers(cur)[0]
    return tuple(walk[seen[cur]:])


def backward_word(rng, matrix, first_letter, length):
    """Admissible word of given length ending just before `first_letter`."""
    out = []
    cur = first_letter
    for _ in range(length):
        cur = rng.choice(matrix.predecessors(cur))
        out.append(cur)
    return tuple(reversed(out))


def random_point(rng, matrix, max_prefix=4, max_cycle=4):
    cycle = random_cycle_word(rng, matrix, max_cycle)
    prefix = backward_word(rng, matrix, cycle[0], rng.randint(0, max_prefix))
    return make_point(matrix, prefix, cycle)


def random_element(rng, matrix, max_exponent=3):
    """Random element built from a shared tail point and two lead-in words."""
    tail = random_point(rng, matrix)
    k = rng.randint(0, max_exponent)
    l = rng.randint(0, max_exponent)
    x = _prepend(rng, tail, k)
    y = _prepend(rng, tail, l)
    return make_element(x, k, l, y)


def _prepend(rng, point, length):
    if length == 0:
        return point
    lead = backward_word(rng, point.matrix, point.letter(0), length)
    return make_point(point.matrix, lead + point.prefix, point.cycle)


def random_composable(rng, matrix, max_exponent=3):
    """A composable pair (g, h) with source(g) == range(h)."""
    g = random_element(rng, matrix, max_exponent)
    k = rng.randint(0, max_exponent)
    l = rng.randint(0, max_exponent)
    tail = shift_point(g.y, k)
    z = _prepend(rng, tail, l)
    h = make_element(g.y, k, l, z)
    return g, h


def random_out_split(rng, graph):
    """A random two-part split of some splittable vertex, or None."""
    splittable = [v for v in graph.vertices if len(graph.out_edges(v)) >= 2]
    if not splittable:
        return None
    vertex = rng.choice(splittable)
    ids = [e.id for e in graph.out_edges(vertex)]
    rng.shuffle(ids)
    cut = rng.randint(1, len(ids) - 1)
    return vertex, (tuple(sorted(ids[:cut])), tuple(sorted(ids[cut:])))
