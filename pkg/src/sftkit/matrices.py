"""Presentations of one-sided shifts of finite type.

A shift is presented either by a square 0/1 transition matrix or by a
finite multigraph whose edge shift is meant.  Letters are dense integer
indices ``0..n-1`` internally; each matrix carries a symbol table of
external labels (edge ids for edge shifts, ``"1".."N"`` for plain
matrices).  Words are plain tuples of letter indices, and every word
handed out by this module is admissible.
"""

from dataclasses import dataclass


class SftError(Exception):
    """Base class for all errors raised by this package."""


class NonSquareError(SftError):
    pass


class ZeroRowError(SftError):
    def __init__(self, rows, labels):
        self.rows = tuple(rows)
        names = ", ".join(str(labels[i]) for i in self.rows)
        super().__init__("rows without any 1 entry: %s" % names)


class ZeroColumnError(SftError):
    def __init__(self, cols, labels):
        self.cols = tuple(cols)
        names = ", ".join(str(labels[j]) for j in self.cols)
        super().__init__("columns without any 1 entry: %s" % names)


class StrandedVertexError(SftError):
    def __init__(self, vertices, kind):
        self.vertices = tuple(vertices)
        self.kind = kind
        super().__init__("vertices with no %s edge: %s" % (kind, ", ".join(vertices)))


class DuplicateEdgeIdError(SftError):
    pass


class UnknownLabelError(SftError):
    pass


class InadmissibleWordError(SftError):
    pass


class MatrixMismatchError(SftError):
    pass


def _is_glueable(label):
    # single character optionally followed by primes, e.g. "a", "e'"
    return len(label) >= 1 and label[0] != "'" and set(label[1:]) <= {"'"}


def tokenize_word(text):
    """Split a textual word into label tokens.

    Dots always separate labels (``"e'.a'"``); a dot-free string is read
    as a run of single characters where trailing apostrophes glue to the
    preceding character (``"e'a'"`` gives ``e'``, ``a'``).  The empty
    string is the empty word.
    """
    text = text.strip()
    if not text:
        return ()
    if "." in text:
        parts = tuple(p for p in text.split("."))
        if any(not p for p in parts):
            raise UnknownLabelError("empty label in %r" % text)
        return parts
    tokens = []
    for ch in text:
        if ch == "'" and tokens:
            tokens[-1] += ch
        else:
            tokens.append(ch)
    return tuple(tokens)


@dataclass(frozen=True)
class Matrix01:
    """Square 0/1 transition matrix with no zero rows and no zero columns.

    ``rows[i][j] == 1`` means letter ``j`` may follow letter ``i``.
    Construction validates the grid and rejects zero rows/columns, so a
    ``Matrix01`` always presents a nonempty shift space.
    """

    rows: tuple
    labels: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        labels = tuple(str(s) for s in self.labels)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "labels", labels)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise NonSquareError("need a nonempty square grid")
        if any(v not in (0, 1) for r in rows for v in r):
            raise SftError("matrix entries must be 0 or 1")
        if len(labels) != n or len(set(labels)) != n:
            raise SftError("need one distinct label per letter")
        zr = [i for i, r in enumerate(rows) if not any(r)]
        if zr:
            raise ZeroRowError(zr, labels)
        zc = [j for j in range(n) if not any(r[j] for r in rows)]
        if zc:
            raise ZeroColumnError(zc, labels)
        follow = tuple(tuple(j for j in range(n) if r[j]) for r in rows)
        precede = tuple(tuple(i for i in range(n) if rows[i][j]) for j in range(n))
        object.__setattr__(self, "_follow", follow)
        object.__setattr__(self, "_precede", precede)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(labels)})

    @property
    def n(self):
        return len(self.rows)

    def follows(self, i, j):
        return self.rows[i][j] == 1

    def followers(self, i):
        return self._follow[i]

    def predecessors(self, j):
        return self._precede[j]

    def is_admissible(self, word):
        return all(self.rows[word[t]][word[t + 1]] for t in range(len(word) - 1))

    def require_admissible(self, word):
        for t in range(len(word) - 1):
            if not self.rows[word[t]][word[t + 1]]:
                raise InadmissibleWordError(
                    "forbidden transition %s -> %s in %s"
                    % (self.labels[word[t]], self.labels[word[t + 1]], self.format_word(word))
                )
        return word

    def words(self, n):
        """All admissible words of length `n`, lexicographically ordered."""
        if n < 0:
            raise SftError("word length must be >= 0")
        out = [()]
        for _ in range(n):
            out = [w + (j,) for w in out for j in (self._follow[w[-1]] if w else range(self.n))]
        return out

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabelError("unknown letter %r" % label) from None

    def label(self, i):
        return self.labels[i]

    def parse_word(self, text):
        """Parse a textual word and check admissibility."""
        text = text.strip()
        if text and "." not in text and text in self._index:
            tokens = (text,)
        else:
            tokens = tokenize_word(text)
        word = tuple(self.index(t) for t in tokens)
        return self.require_admissible(word)

    def format_word(self, word):
        parts = [self.labels[i] for i in word]
        if all(_is_glueable(p) for p in parts):
            return "".join(parts)
        return ".".join(parts)

    def power_trace(self, p):
        """Number of points fixed by the p-fold shift (closed p-paths)."""
        n = self.n
        cur = self.rows
        for _ in range(p - 1):
            cur = tuple(
                tuple(sum(cur[i][k] * self.rows[k][j] for k in range(n)) for j in range(n))
                for i in range(n)
            )
        return sum(cur[i][i] for i in range(n))

    def __repr__(self):
        return "Matrix01(%d letters)" % self.n


def validate_matrix(grid, labels=None):
    """Build a :class:`Matrix01` from a raw grid, rejecting bad input.

    Raises :class:`NonSquareError`, :class:`ZeroRowError` or
    :class:`ZeroColumnError`; the latter two carry every failing index.
    """
    rows = tuple(tuple(r) for r in grid)
    if labels is None:
        labels = tuple(str(i + 1) for i in range(len(rows)))
    return Matrix01(rows, tuple(labels))


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    dst: str


@dataclass(frozen=True)
class Multigraph:
    """Finite directed multigraph; parallel edges allowed, ids unique.

    Every vertex must have at least one outgoing and one incoming edge
    (so the edge shift is nonempty and has no dead ends).  Vertices and
    edges are kept sorted, which makes equality canonical.
    """

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        vertices = tuple(sorted(str(v) for v in set(self.vertices)))
        edges = tuple(sorted((Edge(str(e.id), str(e.src), str(e.dst)) for e in self.edges),
                             key=lambda e: e.id))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        ids = [e.id for e in edges]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise DuplicateEdgeIdError("duplicate edge ids: %s" % ", ".join(dup))
        vset = set(vertices)
        for e in edges:
            if e.src not in vset or e.dst not in vset:
                raise SftError("edge %s uses unknown vertex" % e.id)
        no_out = [v for v in vertices if not any(e.src == v for e in edges)]
        if no_out:
            raise StrandedVertexError(no_out, "outgoing")
        no_in = [v for v in vertices if not any(e.dst == v for e in edges)]
        if no_in:
            raise StrandedVertexError(no_in, "incoming")

    @classmethod
    def build(cls, edges, vertices=()):
        """Build from ``(id, src, dst)`` triples; vertices are inferred."""
        es = tuple(Edge(str(i), str(s), str(d)) for (i, s, d) in edges)
        vs = set(vertices)
        for e in es:
            vs.add(e.src)
            vs.add(e.dst)
        return cls(tuple(vs), es)

    def out_edges(self, v):
        return tuple(e for e in self.edges if e.src == v)

    def in_edges(self, v):
        return tuple(e for e in self.edges if e.dst == v)

    def edge_count(self, u, v):
        return sum(1 for e in self.edges if e.src == u and e.dst == v)

    def in_profile(self, v):
        """Incoming edge counts of `v` listed per source vertex."""
        return tuple(self.edge_count(u, v) for u in self.vertices)

    def __repr__(self):
        return "Multigraph(%d vertices, %d edges)" % (len(self.vertices), len(self.edges))


def edge_matrix(graph):
    """Transition matrix of the edge shift of `graph`.

    The alphabet is the (sorted) edge ids; edge ``f`` may follow edge
    ``e`` exactly when the range of ``e`` is the source of ``f``.  The
    id-to-index table is the returned matrix's label tuple.
    """
    edges = graph.edges
    rows = tuple(
        tuple(1 if e.dst == f.src else 0 for f in edges)
        for e in edges
    )
    return Matrix01(rows, tuple(e.id for e in edges))


def graph_of_matrix(matrix):
    """Graph with one vertex per letter and an edge per allowed transition.

    The edge shift of the result is the canonical two-letter-window
    recoding of the vertex shift presented by `matrix`, hence conjugate
    to it.
    """
    edges = []
    for i, a in enumerate(matrix.labels):
        for j in matrix.followers(i):
            b = matrix.labels[j]
            edges.append(("%s>%s" % (a, b), a, b))
    return Multigraph.build(edges, vertices=matrix.labels)


def higher_block_matrix(matrix, n):
    """Transition matrix on length-`n` admissible words, joined by overlap.

    ``higher_block_matrix(M, 1)`` is ``M`` itself.
    """
    if n < 1:
        raise SftError("block length must be >= 1")
    if n == 1:
        return matrix
    words = matrix.words(n)
    index = {w: i for i, w in enumerate(words)}
    rows = [[0] * len(words) for _ in words]
    for w, i in index.items():
        for j in matrix.followers(w[-1]):
            rows[i][index[w[1:] + (j,)]] = 1
    labels = tuple(matrix.format_word(w) for w in words)
    return Matrix01(tuple(tuple(r) for r in rows), labels)


@dataclass(frozen=True)
class Cylinder:
    """All points beginning with a fixed admissible word."""

    matrix: Matrix01
    word: tuple

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        self.matrix.require_admissible(self.word)

    def matches(self, letters):
        """Does a letter sequence (indexable, long enough) start with the base word?"""
        return tuple(letters[: len(self.word)]) == self.word

    def contains_point(self, point):
        return point.expand(len(self.word)) == self.word
