"""Line-based text formats for graphs, matrices, codes and witnesses.

Graph and matrix files hold named stanzas::

    # comment
    graph E 3
    edge a 1 2
    ...
    matrix M 2
    1 1
    1 1

Witness files define codes against previously named shifts and combine
them::

    code h from E to F memory 1 anticipation 0
    map e.b -> a'
    boundary 0 e -> e'
    ...
    witness eventual h hinv lag 1
    witness conjugacy f g
"""

import hashlib

from .blockcodes import (ConjugacyWitness, EventualConjugacyWitness,
                         SlidingBlockCode)
from .matrices import Matrix01, Multigraph, SftError, edge_matrix, validate_matrix


class ParseError(SftError):
    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__("line %d: %s" % (line_no, message))


def _content_lines(text):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_objects(text):
    """Parse every named graph and matrix stanza; returns name -> object."""
    objects = {}
    lines = list(_content_lines(text))
    i = 0
    while i < len(lines):
        no, line = lines[i]
        parts = line.split()
        if parts[0] == "graph":
            if len(parts) != 3:
                raise ParseError(no, "expected: graph <name> <vertex-count>")
            name, count = parts[1], _int(no, parts[2])
            i += 1
            edges = []
            while i < len(lines) and lines[i][1].split()[0] == "edge":
                eno, eline = lines[i]
                eparts = eline.split()
                if len(eparts) != 4:
                    raise ParseError(eno, "expected: edge <id> <source> <range>")
                edges.append((eparts[1], eparts[2], eparts[3]))
                i += 1
            try:
                graph = Multigraph.build(edges)
            except SftError as err:
                raise ParseError(no, "graph %s: %s" % (name, err)) from err
            if len(graph.vertices) != count:
                raise ParseError(
                    no, "graph %s declares %d vertices but edges use %d"
                    % (name, count, len(graph.vertices)))
            objects[name] = graph
        elif parts[0] == "matrix":
            if len(parts) != 3:
                raise ParseError(no, "expected: matrix <name> <size>")
            name, size = parts[1], _int(no, parts[2])
            rows = []
            i += 1
            for _ in range(size):
                if i >= len(lines):
                    raise ParseError(no, "matrix %s: missing rows" % name)
                rno, rline = lines[i]
                row = rline.split()
                if len(row) != size or any(v not in ("0", "1") for v in row):
                    raise ParseError(rno, "expected %d space-separated 0/1 entries" % size)
                rows.append(tuple(int(v) for v in row))
                i += 1
            try:
                objects[name] = validate_matrix(rows)
            except SftError as err:
                raise ParseError(no, "matrix %s: %s" % (name, err)) from err
        else:
            raise ParseError(no, "unexpected directive %r" % parts[0])
    return objects


def _int(no, text):
    try:
        return int(text)
    except ValueError:
        raise ParseError(no, "expected an integer, got %r" % text) from None


def shift_matrix(obj):
    """The transition matrix presenting an object's shift."""
    if isinstance(obj, Multigraph):
        return edge_matrix(obj)
    if isinstance(obj, Matrix01):
        return obj
    raise SftError("no shift presentation for %r" % type(obj).__name__)


def parse_witness_text(text, env):
    """Parse code and witness stanzas against named shifts in `env`.

    Returns ``(codes, witnesses)`` where witnesses is a list of
    :class:`ConjugacyWitness` / :class:`EventualConjugacyWitness` in
    file order.
    """
    codes = {}
    witnesses = []
    pending = None  # (line_no, name, source, target, memory, anticipation, table, boundary)

    def finish():
        nonlocal pending
        if pending is None:
            return
        no, name, src, dst, m, a, table, boundary = pending
        try:
            codes[name] = SlidingBlockCode(
                src, dst, m, a, table, tuple(boundary[n] for n in range(m)))
        except SftError as err:
            raise ParseError(no, "code %s: %s" % (name, err)) from err
        pending = None

    for no, line in _content_lines(text):
        parts = line.split()
        if parts[0] == "code":
            finish()
            if (len(parts) != 10 or parts[2] != "from" or parts[4] != "to"
                    or parts[6] != "memory" or parts[8] != "anticipation"):
                raise ParseError(
                    no, "expected: code <name> from <shift> to <shift>"
                        " memory <m> anticipation <a>")
            for shift_name in (parts[3], parts[5]):
                if shift_name not in env:
                    raise ParseError(no, "unknown shift %r" % shift_name)
            src = shift_matrix(env[parts[3]])
            dst = shift_matrix(env[parts[5]])
            m, a = _int(no, parts[7]), _int(no, parts[9])
            pending = (no, parts[1], src, dst, m, a, {}, {n: {} for n in range(m)})
        elif parts[0] == "map":
            if pending is None:
                raise ParseError(no, "map line outside a code stanza")
            if len(parts) != 4 or parts[2] != "->":
                raise ParseError(no, "expected: map <window> -> <letter>")
            _, _, src, dst, m, a, table, _ = pending
            window = _parse_window(no, src, parts[1], m + 1 + a)
            table[window] = _parse_letter(no, dst, parts[3])
        elif parts[0] == "boundary":
            if pending is None:
                raise ParseError(no, "boundary line outside a code stanza")
            if len(parts) != 5 or parts[3] != "->":
                raise ParseError(no, "expected: boundary <n> <prefix-window> -> <letter>")
            _, _, src, dst, m, a, _, boundary = pending
            n = _int(no, parts[1])
            if not 0 <= n < m:
                raise ParseError(no, "boundary coordinate %d outside 0..%d" % (n, m - 1))
            window = _parse_window(no, src, parts[2], n + 1 + a)
            boundary[n][window] = _parse_letter(no, dst, parts[4])
        elif parts[0] == "witness":
            finish()
            if len(parts) >= 2 and parts[1] == "conjugacy" and len(parts) == 4:
                fwd, bwd = _lookup_codes(no, codes, parts[2], parts[3])
                witnesses.append(ConjugacyWitness(fwd, bwd))
            elif (len(parts) == 6 and parts[1] == "eventual" and parts[4] == "lag"):
                fwd, bwd = _lookup_codes(no, codes, parts[2], parts[3])
                witnesses.append(EventualConjugacyWitness(fwd, bwd, _int(no, parts[5])))
            else:
                raise ParseError(
                    no, "expected: witness conjugacy <fwd> <bwd>"
                        " | witness eventual <fwd> <bwd> lag <L>")
        else:
            raise ParseError(no, "unexpected directive %r" % parts[0])
    finish()
    return codes, witnesses


def _lookup_codes(no, codes, fwd_name, bwd_name):
    for name in (fwd_name, bwd_name):
        if name not in codes:
            raise ParseError(no, "unknown code %r" % name)
    return codes[fwd_name], codes[bwd_name]


def _parse_window(no, matrix, text, expected_len):
    try:
        window = matrix.parse_word(text)
    except SftError as err:
        raise ParseError(no, str(err)) from err
    if len(window) != expected_len:
        raise ParseError(no, "window %s must have %d letters" % (text, expected_len))
    return window


def _parse_letter(no, matrix, text):
    try:
        return matrix.index(text)
    except SftError as err:
        raise ParseError(no, str(err)) from err


def format_graph(graph, name):
    lines = ["graph %s %d" % (name, len(graph.vertices))]
    lines.extend("edge %s %s %s" % (e.id, e.src, e.dst) for e in graph.edges)
    return "\n".join(lines) + "\n"


def format_matrix(matrix, name):
    lines = ["matrix %s %d" % (name, matrix.n)]
    lines.extend(" ".join(str(v) for v in row) for row in matrix.rows)
    return "\n".join(lines) + "\n"


def format_code(code, name, source_name, target_name):
    lines = ["code %s from %s to %s memory %d anticipation %d"
             % (name, source_name, target_name, code.memory, code.anticipation)]
    for window in sorted(code.table):
        lines.append("map %s -> %s" % (code.source.format_word(window),
                                       code.target.label(code.table[window])))
    for n, rules in enumerate(code.boundary):
        for window in sorted(rules):
            lines.append("boundary %d %s -> %s" % (
                n, code.source.format_word(window), code.target.label(rules[window])))
    return "\n".join(lines) + "\n"


def sha256_of_bytes(data):
    return hashlib.sha256(data).hexdigest()


def sha256_of_file(path):
    with open(path, "rb") as fh:
        return sha256_of_bytes(fh.read())
