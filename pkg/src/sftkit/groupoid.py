"""Shift groupoid of a one-sided shift, realised on eventually periodic points.

Elements are triples ``(x, n, y)`` of points with ``shift^k(x) ==
shift^l(y)`` for some witness exponents ``k - l = n``.  Eventually
periodic points are the computable substrate: they are dense, closed
under the shift and under sliding block codes, and admit a canonical
form that makes equality structural.

Canonical point form, in order:

1. the repeating cycle is primitive (not a proper power);
2. the prefix is as short as possible (trailing prefix letters matching
   the cycle's last letter are absorbed by rotating the cycle right);
3. the cycle is then rotated to its lexicographically least rotation,
   re-extending the prefix by the rotation offset.

Steps 2-3 pin a unique representation of the underlying point, so two
points are equal exactly when their canonical fields coincide.
"""

from dataclasses import dataclass
from math import gcd

from .blockcodes import require_verified_conjugacy
from .matrices import SftError


class NotComposablePairError(SftError):
    pass


class NotComposableError(SftError):
    pass


class InvalidBisectionError(SftError):
    pass


def _primitive(cycle):
    p = len(cycle)
    for d in range(1, p):
        if p % d == 0 and cycle == cycle[:d] * (p // d):
            return cycle[:d]
    return cycle


@dataclass(frozen=True)
class EPPoint:
    """Eventually periodic point stored as canonical prefix + cycle."""

    matrix: object
    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        if not self.cycle:
            raise SftError("cycle must be nonempty")
        seq = self.prefix + self.cycle + self.cycle[:1]
        self.matrix.require_admissible(seq)

    def letter(self, i):
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def expand(self, n):
        return tuple(self.letter(i) for i in range(n))

    def __repr__(self):
        return "EPPoint(%s)" % format_point(self)


def make_point(matrix, prefix, cycle):
    """Canonical :class:`EPPoint` for ``prefix . cycle . cycle ...``."""
    prefix = tuple(prefix)
    cycle = _primitive(tuple(cycle))
    # trailing prefix letter equal to the cycle's last letter is one
    # right-rotation of the periodic tail
    while prefix and prefix[-1] == cycle[-1]:
        prefix = prefix[:-1]
        cycle = cycle[-1:] + cycle[:-1]
    rotations = [cycle[r:] + cycle[:r] for r in range(len(cycle))]
    best = min(range(len(cycle)), key=lambda r: rotations[r])
    return EPPoint(matrix, prefix + cycle[:best], rotations[best])


def shift_point(point, t=1):
    """The point with its first `t` letters dropped, re-canonicalised."""
    if t < 0:
        raise SftError("shift exponent must be >= 0")
    if t <= len(point.prefix):
        return make_point(point.matrix, point.prefix[t:], point.cycle)
    r = (t - len(point.prefix)) % len(point.cycle)
    return make_point(point.matrix, (), point.cycle[r:] + point.cycle[:r])


def parse_point(matrix, text):
    """Parse ``prefix:(cycle)`` syntax, e.g. ``ca:(eb)`` or ``(eb)``."""
    text = text.strip()
    head, sep, tail = text.partition(":")
    if not sep:
        head, tail = "", text
    tail = tail.strip()
    if not (tail.startswith("(") and tail.endswith(")")):
        raise SftError("point cycle must be parenthesised: %r" % text)
    prefix = matrix.parse_word(head)
    cycle = matrix.parse_word(tail[1:-1])
    if not cycle:
        raise SftError("point cycle must be nonempty")
    if prefix and not matrix.follows(prefix[-1], cycle[0]):
        raise SftError("prefix does not join onto cycle in %r" % text)
    return make_point(matrix, prefix, cycle)


def format_point(point):
    m = point.matrix
    cycle = "(%s)" % m.format_word(point.cycle)
    if not point.prefix:
        return cycle
    return "%s:%s" % (m.format_word(point.prefix), cycle)


@dataclass(frozen=True)
class GroupoidElement:
    """Pair of points with a shift-alignment degree and minimal witness.

    ``shift^k(x) == shift^l(y)`` with ``n = k - l``; the stored witness
    is the least valid ``(k, l)``, so equal elements compare equal.
    """

    x: EPPoint
    y: EPPoint
    n: int
    k: int
    l: int


def make_element(x, k, l, y):
    """Element ``(x, k-l, y)`` after checking the tail condition at (k, l)."""
    if k < 0 or l < 0:
        raise SftError("witness exponents must be >= 0")
    if shift_point(x, k) != shift_point(y, l):
        raise NotComposablePairError(
            "shift^%d(%s) != shift^%d(%s)" % (k, format_point(x), l, format_point(y)))
    n = k - l
    kk = max(n, 0)
    while shift_point(x, kk) != shift_point(y, kk - n):
        kk += 1
    return GroupoidElement(x, y, n, kk, kk - n)


def try_make_element(x, n, y):
    """Element with degree `n` if one exists, else None (bounded scan)."""
    px, py = len(x.prefix), len(y.prefix)
    cx, cy = len(x.cycle), len(y.cycle)
    period = cx * cy // gcd(cx, cy)
    top = max(max(n, 0), px, py + n) + period
    for k in range(max(n, 0), top + 1):
        if shift_point(x, k) == shift_point(y, k - n):
            return GroupoidElement(x, y, n, k, k - n)
    return None


def compose(g, h):
    """Product of composable elements: degrees add, outer points survive."""
    if g.y != h.x:
        raise NotComposableError("source of the left element differs from range of the right")
    return make_element(g.x, g.k + h.k, g.l + h.l, h.y)


def inverse(g):
    return make_element(g.y, g.l, g.k, g.x)


def range_unit(g):
    return make_element(g.x, 0, 0, g.x)


def source_unit(g):
    return make_element(g.y, 0, 0, g.y)


def is_unit(g):
    return g.n == 0 and g.x == g.y


def cocycle(g):
    """Integer degree of an element; additive under composition."""
    return g.n


def shift_element(g):
    """Shift both legs of an element once; the degree is unchanged."""
    return make_element(shift_point(g.x), g.k, g.l, shift_point(g.y))


def apply_code_to_point(code, point):
    """Image of an eventually periodic point under a sliding block code.

    Outputs past ``len(prefix) + memory`` repeat with the cycle length,
    so that much prefix plus one cycle's worth of letters determines the
    image exactly.
    """
    head = len(point.prefix) + code.memory
    span = head + len(point.cycle) + code.anticipation
    ys = code.apply_prefix(point.expand(span))
    return make_point(code.target, ys[:head], ys[head : head + len(point.cycle)])


def induced_groupoid_map(witness, g):
    """Element map ``(x, n, y) -> (h(x), n, h(y))`` for a verified conjugacy."""
    require_verified_conjugacy(witness)
    hx = apply_code_to_point(witness.forward, g.x)
    hy = apply_code_to_point(witness.forward, g.y)
    return make_element(hx, g.k, g.l, hy)


@dataclass(frozen=True)
class BasisBisection:
    """Compact open set of elements ``(alpha.t, |alpha|-|beta|, beta.t)``.

    The defining words must share their final letter (or both be empty),
    otherwise no common continuation exists and the set is rejected.
    """

    matrix: object
    alpha: tuple
    beta: tuple

    def __post_init__(self):
        alpha = tuple(self.alpha)
        beta = tuple(self.beta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        self.matrix.require_admissible(alpha)
        self.matrix.require_admissible(beta)
        if (bool(alpha) != bool(beta)) or (alpha and alpha[-1] != beta[-1]):
            raise InvalidBisectionError(
                "defining words must share their final letter (or both be empty)")

    def __contains__(self, g):
        la, lb = len(self.alpha), len(self.beta)
        return (
            g.x.expand(la) == self.alpha
            and g.y.expand(lb) == self.beta
            and g.n == la - lb
            and shift_point(g.x, la) == shift_point(g.y, lb)
        )


def in_bisection(g, bisection):
    return g in bisection
