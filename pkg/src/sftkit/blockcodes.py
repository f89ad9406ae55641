"""Sliding block codes between one-sided shifts, with initial-coordinate rules.

A code with memory ``m`` and anticipation ``a`` emits output letter ``n``
from the input window ``x[n-m .. n+a]``.  One-sided points have no
coordinates left of 0, so coordinates ``n < m`` carry their own prefix
rules mapping the ``n+1+a`` visible letters; a code is therefore a
stationary window table plus ``m`` boundary tables, all total on
admissible windows.

Verification of inverse pairs, shift-commutation (conjugacy) and the
lagged variant (eventual conjugacy) reduces to finite window checks: at
coordinates past the memory both sides of each relation evaluate the
stationary table on the same input window, so only boundary-influenced
coordinates can disagree.  The bounds used here are conservative and are
guarded by a randomized deep check in the test suite.
"""

from dataclasses import dataclass

from .matrices import MatrixMismatchError, SftError


class WordTooShortError(SftError):
    pass


class PartialTableError(SftError):
    pass


class InvalidWitnessError(SftError):
    pass


@dataclass(frozen=True, eq=False)
class SlidingBlockCode:
    """Window map between shifts presented by 0/1 matrices.

    `table` maps every admissible ``(memory+1+anticipation)``-window of
    `source` to a letter of `target`; ``boundary[n]`` maps every
    admissible ``(n+1+anticipation)``-prefix window, for ``n < memory``.
    Partial tables are rejected; image admissibility is a soft property
    reported by :func:`verify_homeomorphism` so that broken candidate
    codes can still be examined.
    """

    source: object
    target: object
    memory: int
    anticipation: int
    table: dict
    boundary: tuple = ()

    def __post_init__(self):
        if self.memory < 0 or self.anticipation < 0:
            raise SftError("memory and anticipation must be >= 0")
        object.__setattr__(self, "table", dict(self.table))
        object.__setattr__(self, "boundary", tuple(dict(b) for b in self.boundary))
        if len(self.boundary) != self.memory:
            raise PartialTableError(
                "need one boundary table per coordinate below memory=%d" % self.memory
            )
        n_target = self.target.n
        for win, out in self.table.items():
            if not (0 <= out < n_target):
                raise SftError("output letter out of range for window %r" % (win,))
        for win in self.source.words(self.memory + 1 + self.anticipation):
            if win not in self.table:
                raise PartialTableError(
                    "stationary table missing window %s" % self.source.format_word(win)
                )
        for n, rules in enumerate(self.boundary):
            for win in self.source.words(n + 1 + self.anticipation):
                if win not in rules:
                    raise PartialTableError(
                        "boundary table %d missing window %s"
                        % (n, self.source.format_word(win))
                    )
            for out in rules.values():
                if not (0 <= out < n_target):
                    raise SftError("boundary output letter out of range")

    def output_at(self, letters, n):
        """Output letter at coordinate `n` of any input starting with `letters`."""
        if n < self.memory:
            return self.boundary[n][tuple(letters[: n + 1 + self.anticipation])]
        lo = n - self.memory
        return self.table[tuple(letters[lo : n + 1 + self.anticipation])]

    def apply_prefix(self, letters):
        """All output letters determined by an input prefix (may be empty)."""
        count = max(0, len(letters) - self.anticipation)
        return tuple(self.output_at(letters, n) for n in range(count))

    def slide(self, letters):
        """Stationary-table outputs along an interior window, ignoring boundaries."""
        width = self.memory + 1 + self.anticipation
        return tuple(self.table[tuple(letters[t : t + width])]
                     for t in range(len(letters) - width + 1))

    def __repr__(self):
        return "SlidingBlockCode(m=%d, a=%d, %d -> %d letters)" % (
            self.memory, self.anticipation, self.source.n, self.target.n)


def apply_code(code, word):
    """Image word of an admissible input word of length >= m+a+1."""
    word = tuple(word)
    least = code.memory + code.anticipation + 1
    if len(word) < least:
        raise WordTooShortError("need at least %d letters, got %d" % (least, len(word)))
    code.source.require_admissible(word)
    return code.apply_prefix(word)


def identity_code(matrix):
    return SlidingBlockCode(matrix, matrix, 0, 0, {(i,): i for i in range(matrix.n)})


def one_block_code(source, target, letter_map):
    """Memory-0 anticipation-0 code from a label-to-label mapping."""
    table = {(source.index(a),): target.index(b) for a, b in letter_map.items()}
    return SlidingBlockCode(source, target, 0, 0, table)


def compose(outer, inner):
    """Code computing ``outer`` after ``inner``; memories and anticipations add."""
    if inner.target is not outer.source and inner.target != outer.source:
        raise MatrixMismatchError("codes do not chain: inner target differs from outer source")
    m = inner.memory + outer.memory
    a = inner.anticipation + outer.anticipation
    src = inner.source
    table = {}
    for w in src.words(m + 1 + a):
        mid = inner.slide(w)
        table[w] = outer.table[mid]
    boundary = []
    for n in range(m):
        rules = {}
        for w in src.words(n + 1 + a):
            mid = inner.apply_prefix(w)
            rules[w] = outer.output_at(mid, n)
        boundary.append(rules)
    return SlidingBlockCode(src, outer.target, m, a, table, tuple(boundary))


@dataclass(frozen=True, eq=False)
class ConjugacyWitness:
    """Mutually inverse shift-commuting codes in both directions."""

    forward: SlidingBlockCode
    backward: SlidingBlockCode


@dataclass(frozen=True, eq=False)
class EventualConjugacyWitness:
    """Mutually inverse codes commuting with the shift up to a shared lag."""

    forward: SlidingBlockCode
    backward: SlidingBlockCode
    lag: int


@dataclass(frozen=True)
class HomeomorphismReport:
    ok: bool
    reason: str = ""
    direction: str = ""
    word: str = ""
    coordinate: int = -1

    def to_dict(self):
        d = {"ok": self.ok}
        if not self.ok:
            d.update(reason=self.reason, direction=self.direction,
                     word=self.word, coordinate=self.coordinate)
        return d


@dataclass(frozen=True)
class ConjugacyReport:
    ok: bool
    homeomorphism: HomeomorphismReport
    direction: str = ""
    coordinate: int = -1
    word: str = ""

    def to_dict(self):
        d = {"ok": self.ok, "homeomorphism": self.homeomorphism.to_dict()}
        if not self.ok and self.homeomorphism.ok:
            d.update(direction=self.direction, coordinate=self.coordinate, word=self.word)
        return d


@dataclass(frozen=True)
class EventualConjugacyReport:
    ok: bool
    lag: int
    homeomorphism: HomeomorphismReport
    direction: str = ""
    coordinate: int = -1
    word: str = ""

    def to_dict(self):
        d = {"ok": self.ok, "lag": self.lag,
             "homeomorphism": self.homeomorphism.to_dict()}
        if not self.ok and self.homeomorphism.ok:
            d.update(direction=self.direction, coordinate=self.coordinate, word=self.word)
        return d


def image_admissibility_violation(code):
    """First input word whose image breaks a target transition, or None.

    Consecutive outputs n, n+1 are both visible on inputs of length
    m+a+2, and every stationary window pair occurs there, so this check
    is exhaustive.
    """
    tgt = code.target
    for w in code.source.words(code.memory + code.anticipation + 2):
        ys = code.apply_prefix(w)
        for t in range(len(ys) - 1):
            if not tgt.follows(ys[t], ys[t + 1]):
                return w, t
    return None


def verify_homeomorphism(forward, backward):
    """Check that two opposite codes are well defined and mutually inverse.

    Round trips are compared on every admissible word long enough to
    determine m_f+m_b+a_f+a_b+2 composite outputs; past that length both
    composites are stationary in the same windows.
    """
    if forward.source != backward.target or forward.target != backward.source:
        raise MatrixMismatchError("codes are not between the same pair of shifts")
    for code, direction in ((forward, "forward"), (backward, "backward")):
        bad = image_admissibility_violation(code)
        if bad is not None:
            w, t = bad
            return HomeomorphismReport(
                False, "image-inadmissible", direction,
                code.source.format_word(w), t)
    for first, second, direction in (
        (forward, backward, "backward-after-forward"),
        (backward, forward, "forward-after-backward"),
    ):
        width = (forward.memory + forward.anticipation
                 + backward.memory + backward.anticipation + 2)
        for w in first.source.words(width):
            mid = first.apply_prefix(w)
            back = second.apply_prefix(mid)
            for t in range(len(back)):
                if back[t] != w[t]:
                    return HomeomorphismReport(
                        False, "round-trip", direction,
                        first.source.format_word(w), t)
    return HomeomorphismReport(True)


def _lag_violation(code, lag, extra=1):
    """First (word, t) where image-of-shift and shifted-image disagree at t >= lag."""
    m, a = code.memory, code.anticipation
    top = m + lag + extra  # last coordinate checked; only t < m can truly differ
    for w in code.source.words(m + a + lag + extra + 2):
        shifted = code.apply_prefix(w[1:])
        whole = code.apply_prefix(w)
        for t in range(lag, min(top + 1, len(shifted), len(whole) - 1)):
            if shifted[t] != whole[t + 1]:
                return w, t
    return None


def verify_conjugacy(witness):
    """Check a claimed conjugacy: inverse pair plus exact shift-commutation."""
    homeo = verify_homeomorphism(witness.forward, witness.backward)
    if not homeo.ok:
        return ConjugacyReport(False, homeo)
    for code, direction in ((witness.forward, "forward"), (witness.backward, "backward")):
        bad = _lag_violation(code, 0)
        if bad is not None:
            w, t = bad
            return ConjugacyReport(False, homeo, direction, t, code.source.format_word(w))
    return ConjugacyReport(True, homeo)


def verify_eventual_conjugacy(witness):
    """Check the lag-L shift relations in both directions (shared lag)."""
    lag = witness.lag
    if lag < 0:
        raise SftError("lag must be >= 0")
    homeo = verify_homeomorphism(witness.forward, witness.backward)
    if not homeo.ok:
        return EventualConjugacyReport(False, lag, homeo)
    for code, direction in ((witness.forward, "forward"), (witness.backward, "backward")):
        bad = _lag_violation(code, lag)
        if bad is not None:
            w, t = bad
            return EventualConjugacyReport(
                False, lag, homeo, direction, t, code.source.format_word(w))
    return EventualConjugacyReport(True, lag, homeo)


def require_verified_conjugacy(witness):
    """Raise unless the witness verifies; caches the result on the witness."""
    cached = getattr(witness, "_verified", None)
    if cached is None:
        cached = verify_conjugacy(witness).ok
        object.__setattr__(witness, "_verified", cached)
    if not cached:
        raise InvalidWitnessError("witness fails conjugacy verification")
    return witness


def higher_block_recoding(matrix, n):
    """The length-`n` window recoding and its one-letter inverse.

    Returns ``(block_matrix, witness)`` where the forward code reads a
    point through overlapping n-windows (memory 0, anticipation n-1) and
    the backward code projects a window letter to its first letter.
    """
    from .matrices import higher_block_matrix

    block = higher_block_matrix(matrix, n)
    if n == 1:
        ident = identity_code(matrix)
        return block, ConjugacyWitness(ident, ident)
    words = matrix.words(n)
    index = {w: i for i, w in enumerate(words)}
    fwd = SlidingBlockCode(matrix, block, 0, n - 1, {w: index[w] for w in words})
    bwd = SlidingBlockCode(block, matrix, 0, 0, {(i,): w[0] for w, i in index.items()})
    return block, ConjugacyWitness(fwd, bwd)
