"""Symbolic *-algebra spanned by monomials ``s_alpha s_beta*``.

For a 0/1 matrix the generators ``s_1 .. s_N`` are partial isometries
subject to ``s_i* s_j = 0`` for ``i != j`` and ``s_i* s_i = sum_j
A(i,j) s_j s_j*``.  Every element here is a finite linear combination of
normalised monomials ``s_alpha s_beta*`` where ``alpha`` and ``beta``
are admissible words sharing their final letter (or both empty: the
unit).  Coefficients are exact complex rationals; nothing in this module
touches floating point.

Monomials are not linearly independent across refinement: ``s_alpha
s_beta*`` equals the sum of ``s_{alpha j} s_{beta j}*`` over the letters
``j`` that may follow.  Equality of elements therefore refines both
sides degree class by degree class to a common word length, where the
surviving monomials are independent, and compares coefficients.
"""

import re as _re
from dataclasses import dataclass
from fractions import Fraction

from .blockcodes import require_verified_conjugacy
from .matrices import MatrixMismatchError, SftError


@dataclass(frozen=True)
class RC:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    @classmethod
    def of(cls, v):
        if isinstance(v, RC):
            return v
        if isinstance(v, (int, Fraction)):
            return cls(Fraction(v), Fraction(0))
        raise SftError("cannot coerce %r to an exact complex rational" % (v,))

    def __add__(self, other):
        other = RC.of(other)
        return RC(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        other = RC.of(other)
        return RC(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        other = RC.of(other)
        return RC(self.re * other.re - self.im * other.im,
                  self.re * other.im + self.im * other.re)

    def __neg__(self):
        return RC(-self.re, -self.im)

    def conjugate(self):
        return RC(self.re, -self.im)

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        imag = "i" if self.im == 1 else ("-i" if self.im == -1 else "%si" % self.im)
        if self.re == 0:
            return imag
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        imag = "i" if mag == 1 else "%si" % mag
        return "(%s%s%s)" % (self.re, sign, imag)


RC_ZERO = RC(Fraction(0), Fraction(0))
RC_ONE = RC(Fraction(1), Fraction(0))


def _normal_keys(matrix, a, b):
    """Basis keys of ``s_a s_b*``: itself, or its one-step expansion.

    Appending a common follower to both words equalises final letters,
    so the expansion terminates in one step; no common follower means
    the product of range projections is zero.
    """
    if (not a and not b) or (a and b and a[-1] == b[-1]):
        return ((a, b),)
    ja = matrix.followers(a[-1]) if a else tuple(range(matrix.n))
    jb = set(matrix.followers(b[-1])) if b else set(range(matrix.n))
    return tuple((a + (j,), b + (j,)) for j in ja if j in jb)


def _accumulate(acc, key, coeff):
    cur = acc.get(key, RC_ZERO) + coeff
    if cur.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = cur


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Finite combination of normalised monomials over one matrix."""

    matrix: object
    terms: dict

    def __post_init__(self):
        object.__setattr__(
            self, "terms",
            {k: v for k, v in self.terms.items() if not v.is_zero()})

    __hash__ = None

    def degrees(self):
        return sorted({len(a) - len(b) for (a, b) in self.terms})

    def is_zero(self):
        return not self.canonical()

    def canonical(self):
        """Terms with every degree class refined to its maximal word length."""
        by_deg = {}
        for (a, b), c in self.terms.items():
            by_deg.setdefault(len(a) - len(b), {})[(a, b)] = c
        out = {}
        for group in by_deg.values():
            depth = max(len(a) for (a, _) in group)
            work = dict(group)
            while True:
                short = [k for k in work if len(k[0]) < depth]
                if not short:
                    break
                for k in short:
                    c = work.pop(k)
                    for k2 in _expand_key(self.matrix, *k):
                        _accumulate(work, k2, c)
            for k, c in work.items():
                if not c.is_zero():
                    out[k] = c
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if self.matrix != other.matrix:
            return False
        return (self - other).is_zero()

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if self.matrix != other.matrix:
            raise MatrixMismatchError("elements live over different matrices")
        acc = dict(self.terms)
        for k, c in other.terms.items():
            _accumulate(acc, k, c)
        return AlgebraElement(self.matrix, acc)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return AlgebraElement(self.matrix, {k: -c for k, c in self.terms.items()})

    def scaled(self, scalar):
        s = RC.of(scalar)
        return AlgebraElement(self.matrix, {k: c * s for k, c in self.terms.items()})

    def __rmul__(self, scalar):
        return self.scaled(scalar)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RC)):
            return self.scaled(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if self.matrix != other.matrix:
            raise MatrixMismatchError("elements live over different matrices")
        acc = {}
        for (a, b), cu in self.terms.items():
            for (c, d), cv in other.terms.items():
                coeff = cu * cv
                for raw_a, raw_b in _product_raw(self.matrix, a, b, c, d):
                    for key in _normal_keys(self.matrix, raw_a, raw_b):
                        _accumulate(acc, key, coeff)
        return AlgebraElement(self.matrix, acc)

    def adjoint(self):
        return AlgebraElement(
            self.matrix,
            {(b, a): c.conjugate() for (a, b), c in self.terms.items()})

    def __repr__(self):
        return "AlgebraElement(%s)" % format_element(self)


def _expand_key(matrix, a, b):
    """One refinement step: extend both words by every common follower."""
    ja = matrix.followers(a[-1]) if a else tuple(range(matrix.n))
    jb = set(matrix.followers(b[-1])) if b else set(range(matrix.n))
    return tuple((a + (j,), b + (j,)) for j in ja if j in jb)


def _product_raw(matrix, a, b, c, d):
    """Monomial product rule on normalised keys; output may need renormalising.

    The exact-overlap case with both outer words empty is the defining
    relation: ``s_b* s_b`` is the sum of range projections over the
    followers of b's final letter, not the unit.
    """
    if b == c:
        if not a and not d and b:
            return tuple(((j,), (j,)) for j in matrix.followers(b[-1]))
        return ((a, d),)
    if len(c) > len(b) and c[: len(b)] == b:
        return ((a + c[len(b):], d),)
    if len(b) > len(c) and b[: len(c)] == c:
        return ((a, d + b[len(c):]),)
    return ()


def zero(matrix):
    return AlgebraElement(matrix, {})


def unit(matrix):
    return AlgebraElement(matrix, {((), ()): RC_ONE})


def normalize_pair(matrix, alpha, beta, coeff=1):
    """Element ``coeff * s_alpha s_beta*`` written in the normalised basis."""
    alpha = tuple(alpha)
    beta = tuple(beta)
    matrix.require_admissible(alpha)
    matrix.require_admissible(beta)
    c = RC.of(coeff)
    acc = {}
    for key in _normal_keys(matrix, alpha, beta):
        _accumulate(acc, key, c)
    return AlgebraElement(matrix, acc)


def monomial(matrix, alpha, beta, coeff=1):
    return normalize_pair(matrix, alpha, beta, coeff)


def generator(matrix, i):
    """The partial isometry of letter `i` (index or label)."""
    if isinstance(i, str):
        i = matrix.index(i)
    return normalize_pair(matrix, (i,), ())


def word_isometry(matrix, word):
    return normalize_pair(matrix, tuple(word), ())


def sandwich(u):
    """Conjugation by the sum of all generators: ``u -> (sum_j s_j) u (sum_i s_i)*``.

    On a monomial this prepends every feasible letter to each side
    independently; empty sides accept every letter.
    """
    M = u.matrix
    everything = tuple(range(M.n))
    acc = {}
    for (a, b), c in u.terms.items():
        js = M.predecessors(a[0]) if a else everything
        is_ = M.predecessors(b[0]) if b else everything
        for j in js:
            for i in is_:
                for key in _normal_keys(M, (j,) + a, (i,) + b):
                    _accumulate(acc, key, c)
    return AlgebraElement(M, acc)


def matched_sandwich(u):
    """``u -> sum_i s_i u s_i*``: prepend the same letter on both sides.

    On diagonal elements, read as functions on points, this is
    precomposition with the shift.
    """
    M = u.matrix
    everything = tuple(range(M.n))
    acc = {}
    for (a, b), c in u.terms.items():
        js = M.predecessors(a[0]) if a else everything
        is_ = set(M.predecessors(b[0])) if b else set(everything)
        for i in js:
            if i not in is_:
                continue
            for key in _normal_keys(M, (i,) + a, (i,) + b):
                _accumulate(acc, key, c)
    return AlgebraElement(M, acc)


def diagonal_part(u):
    """Conditional expectation onto the diagonal: keep ``alpha == beta`` terms.

    Off-diagonal monomials vanish on the unit space (same-length distinct
    words have disjoint cylinders; unequal lengths have nonzero degree),
    so key filtering is exact and stable under refinement.
    """
    return AlgebraElement(
        u.matrix, {k: c for k, c in u.terms.items() if k[0] == k[1]})


def degree(key):
    return len(key[0]) - len(key[1])


def degree_split(u):
    """Partition into homogeneous parts by word-length difference."""
    parts = {}
    for k, c in u.terms.items():
        parts.setdefault(degree(k), {})[k] = c
    return {d: AlgebraElement(u.matrix, terms) for d, terms in sorted(parts.items())}


def is_diagonal(u):
    return all(a == b for (a, b) in u.terms)


@dataclass(frozen=True)
class RelationReport:
    ok: bool
    checked: int
    failures: tuple = ()

    def to_dict(self):
        return {"ok": self.ok, "checked": self.checked, "failures": list(self.failures)}


def verify_generator_relations(matrix, max_len=1):
    """Check the defining relations and the unit decomposition symbolically.

    Letters: orthogonality ``s_i* s_j = 0`` (i != j), the row relation
    ``s_i* s_i = sum_j A(i,j) s_j s_j*`` and ``sum_i s_i s_i* = 1``.
    Words up to `max_len` get the derived consequences: ``s_a* s_a``
    telescopes to the final letter's row projection and same-length
    distinct words stay orthogonal.
    """
    if max_len < 1:
        raise SftError("max word length must be >= 1")
    failures = []
    checked = 0
    n = matrix.n
    gens = [generator(matrix, i) for i in range(n)]
    total = zero(matrix)
    for g in gens:
        total = total + g * g.adjoint()
    checked += 1
    if total != unit(matrix):
        failures.append("sum of range projections is not the unit")
    for i in range(n):
        for j in range(n):
            checked += 1
            prod = gens[i].adjoint() * gens[j]
            if i != j:
                if not prod.is_zero():
                    failures.append("s_%s* s_%s != 0" % (matrix.label(i), matrix.label(j)))
            else:
                row = zero(matrix)
                for jj in matrix.followers(i):
                    row = row + normalize_pair(matrix, (jj,), (jj,))
                if prod != row:
                    failures.append("row relation fails at %s" % matrix.label(i))
    for length in range(2, max_len + 1):
        words = matrix.words(length)
        for w in words:
            checked += 1
            sw = word_isometry(matrix, w)
            expect = zero(matrix)
            for jj in matrix.followers(w[-1]):
                expect = expect + normalize_pair(matrix, (jj,), (jj,))
            if sw.adjoint() * sw != expect:
                failures.append("word row relation fails at %s" % matrix.format_word(w))
        for w in words:
            for v in words:
                if v <= w:
                    continue
                checked += 1
                if not (word_isometry(matrix, w).adjoint() * word_isometry(matrix, v)).is_zero():
                    failures.append(
                        "distinct words not orthogonal: %s, %s"
                        % (matrix.format_word(w), matrix.format_word(v)))
    return RelationReport(not failures, checked, tuple(failures))


def verify_diagonal_compression(matrix, max_len=3):
    """Diagonal part of the generator-sum conjugation equals the matched form.

    Checked exactly on every diagonal monomial with word length up to
    `max_len`, including the unit.
    """
    failures = []
    checked = 0
    for length in range(0, max_len + 1):
        for w in matrix.words(length):
            checked += 1
            f = normalize_pair(matrix, w, w)
            if diagonal_part(sandwich(f)) != matched_sandwich(f):
                failures.append(matrix.format_word(w) if w else "(empty)")
    return RelationReport(not failures, checked, tuple(failures))


def _preimage_words(code, target_word):
    """Source words of length ``len(target_word) + anticipation`` mapping onto it."""
    M = code.source
    want = len(target_word) + code.anticipation
    found = []

    def extend(eta):
        t = len(eta) - 1 - code.anticipation
        if t >= 0 and code.output_at(eta, t) != target_word[t]:
            return
        if len(eta) == want:
            found.append(eta)
            return
        for j in (M.followers(eta[-1]) if eta else range(M.n)):
            extend(eta + (j,))

    extend(())
    return found


def induced_algebra_map(witness, u):
    """Push an element through the isomorphism induced by a conjugacy.

    A monomial is the indicator of a basic bisection; its image is read
    off through the inverse code: the image bisection is the union of
    ``(gamma, delta)`` over inverse-image cylinders of the defining words
    whose trailing anticipation letters agree (those letters are shared
    by the aligned tails).  The result is exact, and refining the input
    first gives the same element.
    """
    require_verified_conjugacy(witness)
    fwd, bwd = witness.forward, witness.backward
    if u.matrix != fwd.source:
        raise MatrixMismatchError("element does not live over the witness source")
    target = fwd.target
    cache = getattr(witness, "_monomial_image_cache", None)
    if cache is None:
        cache = {}
        object.__setattr__(witness, "_monomial_image_cache", cache)
    acc = {}
    for key, c in u.terms.items():
        img = cache.get(key)
        if img is None:
            img = _monomial_image(bwd, target, key[0], key[1])
            cache[key] = img
        for k2, c2 in img.items():
            _accumulate(acc, k2, c * c2)
    return AlgebraElement(target, acc)


def _monomial_image(bwd, target, alpha, beta):
    ab = bwd.anticipation
    h_alpha = _preimage_words(bwd, alpha)
    h_beta = _preimage_words(bwd, beta)
    by_suffix = {}
    for delta in h_beta:
        by_suffix.setdefault(delta[len(delta) - ab:] if ab else (), []).append(delta)
    acc = {}
    for gamma in h_alpha:
        suffix = gamma[len(gamma) - ab:] if ab else ()
        for delta in by_suffix.get(suffix, ()):
            for key in _normal_keys(target, gamma, delta):
                _accumulate(acc, key, RC_ONE)
    return acc


_TERM_RE = _re.compile(r"^\s*(?:(?P<coef>.*?)\s*\*\s*)?\(\s*(?P<a>[^|()]*?)\s*\|\s*(?P<b>[^|()]*?)\s*\)\s*$")
_SIMPLE_RE = _re.compile(r"^(?P<sign>[+-]?)(?P<mag>(?:\d+(?:/\d+)?)?)(?P<imag>i?)$")


def _parse_scalar(text):
    text = text.strip()
    if not text:
        return RC_ONE
    if text == "-":
        return -RC_ONE
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1].strip()
    parts = _re.findall(r"[+-]?[^+-]+", text)
    if not 1 <= len(parts) <= 2:
        raise SftError("bad coefficient %r" % text)
    total = RC_ZERO
    for part in parts:
        m = _SIMPLE_RE.match(part.strip())
        if not m or (not m.group("mag") and not m.group("imag")):
            raise SftError("bad coefficient %r" % text)
        mag = Fraction(m.group("mag") or 1)
        if m.group("sign") == "-":
            mag = -mag
        total = total + (RC(Fraction(0), mag) if m.group("imag") else RC(mag, Fraction(0)))
    return total


def _split_terms(text):
    terms = []
    cur = []
    depth = 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and "".join(cur).strip():
            terms.append("".join(cur))
            cur = [] if ch == "+" else ["-"]
        else:
            cur.append(ch)
    if "".join(cur).strip():
        terms.append("".join(cur))
    return terms


def parse_element(matrix, text):
    """Parse element syntax like ``2*(a.b|c.b) + (|)``; ``0`` is the zero element."""
    text = text.strip()
    if text == "0":
        return zero(matrix)
    total = zero(matrix)
    for term in _split_terms(text):
        m = _TERM_RE.match(term)
        if not m:
            raise SftError("bad element term %r" % term.strip())
        coeff = _parse_scalar(m.group("coef") or "")
        alpha = matrix.parse_word(m.group("a"))
        beta = matrix.parse_word(m.group("b"))
        total = total + normalize_pair(matrix, alpha, beta, coeff)
    return total


def format_element(u):
    if not u.terms:
        return "0"
    bits = []
    for (a, b) in sorted(u.terms, key=lambda k: (len(k[0]), k[0], len(k[1]), k[1])):
        c = u.terms[(a, b)]
        mono = "(%s|%s)" % (u.matrix.format_word(a), u.matrix.format_word(b))
        bits.append(mono if c == RC_ONE else "%s*%s" % (c, mono))
    return " + ".join(bits)
