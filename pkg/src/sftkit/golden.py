"""Embedded example pair: eventually conjugate but not conjugate edge shifts.

Graph E has two parallel returns on each side of its middle vertex;
graph F reroutes one of them (e') back to the first vertex.  The shipped
homeomorphism between the edge shifts primes every letter except that an
e forces the next output to a', with the unprimed rule at coordinate 0.
It commutes with the shifts up to one extra shift (lag 1) but not on the
nose, while the terminal graphs of E and F differ, so the shifts are
eventually conjugate and not conjugate.
"""

from functools import lru_cache

from .blockcodes import EventualConjugacyWitness
from .fileio import parse_objects, parse_witness_text

E_GRAPH_TEXT = """\
graph E 3
edge a 1 2
edge b 3 2
edge c 2 1
edge d 2 1
edge e 2 3
edge f 2 3
"""

F_GRAPH_TEXT = """\
graph F 3
edge a' 1 2
edge b' 3 2
edge c' 2 1
edge d' 2 1
edge e' 2 1
edge f' 2 3
"""

WITNESS_TEXT = """\
code h from E to F memory 1 anticipation 0
map ac -> c'
map ad -> d'
map ae -> e'
map af -> f'
map bc -> c'
map bd -> d'
map be -> e'
map bf -> f'
map ca -> a'
map da -> a'
map eb -> a'
map fb -> b'
boundary 0 a -> a'
boundary 0 b -> b'
boundary 0 c -> c'
boundary 0 d -> d'
boundary 0 e -> e'
boundary 0 f -> f'
code hinv from F to E memory 1 anticipation 0
map a'c' -> c
map a'd' -> d
map a'e' -> e
map a'f' -> f
map b'c' -> c
map b'd' -> d
map b'e' -> e
map b'f' -> f
map c'a' -> a
map d'a' -> a
map e'a' -> b
map f'b' -> b
boundary 0 a' -> a
boundary 0 b' -> b
boundary 0 c' -> c
boundary 0 d' -> d
boundary 0 e' -> e
boundary 0 f' -> f
witness eventual h hinv lag 1
"""


@lru_cache(maxsize=None)
def graph_pair():
    env = parse_objects(E_GRAPH_TEXT + F_GRAPH_TEXT)
    return env["E"], env["F"]


def graph_e():
    return graph_pair()[0]


def graph_f():
    return graph_pair()[1]


@lru_cache(maxsize=None)
def example_witness():
    """The shipped lag-1 witness between the edge shifts of E and F."""
    env = parse_objects(E_GRAPH_TEXT + F_GRAPH_TEXT)
    _, witnesses = parse_witness_text(WITNESS_TEXT, env)
    witness = witnesses[0]
    assert isinstance(witness, EventualConjugacyWitness)
    return witness
