import itertools
import re

import pytest
from hypothesis import strategies as st

from sdtlearn.strings import is_antichain, prefix_closure, product


def powers(text: str) -> frozenset[str]:
    """Expand ``a^3b,ba^2`` style exponent notation into plain strings."""
    out = set()
    for word in text.split(","):
        word = word.strip()
        out.add("".join(m.group(1) * int(m.group(2) or 1) for m in re.finditer(r"([a-zA-Z])(?:\^(\d+))?", word)))
    return frozenset(out)


S12 = powers("a^5,a^4b,a^2ba,a^2b^2,ba^4,ba^3b,baba,bab^2,b^2a^3,b^2a^2b,b^3a,b^4")
S12_VALID = [
    frozenset({""}),
    powers("a^2,ba,b^2"),
    powers("a^4,a^2b,ba^3,bab,b^2a^2,b^3"),
    S12,
]
S12_INVALID_MAXIMAL = powers("a^3,a^2b,ba^2,bab,b^2a,b^3")

S26 = powers(
    "a^5,a^4b,a^3ba^2,a^3bab,a^3b^2a,a^3b^3,aba^2,abab,ab^2a^2,ab^2ab,ab^3a,ab^4,ba^4,"
    "ba^3b,ba^2ba^2,ba^2bab,ba^2b^2a,ba^2b^3,b^2a^2,b^2ab,b^3a^2,b^3ab,b^4a^2,b^4ab,b^5a,b^6"
)
S26_FACTORS = [powers("a,b"), powers("a^2,b"), powers("a,ab,b^2"), powers("a,b")]
S26_SUFFIXES_1 = powers("a^4,a^3b,a^2ba^2,a^2bab,a^2b^2a,a^2b^3,ba^2,bab,b^2a^2,b^2ab,b^3a,b^4")
S26_SUFFIXES_2 = powers("a^2,ab,ba^2,bab,b^2a,b^3")
# The nearest set consistent with both displayed suffix sets.
S26_FIXED_FACTORS = [powers("a,b"), powers("a^2,b"), powers("a,ba,b^2"), powers("a,b")]


def tree_cuts(tree: frozenset[str], node: str = "") -> list[frozenset[str]]:
    """Every maximal antichain of the tree below ``node``: the node itself, or a cut through each child."""
    kids = [x for x in tree if len(x) == len(node) + 1 and x.startswith(node)]
    found = [frozenset({node})]
    if kids:
        for combo in itertools.product(*(tree_cuts(tree, k) for k in kids)):
            found.append(frozenset().union(*combo))
    return found


def brute_valid_antichains(S) -> set[frozenset[str]]:
    tree = prefix_closure(S)
    below = lambda p: frozenset(t[len(p):] for t in tree if t.startswith(p))
    return {P for P in tree_cuts(tree) if len({below(p) for p in P}) == 1}


def product_translations(G, x):
    """f(x) by expanding every output set along the path; the semantic oracle for greedy matching."""
    q, outs = G.initial, frozenset({""})
    for a in x:
        edge = G.step(q, a)
        if edge is None:
            return None
        q, o = edge
        outs = frozenset(u + v for u in outs for v in o)
    if q not in G.accepts:
        return None
    return frozenset(u + v for u in outs for v in G.accepts[q])


def words(alphabet: str, max_len: int):
    return st.text(alphabet=alphabet, max_size=max_len)


def string_sets(alphabet: str = "ab", max_len: int = 5, max_size: int = 8):
    return st.frozensets(words(alphabet, max_len), min_size=1, max_size=max_size)


@st.composite
def antichains(draw, alphabet: str = "ab", max_len: int = 5, max_size: int = 8):
    """Prefix-free sets: keep the drawn strings that no other drawn string extends."""
    S = draw(string_sets(alphabet, max_len, max_size))
    leaves = frozenset(s for s in S if not any(t != s and t.startswith(s) for t in S))
    assert is_antichain(leaves)
    return leaves


@pytest.fixture
def s12():
    return S12


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
