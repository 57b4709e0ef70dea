"""Strings, prefix orders and the antichain algebra on finite string sets.

Strings are plain ``str`` values whose characters are alphabet symbols; the
empty string plays the role of lambda.  String sets are ``frozenset[str]``.
"""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

END_MARKER = "#"
LAMBDA_TOKEN = "-"
_RESERVED = frozenset({END_MARKER, LAMBDA_TOKEN, ",", " ", "\t", "\n", "\r"})

StringSet = frozenset


class AlphabetError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of single-character symbols.

    The declaration order is the base order for lexicographic comparison.
    """

    symbols: tuple[str, ...]
    _rank: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if not symbols:
            raise AlphabetError("alphabet must not be empty")
        if len(set(symbols)) != len(symbols):
            raise AlphabetError(f"duplicate symbols in alphabet {symbols!r}")
        if len(symbols) > 255:
            raise AlphabetError("alphabets are limited to 255 symbols")
        for s in symbols:
            if len(s) != 1:
                raise AlphabetError(f"symbol {s!r} is not a single character")
            if s in _RESERVED:
                raise AlphabetError(f"symbol {s!r} is reserved")
        object.__setattr__(self, "_rank", {s: i for i, s in enumerate(symbols)})

    @classmethod
    def of(cls, symbols: Iterable[str]) -> "Alphabet":
        return cls(tuple(symbols))

    @classmethod
    def infer(cls, strings: Iterable[str]) -> "Alphabet | None":
        """Alphabet of all characters occurring in ``strings`` (code-point order)."""
        chars = sorted({c for s in strings for c in s})
        return cls(tuple(chars)) if chars else None

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._rank

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return " ".join(self.symbols)

    def check(self, x: str) -> str:
        for c in x:
            if c not in self._rank:
                raise AlphabetError(f"{x!r} uses symbol {c!r} outside alphabet {self}")
        return x

    def union(self, other: "Alphabet") -> "Alphabet":
        return Alphabet(self.symbols + tuple(s for s in other.symbols if s not in self))

    def key(self, x: str) -> tuple:
        """Sort key realising the llex order over this alphabet."""
        return (len(x), tuple(self._rank[c] for c in x))

    def lex_key(self, x: str) -> tuple:
        return tuple(self._rank[c] for c in x)


def llex_key(x: str, alphabet: Alphabet | None = None) -> tuple:
    if alphabet is None:
        return (len(x), x)
    return alphabet.key(x)


def key_for(alphabet: Alphabet | None) -> Callable[[str], tuple]:
    return alphabet.key if alphabet is not None else (lambda x: (len(x), x))


def llex_sorted(strings: Iterable[str], alphabet: Alphabet | None = None) -> list[str]:
    return sorted(strings, key=key_for(alphabet))


def llex_min(strings: Iterable[str], alphabet: Alphabet | None = None) -> str:
    return min(strings, key=key_for(alphabet))


def _check_pair(x: str, y: str, alphabet: Alphabet | None) -> None:
    if alphabet is not None:
        alphabet.check(x)
        alphabet.check(y)


class PrefixRel(enum.Enum):
    EQUAL = "equal"
    PREFIX = "strict-prefix"
    EXTENSION = "strict-extension"
    INCOMPARABLE = "incomparable"

    @property
    def comparable(self) -> bool:
        return self is not PrefixRel.INCOMPARABLE


def prefix_rel(x: str, y: str, alphabet: Alphabet | None = None) -> PrefixRel:
    _check_pair(x, y, alphabet)
    if x == y:
        return PrefixRel.EQUAL
    if y.startswith(x):
        return PrefixRel.PREFIX
    if x.startswith(y):
        return PrefixRel.EXTENSION
    return PrefixRel.INCOMPARABLE


def is_prefix(x: str, y: str) -> bool:
    """x is a (not necessarily strict) prefix of y."""
    return y.startswith(x)


def comparable(x: str, y: str) -> bool:
    return x.startswith(y) or y.startswith(x)


def llex_cmp(x: str, y: str, alphabet: Alphabet | None = None) -> int:
    """Negative, zero or positive as x is llex-less, equal or greater than y."""
    _check_pair(x, y, alphabet)
    kx, ky = llex_key(x, alphabet), llex_key(y, alphabet)
    return (kx > ky) - (kx < ky)


def prefixes(x: str, *, strict: bool = False) -> list[str]:
    """All prefixes of x in order of increasing length."""
    stop = len(x) if strict else len(x) + 1
    return [x[:i] for i in range(stop)]


def prefix_closure(strings: Iterable[str]) -> frozenset[str]:
    """T[S]: every prefix of every member."""
    out = set()
    for s in strings:
        for i in range(len(s) + 1):
            out.add(s[:i])
    return frozenset(out)


def residual(strings: Iterable[str], x: str) -> frozenset[str]:
    """{z : xz in S}, the residual of S behind the single string x."""
    n = len(x)
    return frozenset(s[n:] for s in strings if s.startswith(x))


def is_antichain(strings: Iterable[str]) -> bool:
    ordered = sorted(strings)
    # in code-point order a prefix sorts immediately before some extension of it
    return all(not ordered[i + 1].startswith(ordered[i]) for i in range(len(ordered) - 1))


def product(P: Iterable[str], S: Iterable[str]) -> frozenset[str]:
    S = tuple(S)
    return frozenset(x + y for x in P for y in S)


def product_all(factors: Sequence[Iterable[str]]) -> frozenset[str]:
    return functools.reduce(product, factors, frozenset({""}))


def left_quotient(P: Iterable[str], S: Iterable[str]) -> frozenset[str]:
    S = tuple(S)
    return frozenset(s[len(x):] for x in P for s in S if s.startswith(x))


def _nonempty(S: Iterable[str], what: str) -> frozenset[str]:
    S = frozenset(S)
    if not S:
        raise ValueError(f"{what} must be a non-empty string set")
    return S


def is_maximal_antichain(P: Iterable[str], S: Iterable[str]) -> bool:
    P, S = frozenset(P), frozenset(S)
    if not P or not S:
        return False
    tree = prefix_closure(S)
    if not P <= tree or not is_antichain(P):
        return False
    return all(any(comparable(p, s) for p in P) for s in S)


def subtree(S: Iterable[str], x: str) -> frozenset[str]:
    """T[S]_x: the part of the prefix tree of S hanging below x, re-rooted at x."""
    return residual(prefix_closure(S), x)


def is_valid_antichain(P: Iterable[str], S: Iterable[str]) -> bool:
    P, S = frozenset(P), frozenset(S)
    if not is_maximal_antichain(P, S):
        return False
    tree = prefix_closure(S)
    return len({residual(tree, p) for p in P}) == 1


def ac_less(P: Iterable[str], Q: Iterable[str]) -> bool:
    P, Q = frozenset(P), frozenset(Q)
    if len(P) != len(Q):
        return len(P) < len(Q)
    return all(y.startswith(x) and x != y for x in P for y in Q if comparable(x, y))


def ac_cmp(P: frozenset[str], Q: frozenset[str]) -> int:
    if P == Q:
        return 0
    if ac_less(P, Q):
        return -1
    if ac_less(Q, P):
        return 1
    raise ValueError(f"antichains {sorted(P)} and {sorted(Q)} are not ac-comparable")


def ac_sorted(antichains: Iterable[frozenset[str]]) -> list[frozenset[str]]:
    return sorted(antichains, key=functools.cmp_to_key(ac_cmp))


def _subtree_shapes(tree: frozenset[str]) -> dict[str, int]:
    """Intern every node's subtree shape so equal subtrees share an id."""
    children: dict[str, list[str]] = {x: [] for x in tree}
    for x in tree:
        if x:
            children[x[:-1]].append(x)
    ids: dict[tuple, int] = {}
    shape: dict[str, int] = {}
    for x in sorted(tree, key=len, reverse=True):
        sig = tuple(sorted((c[-1], shape[c]) for c in children[x]))
        shape[x] = ids.setdefault(sig, len(ids))
    return shape


def valid_antichains(S: Iterable[str], alphabet: Alphabet | None = None) -> list[frozenset[str]]:
    """All valid antichains of S in ascending ``<_ac`` order.

    A maximal antichain meets every leaf of T[S] in exactly one prefix, so
    each prefix of the llex-least leaf yields at most one candidate: the
    nodes whose subtree has the same shape as that prefix's.  Nodes with
    equal subtrees are pairwise incomparable because the tree is finite.
    """
    S = _nonempty(S, "S")
    tree = prefix_closure(S)
    shape = _subtree_shapes(tree)
    by_shape: dict[int, list[str]] = {}
    for node, sid in shape.items():
        by_shape.setdefault(sid, []).append(node)
    inner = {x[:-1] for x in tree if x}
    leaf = llex_min((x for x in tree if x not in inner), alphabet)
    found = []
    for p in prefixes(leaf):
        members = frozenset(by_shape[shape[p]])
        if all(any(s.startswith(m) or m.startswith(s) for m in members) for s in S):
            found.append(members)
    return ac_sorted(found)


def maximal_factorization(S: Iterable[str], alphabet: Alphabet | None = None) -> list[frozenset[str]]:
    """Unique maximal factorization of S into factors with only trivial valid antichains."""
    current = _nonempty(S, "S")
    factors: list[frozenset[str]] = []
    while True:
        vacs = valid_antichains(current, alphabet)
        if len(vacs) == 1:
            # current == {lambda}
            if not factors:
                factors.append(frozenset({""}))
            return factors
        factor = vacs[1]
        factors.append(factor)
        if factor == current:
            return factors
        current = left_quotient(factor, current)


def parse_string_set(text: str, alphabet: Alphabet | None = None) -> frozenset[str]:
    """Parse ``-,a,ab`` style literals; ``-`` is the empty string."""
    text = text.strip()
    if not text:
        raise ValueError("empty string-set literal")
    out = set()
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise ValueError(f"empty member in string-set literal {text!r}")
        word = "" if token == LAMBDA_TOKEN else token
        if alphabet is not None:
            alphabet.check(word)
        out.add(word)
    return frozenset(out)


def format_string(x: str) -> str:
    return x if x else LAMBDA_TOKEN


def format_string_set(S: Iterable[str], alphabet: Alphabet | None = None) -> str:
    return ",".join(format_string(x) for x in llex_sorted(S, alphabet))
