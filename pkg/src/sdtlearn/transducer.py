"""Semi-deterministic transducers: representation, semantics, text I/O and DOT export."""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .strings import (
    END_MARKER,
    LAMBDA_TOKEN,
    Alphabet,
    AlphabetError,
    format_string,
    format_string_set,
    is_antichain,
    key_for,
    llex_min,
    llex_sorted,
    product,
)

DEFAULT_PAIR_CAP = 100_000


class SdtError(ValueError):
    pass


class SdtParseError(SdtError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class PairCapExceeded(RuntimeError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"enumeration exceeded the cap of {cap} pairs")


Edge = tuple[str, frozenset]


@dataclass(frozen=True, eq=False)
class Sdt:
    """A semi-deterministic transducer.

    ``transitions`` maps ``(state, symbol)`` to ``(target, outputs)``;
    ``accepts`` maps accepting states to the outputs of their #-transition,
    which always returns to ``initial``.
    """

    input_alphabet: Alphabet
    output_alphabet: Alphabet
    states: tuple[str, ...]
    initial: str
    transitions: Mapping[tuple[str, str], Edge]
    accepts: Mapping[str, frozenset]
    _out: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(
            self, "transitions",
            {k: (t, frozenset(o)) for k, (t, o) in self.transitions.items()},
        )
        object.__setattr__(self, "accepts", {q: frozenset(o) for q, o in self.accepts.items()})
        out: dict[str, dict[str, Edge]] = {q: {} for q in self.states}
        for (q, a), edge in self.transitions.items():
            out.setdefault(q, {})[a] = edge
        object.__setattr__(self, "_out", out)

    def __eq__(self, other):
        if not isinstance(other, Sdt):
            return NotImplemented
        return (
            self.input_alphabet == other.input_alphabet
            and self.output_alphabet == other.output_alphabet
            and self.states == other.states
            and self.initial == other.initial
            and self.transitions == other.transitions
            and self.accepts == other.accepts
        )

    def __hash__(self):
        return hash((self.states, self.initial, frozenset(self.transitions.items())))

    def out_edges(self, q: str) -> dict[str, Edge]:
        return self._out.get(q, {})

    def step(self, q: str, a: str) -> Edge | None:
        return self._out.get(q, {}).get(a)

    def run(self, x: str, start: str | None = None) -> str | None:
        """State reached from ``start`` (default initial) on x, or None."""
        q = self.initial if start is None else start
        for a in x:
            edge = self.step(q, a)
            if edge is None:
                return None
            q = edge[0]
        return q

    @property
    def edges(self) -> list[tuple[str, str, str, frozenset]]:
        return [(q, a, t, o) for (q, a), (t, o) in sorted(self.transitions.items())]

    @property
    def max_output_length(self) -> int:
        sets = [o for _, o in self.transitions.values()] + list(self.accepts.values())
        return max((len(w) for s in sets for w in s), default=0)

    def size(self) -> int:
        """States plus edges plus total output symbols."""
        total = sum(len(w) for _, o in self.transitions.values() for w in o)
        total += sum(len(w) for o in self.accepts.values() for w in o)
        return len(self.states) + len(self.transitions) + len(self.accepts) + total

    def relabel(self, mapping: Mapping[str, str]) -> "Sdt":
        return Sdt(
            self.input_alphabet,
            self.output_alphabet,
            tuple(mapping[q] for q in self.states),
            mapping[self.initial],
            {(mapping[q], a): (mapping[t], o) for (q, a), (t, o) in self.transitions.items()},
            {mapping[q]: o for q, o in self.accepts.items()},
        )


def validate(G: Sdt) -> list[str]:
    """Invariant violations of G; an empty list means G is a valid trim SDT."""
    problems = []
    states = set(G.states)
    if len(states) != len(G.states):
        problems.append("duplicate state ids")
    if G.initial not in states:
        problems.append(f"initial state {G.initial} is not a state")
    for (q, a), (t, outs) in G.transitions.items():
        where = f"transition {q} --{a}--> {t}"
        if q not in states or t not in states:
            problems.append(f"{where}: unknown state")
        if a not in G.input_alphabet:
            problems.append(f"{where}: symbol {a!r} outside input alphabet")
        problems.extend(_output_problems(where, outs, G.output_alphabet))
    for q, outs in G.accepts.items():
        where = f"#-transition at {q}"
        if q not in states:
            problems.append(f"{where}: unknown state")
        problems.extend(_output_problems(where, outs, G.output_alphabet))
    if problems:
        return problems
    reach = _reachable(G)
    coreach = _coreachable(G)
    for q in G.states:
        if q not in reach:
            problems.append(f"state {q} is unreachable from {G.initial}")
        if q not in coreach:
            problems.append(f"state {q} cannot reach an accepting state")
    return problems


def _output_problems(where: str, outs: frozenset, alphabet: Alphabet) -> list[str]:
    problems = []
    if not outs:
        problems.append(f"{where}: empty output set")
    for w in outs:
        try:
            alphabet.check(w)
        except AlphabetError as e:
            problems.append(f"{where}: {e}")
    if not is_antichain(outs):
        problems.append(f"{where}: comparable outputs in {{{format_string_set(outs)}}}")
    return problems


def _reachable(G: Sdt) -> set[str]:
    seen = {G.initial}
    todo = [G.initial]
    while todo:
        q = todo.pop()
        for t, _ in G.out_edges(q).values():
            if t not in seen:
                seen.add(t)
                todo.append(t)
    return seen


def _coreachable(G: Sdt) -> set[str]:
    back: dict[str, set[str]] = {}
    for (q, _), (t, _) in G.transitions.items():
        back.setdefault(t, set()).add(q)
    seen = set(G.accepts)
    todo = list(seen)
    while todo:
        t = todo.pop()
        for q in back.get(t, ()):
            if q not in seen:
                seen.add(q)
                todo.append(q)
    return seen


def check(G: Sdt) -> Sdt:
    problems = validate(G)
    if problems:
        raise SdtError("; ".join(problems))
    return G


def trim(G: Sdt) -> Sdt:
    """Drop unreachable and non-co-reachable states."""
    keep = _reachable(G) & _coreachable(G)
    if G.initial not in keep:
        keep.add(G.initial)
    return Sdt(
        G.input_alphabet,
        G.output_alphabet,
        tuple(q for q in G.states if q in keep),
        G.initial,
        {k: v for k, v in G.transitions.items() if k[0] in keep and v[0] in keep},
        {q: o for q, o in G.accepts.items() if q in keep},
    )


# -- semantics ---------------------------------------------------------------

PathStep = tuple[str, str]  # (source state, symbol); symbol "#" for the #-transition


def path_of(G: Sdt, x: str) -> tuple[PathStep, ...] | None:
    q = G.initial
    steps = []
    for a in x:
        edge = G.step(q, a)
        if edge is None:
            return None
        steps.append((q, a))
        q = edge[0]
    if q in G.accepts:
        steps.append((q, END_MARKER))
    return tuple(steps)


def _edge_outputs(G: Sdt, x: str) -> tuple[list[frozenset], str] | None:
    q = G.initial
    outs = []
    for a in x:
        edge = G.step(q, a)
        if edge is None:
            return None
        q, o = edge
        outs.append(o)
    return outs, q


def path_output(G: Sdt, x: str) -> frozenset[str]:
    walked = _edge_outputs(G, x)
    if walked is None:
        raise SdtError(f"no path for input {format_string(x)!r}")
    result = frozenset({""})
    for o in walked[0]:
        result = product(result, o)
    return result


def least_path_output(G: Sdt, x: str) -> str:
    """llex-least member of path_output(G, x), found edge by edge."""
    walked = _edge_outputs(G, x)
    if walked is None:
        raise SdtError(f"no path for input {format_string(x)!r}")
    key = key_for(G.output_alphabet)
    return "".join(min(o, key=key) for o in walked[0])


def translate(G: Sdt, x: str) -> frozenset[str] | None:
    walked = _edge_outputs(G, x)
    if walked is None or walked[1] not in G.accepts:
        return None
    result = frozenset({""})
    for o in walked[0]:
        result = product(result, o)
    return product(result, G.accepts[walked[1]])


def futures(G: Sdt, q: str, w: str) -> frozenset[str] | None:
    """Outputs produced from state q on input w, #-transition included."""
    outs = frozenset({""})
    for a in w:
        edge = G.step(q, a)
        if edge is None:
            return None
        q, o = edge
        outs = product(outs, o)
    if q not in G.accepts:
        return None
    return product(outs, G.accepts[q])


def _match(outs: frozenset, y: str, pos: int) -> int:
    for w in outs:
        if y.startswith(w, pos):
            return pos + len(w)
    return -1


def contains_translation(G: Sdt, x: str, y: str) -> bool:
    """Whether y is in translate(G, x), by greedy prefix-code matching."""
    q = G.initial
    pos = 0
    for a in x:
        edge = G.step(q, a)
        if edge is None:
            return False
        q, o = edge
        pos = _match(o, y, pos)
        if pos < 0:
            return False
    if q not in G.accepts:
        return False
    for w in G.accepts[q]:
        if len(w) == len(y) - pos and y.startswith(w, pos):
            return True
    return False


def in_domain(G: Sdt, x: str) -> bool:
    q = G.run(x)
    return q is not None and q in G.accepts


def _llex_least_word(G: Sdt, start: str, goals: set[str]) -> str | None:
    """llex-least input leading from ``start`` into ``goals``."""
    back: dict[str, list[str]] = {}
    for (q, _), (t, _) in G.transitions.items():
        back.setdefault(t, []).append(q)
    dist = {g: 0 for g in goals}
    todo = deque(goals)
    while todo:
        t = todo.popleft()
        for q in back.get(t, ()):
            if q not in dist:
                dist[q] = dist[t] + 1
                todo.append(q)
    if start not in dist:
        return None
    word = []
    q = start
    while dist[q] > 0:
        for a in G.input_alphabet:
            edge = G.step(q, a)
            if edge is not None and dist.get(edge[0]) == dist[q] - 1:
                word.append(a)
                q = edge[0]
                break
    return "".join(word)


def least_completion(G: Sdt, x: str) -> str | None:
    """The llex-least accepted extension of x."""
    q = G.run(x)
    if q is None:
        return None
    w = _llex_least_word(G, q, set(G.accepts))
    return None if w is None else x + w


def access_strings(G: Sdt) -> dict[str, str]:
    """llex-least input reaching each reachable state."""
    key = key_for(G.input_alphabet)
    found = {G.initial: ""}
    frontier = [G.initial]
    # breadth first with symbols in alphabet order gives llex-least access strings
    while frontier:
        nxt = []
        for q in sorted(frontier, key=lambda s: key(found[s])):
            for a in G.input_alphabet:
                edge = G.step(q, a)
                if edge is not None and edge[0] not in found:
                    found[edge[0]] = found[q] + a
                    nxt.append(edge[0])
        frontier = nxt
    return found


def iter_domain(G: Sdt, max_len: int) -> Iterator[str]:
    """Accepted inputs of length at most max_len in llex order."""
    layer = [("", G.initial)]
    for n in range(max_len + 1):
        for x, q in layer:
            if q in G.accepts:
                yield x
        if n == max_len:
            break
        layer = [
            (x + a, edge[0])
            for x, q in layer
            for a in G.input_alphabet
            if (edge := G.step(q, a)) is not None
        ]


def enumerate_pairs(G: Sdt, max_input_len: int, cap: int = DEFAULT_PAIR_CAP):
    """All translation pairs with inputs of length at most max_input_len."""
    from .dataset import Dataset

    if max_input_len < 0:
        raise ValueError("max_input_len must be non-negative")
    pairs = []
    for x in iter_domain(G, max_input_len):
        outs = translate(G, x)
        if len(pairs) + len(outs) > cap:
            raise PairCapExceeded(cap)
        pairs.extend((x, y) for y in outs)
    return Dataset(pairs, G.input_alphabet, G.output_alphabet)


# -- random machines ---------------------------------------------------------

def _random_output_set(rng: random.Random, alpha: Alphabet, max_len: int, max_size: int) -> frozenset:
    size = rng.randint(1, max(1, max_size))
    chosen: set[str] = set()
    for _ in range(8 * size):
        if len(chosen) == size:
            break
        n = rng.randint(0, max_len)
        w = "".join(rng.choice(alpha.symbols) for _ in range(n))
        if is_antichain(chosen | {w}):
            chosen.add(w)
    return frozenset(chosen) if chosen else frozenset({""})


def random_sdt(
    n_states: int,
    input_alpha: Alphabet,
    output_alpha: Alphabet,
    max_out_len: int = 2,
    max_out_set: int = 2,
    seed: int = 0,
    *,
    edge_prob: float = 0.6,
    accept_prob: float = 0.4,
    max_tries: int = 1000,
) -> Sdt:
    if n_states < 1:
        raise ValueError("n_states must be at least 1")
    rng = random.Random(seed)
    names = [f"q{i}" for i in range(n_states)]
    for _ in range(max_tries):
        trans: dict[tuple[str, str], Edge] = {}
        # spanning tree: each later state hangs off an earlier one with a free slot
        ok = True
        for i in range(1, n_states):
            slots = [(names[j], a) for j in range(i) for a in input_alpha if (names[j], a) not in trans]
            if not slots:
                ok = False
                break
            src = rng.choice(slots)
            trans[src] = (names[i], _random_output_set(rng, output_alpha, max_out_len, max_out_set))
        if not ok:
            continue
        for q in names:
            for a in input_alpha:
                if (q, a) not in trans and rng.random() < edge_prob:
                    trans[(q, a)] = (rng.choice(names), _random_output_set(rng, output_alpha, max_out_len, max_out_set))
        accepts = {
            q: _random_output_set(rng, output_alpha, max_out_len, max_out_set)
            for q in names
            if rng.random() < accept_prob
        }
        if not accepts:
            accepts[rng.choice(names)] = _random_output_set(rng, output_alpha, max_out_len, max_out_set)
        G = Sdt(input_alpha, output_alpha, tuple(names), names[0], trans, accepts)
        if not validate(G):
            return G
    raise SdtError(f"no valid trim machine found in {max_tries} tries")


# -- text format -------------------------------------------------------------

def _parse_outputs(token: str, line: int) -> frozenset[str]:
    words = token.split(",")
    if any(w == "" for w in words):
        raise SdtParseError(f"malformed output set {token!r}", line)
    out = frozenset("" if w == LAMBDA_TOKEN else w for w in words)
    if len(out) != len(words):
        raise SdtParseError(f"duplicate outputs in {token!r}", line)
    if not is_antichain(out):
        raise SdtParseError(f"comparable output strings in {token!r}", line)
    return out


def parse_sdt(text: str) -> Sdt:
    """Parse the line-oriented SDT text format; the result is validated."""
    inalpha = outalpha = initial = None
    states: list[str] | None = None
    trans: dict[tuple[str, str], Edge] = {}
    accepts: dict[str, frozenset] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, *args = line.split()
        try:
            if head == "inalpha":
                inalpha = Alphabet(tuple(args))
            elif head == "outalpha":
                outalpha = Alphabet(tuple(args))
            elif head == "states":
                if not args:
                    raise SdtParseError("no states listed", lineno)
                states = args
            elif head == "initial":
                if len(args) != 1:
                    raise SdtParseError("initial takes one state", lineno)
                initial = args[0]
            elif head == "trans":
                if len(args) != 4:
                    raise SdtParseError("trans takes: source symbol target outputs", lineno)
                src, sym, dst, outs = args
                if (src, sym) in trans:
                    raise SdtParseError(f"duplicate transition for ({src}, {sym})", lineno)
                trans[(src, sym)] = (dst, _parse_outputs(outs, lineno))
            elif head == "accept":
                if len(args) != 2:
                    raise SdtParseError("accept takes: state outputs", lineno)
                if args[0] in accepts:
                    raise SdtParseError(f"duplicate accept for {args[0]}", lineno)
                accepts[args[0]] = _parse_outputs(args[1], lineno)
            else:
                raise SdtParseError(f"unknown directive {head!r}", lineno)
        except AlphabetError as e:
            raise SdtParseError(str(e), lineno) from e
    for name, value in [("inalpha", inalpha), ("outalpha", outalpha), ("states", states), ("initial", initial)]:
        if value is None:
            raise SdtParseError(f"missing {name} directive")
    G = Sdt(inalpha, outalpha, tuple(states), initial, trans, accepts)
    problems = validate(G)
    if problems:
        raise SdtParseError("; ".join(problems))
    return G


def format_sdt(G: Sdt) -> str:
    okey = key_for(G.output_alphabet)
    fmt = lambda outs: ",".join(format_string(w) for w in sorted(outs, key=okey))
    lines = [
        f"inalpha {G.input_alphabet}",
        f"outalpha {G.output_alphabet}",
        f"states {' '.join(G.states)}",
        f"initial {G.initial}",
    ]
    order = {q: i for i, q in enumerate(G.states)}
    ikey = key_for(G.input_alphabet)
    for (q, a) in sorted(G.transitions, key=lambda k: (order[k[0]], ikey(k[1]))):
        t, outs = G.transitions[(q, a)]
        lines.append(f"trans {q} {a} {t} {fmt(outs)}")
    for q in sorted(G.accepts, key=order.__getitem__):
        lines.append(f"accept {q} {fmt(G.accepts[q])}")
    return "\n".join(lines) + "\n"


# -- DOT ---------------------------------------------------------------------

def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _show(outs: Iterable[str], alphabet: Alphabet) -> str:
    return ",".join(w if w else "λ" for w in llex_sorted(outs, alphabet))


def to_dot(G: Sdt, name: str = "sdt") -> str:
    """DOT digraph; accepting states get a double border labelled with their #-outputs."""
    lines = [f"digraph {_dot_quote(name)} {{", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for q in G.states:
        if q in G.accepts:
            label = f"{q}\n# : {_show(G.accepts[q], G.output_alphabet)}"
            lines.append(f"  {_dot_quote(q)} [shape=doublecircle, label={_dot_quote(label)}];")
        else:
            lines.append(f"  {_dot_quote(q)} [shape=circle];")
    lines.append(f"  __start -> {_dot_quote(G.initial)};")
    ikey = key_for(G.input_alphabet)
    for (q, a) in sorted(G.transitions, key=lambda k: (k[0], ikey(k[1]))):
        t, outs = G.transitions[(q, a)]
        label = f"{a} : {_show(outs, G.output_alphabet)}"
        lines.append(f"  {_dot_quote(q)} -> {_dot_quote(t)} [label={_dot_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
