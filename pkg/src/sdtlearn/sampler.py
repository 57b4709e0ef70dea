"""Characteristic samples: the N0, N1 and N2 data a learner needs to recover a machine.

All searches run on the canonical form of the target and pick llex-least
witnesses, so identical machines always yield identical samples.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from .dataset import Dataset, DatasetParseError, format_dataset, parse_dataset
from .equivalence import minimal_form
from .strings import (
    END_MARKER,
    ac_less,
    key_for,
    left_quotient,
    llex_min,
    llex_sorted,
    prefixes,
    residual,
    valid_antichains,
)
from .transducer import (
    Sdt,
    access_strings,
    contains_translation,
    futures,
    least_completion,
    least_path_output,
    path_output,
    translate,
)

__all__ = [
    "Dataset",
    "DatasetParseError",
    "SearchBoundExceeded",
    "characteristic_sample",
    "components",
    "default_bound",
    "format_dataset",
    "n0",
    "n1",
    "n2",
    "n2_star",
    "parse_dataset",
]


class SearchBoundExceeded(RuntimeError):
    pass


def default_bound(G: Sdt) -> int:
    return 2 * len(G.states) + G.max_output_length + 2


@dataclass
class _Ctx:
    """The canonical target together with the derived quantities every component uses."""

    G: Sdt
    bound: int
    Gc: Sdt = field(init=False)

    def __post_init__(self):
        self.Gc = minimal_form(self.G)
        self.okey = key_for(self.Gc.output_alphabet)
        self.ikey = key_for(self.Gc.input_alphabet)

    @cached_property
    def access(self) -> dict[str, str]:
        return access_strings(self.Gc)

    @cached_property
    def W(self) -> list[str]:
        """Minimal access strings and their one-symbol extensions inside the domain's prefix tree."""
        words = set(self.access.values())
        for x in list(words):
            for a in self.Gc.input_alphabet:
                if self.Gc.step(self.Gc.run(x), a) is not None:
                    words.add(x + a)
        return sorted(words, key=self.ikey)

    def hat(self, x: str) -> str:
        z = least_completion(self.Gc, x)
        assert z is not None, "canonical machines are trim"
        return z

    def parent_outputs(self, x: str) -> frozenset[str]:
        return path_output(self.Gc, x[:-1]) if x else frozenset({""})

    def suffixes(self, x: str) -> frozenset[str]:
        """P^-1 f(x^) with P the path output up to the parent of x."""
        return left_quotient(self.parent_outputs(x), translate(self.Gc, self.hat(x)))

    def completions(self, q: str, limit: int):
        """Accepted continuations from q of length at most ``limit``, llex order."""
        layer = [("", q)]
        for n in range(limit + 1):
            for w, s in layer:
                if s in self.Gc.accepts:
                    yield w
            if n == limit:
                return
            layer = [
                (w + a, e[0])
                for w, s in layer
                for a in self.Gc.input_alphabet
                if (e := self.Gc.step(s, a)) is not None
            ]

    def dataset(self, pairs) -> Dataset:
        return Dataset(pairs, self.G.input_alphabet, self.G.output_alphabet)


def _ctx(G: Sdt, bound: int | None) -> _Ctx:
    return _Ctx(G, default_bound(G) if bound is None else bound)


# -- N0 ----------------------------------------------------------------------

def _n0_pairs(c: _Ctx, x: str) -> set[tuple[str, str]]:
    xh = c.hat(x)
    P = c.parent_outputs(x)
    S = c.suffixes(x)
    X = llex_min(S, c.Gc.output_alphabet)
    Z = llex_min(P, c.Gc.output_alphabet)
    pairs = {(xh, Z + X)}
    vacs = valid_antichains(S, c.Gc.output_alphabet)
    pairs |= {(xh, Z + Y) for Y in _branch_cover(c, x, S, vacs)}
    members = set().union(*vacs)
    ordered = llex_sorted(S, c.Gc.output_alphabet)
    for X0 in prefixes(X, strict=True):
        if X0 in members:
            continue
        res0 = residual(S, X0)
        for Y in ordered:
            if any(residual(S, Yh) == res0 for Yh in prefixes(Y)):
                continue
            found = {(xh, Z + Y)}
            for Yh in prefixes(Y):
                resY = residual(S, Yh)
                candidates = [X0 + r for r in res0 if r not in resY]
                candidates += [Yh + s for s in resY if s not in res0]
                found.add((xh, Z + llex_min(candidates, c.Gc.output_alphabet)))
            pairs |= found
            break
    return pairs


def _branch_cover(c: _Ctx, x: str, S: frozenset, vacs: list[frozenset]) -> set[str]:
    """One llex-least suffix per member of the antichain pushed at x and of the next valid one.

    Without a translation on every branch the learner can assemble
    antichains that are not valid for x at all.
    """
    if not x:
        return set()
    pushed = c.Gc.step(c.Gc.run(x[:-1]), x[-1])[1]
    above = [V for V in vacs if ac_less(pushed, V)]
    cover = set()
    for V in [pushed] + above[:1]:
        for v in V:
            cover.add(llex_min((Y for Y in S if Y.startswith(v)), c.Gc.output_alphabet))
    return cover


def n0(G: Sdt, bound: int | None = None) -> Dataset:
    """Anchor pairs for every access string plus witnesses against spurious antichain members."""
    c = _ctx(G, bound)
    pairs: set = set()
    for x in c.W:
        pairs |= _n0_pairs(c, x)
    return c.dataset(pairs)


# -- N1 ----------------------------------------------------------------------

def _eliminates(c: _Ctx, z: str, out: str, P: frozenset, V: frozenset) -> bool:
    """Whether the pair <z, out> rules V out as the antichain to push at x."""
    X = next(p for p in P if out.startswith(p))
    rest = out[len(X):]
    R = next((r for r in V if rest.startswith(r)), None)
    if R is None:
        return True
    tail = rest[len(R):]
    return any(not contains_translation(c.Gc, z, X + Q + tail) for Q in V)


def _n1_pairs(c: _Ctx, x: str) -> set[tuple[str, str]]:
    if not x:
        return set()
    parent = c.Gc.run(x[:-1])
    q, pushed = c.Gc.step(parent, x[-1])
    P = c.parent_outputs(x)
    S = c.suffixes(x)
    pairs = set()
    for V in valid_antichains(S, c.Gc.output_alphabet):
        if not ac_less(pushed, V):
            continue
        hit = None
        for w in c.completions(q, c.bound):
            z = x + w
            for out in llex_sorted(translate(c.Gc, z), c.Gc.output_alphabet):
                if _eliminates(c, z, out, P, V):
                    hit = (z, out)
                    break
            if hit:
                break
        if hit is None:
            raise SearchBoundExceeded(
                f"no pair within depth {c.bound} rules out antichain {sorted(V)} at {x!r}"
            )
        pairs.add(hit)
    return pairs


def n1(G: Sdt, bound: int | None = None) -> Dataset:
    """One llex-least eliminating pair per over-eager antichain of each access string."""
    c = _ctx(G, bound)
    pairs: set = set()
    for x in c.W:
        pairs |= _n1_pairs(c, x)
    return c.dataset(pairs)


# -- N2 ----------------------------------------------------------------------

def _distinguish(c: _Ctx, x: str, y: str) -> tuple[str, str] | None:
    """llex-least pair through x or y whose output future the other state lacks."""
    Gc = c.Gc
    qx, qy = Gc.run(x), Gc.run(y)
    X0, Y0 = least_path_output(Gc, x), least_path_output(Gc, y)
    layer = [("", qx, qy)]
    empty = frozenset()
    for n in range(c.bound + 1):
        for w, p, r in layer:
            A = (futures(Gc, qx, w) or empty) if p is not None else empty
            B = (futures(Gc, qy, w) or empty) if r is not None else empty
            if A - B:
                return x + w, X0 + llex_min(A - B, Gc.output_alphabet)
            if B - A:
                return y + w, Y0 + llex_min(B - A, Gc.output_alphabet)
        if n == c.bound:
            break
        nxt = []
        for w, p, r in layer:
            for a in Gc.input_alphabet:
                e1 = Gc.step(p, a) if p is not None else None
                e2 = Gc.step(r, a) if r is not None else None
                if e1 or e2:
                    nxt.append((w + a, e1[0] if e1 else None, e2[0] if e2 else None))
        layer = nxt
    return None


def n2_star(G: Sdt, edge: tuple[str, str], bound: int | None = None, *, _c: _Ctx | None = None) -> Dataset:
    """One llex-least translation per output of ``edge`` = (state, symbol) of the canonical machine.

    The symbol ``#`` selects the state's #-transition.
    """
    c = _c or _ctx(G, bound)
    Gc = c.Gc
    src, sym = edge
    least = lambda s: llex_min(s, Gc.output_alphabet)
    if sym == END_MARKER:
        x = c.access[src]
        head = least_path_output(Gc, x)
        return c.dataset((x, head + o) for o in Gc.accepts[src])
    tgt, outs = Gc.transitions[edge]
    reach = c.access[src] + sym
    # llex-least accepted input whose path uses the edge: breadth first over (state, used) pairs
    start = (Gc.initial, False)
    seen = {start: ""}
    todo = deque([start])
    found = None
    while todo:
        node = todo.popleft()
        q, used = node
        if used and q in Gc.accepts:
            found = seen[node]
            break
        for a in Gc.input_alphabet:
            e = Gc.step(q, a)
            if e is None:
                continue
            nxt = (e[0], used or (q, a) == edge)
            if nxt not in seen:
                seen[nxt] = seen[node] + a
                todo.append(nxt)
    assert found is not None, f"edge {edge} unused by an accepted input ({reach})"
    steps = []
    q = Gc.initial
    for a in found:
        t, o = Gc.step(q, a)
        steps.append(((q, a), o))
        q = t
    first = next(i for i, (e, _) in enumerate(steps) if e == edge)
    head = "".join(least(o) for _, o in steps[:first])
    tail = "".join(least(o) for _, o in steps[first + 1:]) + least(Gc.accepts[q])
    return c.dataset((found, head + o + tail) for o in outs)


def n2(G: Sdt, bound: int | None = None) -> Dataset:
    """Distinguishing pairs between states plus full output coverage of every edge."""
    c = _ctx(G, bound)
    targets = llex_sorted(c.access.values(), c.Gc.input_alphabet)
    pairs: set = set()
    for x in c.W:
        for y in targets:
            if c.Gc.run(x) == c.Gc.run(y):
                continue
            hit = _distinguish(c, x, y)
            if hit is not None:
                pairs.add(hit)
    edges = sorted(c.Gc.transitions) + [(q, END_MARKER) for q in sorted(c.Gc.accepts)]
    for edge in edges:
        pairs |= n2_star(G, edge, _c=c).pairs
    return c.dataset(pairs)


def components(G: Sdt, bound: int | None = None) -> dict[str, Dataset]:
    return {"n0": n0(G, bound), "n1": n1(G, bound), "n2": n2(G, bound)}


def characteristic_sample(G: Sdt, bound: int | None = None) -> Dataset:
    parts = components(G, bound)
    return parts["n0"] | parts["n1"].pairs | parts["n2"].pairs
