"""Learning an SDT from translation pairs plus translation queries.

The hypothesis keeps only edge outputs.  Accept sets are never stored: they
are recovered by parsing every data pair through the current edges, which
also records where each pair passes.  A pair that cannot be parsed, or a
state whose collected accept outputs are not an antichain, makes the
hypothesis inconsistent with the data.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .dataset import Dataset
from .oracle import Oracle
from .strings import (
    Alphabet,
    is_antichain,
    key_for,
    llex_min,
    prefixes,
    product,
)
from .transducer import Sdt, check

LAMBDA = frozenset({""})


class LearnerError(RuntimeError):
    pass


class FoldConflict(LearnerError):
    """A merge produced a machine that no longer accounts for the data."""


@dataclass(frozen=True)
class Visit:
    """A data pair passing a state after ``i`` input symbols with ``pos`` output symbols matched."""

    z: str
    out: str
    i: int
    pos: int


@dataclass
class Hypothesis:
    input_alphabet: Alphabet
    output_alphabet: Alphabet
    edges: dict[int, dict[str, tuple[int, frozenset]]]
    red: list[int] = field(default_factory=lambda: [0])
    root: int = 0
    accepts: dict[int, frozenset] = field(default_factory=dict)
    visits: dict[int, list[Visit]] = field(default_factory=dict)

    def copy(self) -> "Hypothesis":
        return Hypothesis(
            self.input_alphabet,
            self.output_alphabet,
            {q: dict(out) for q, out in self.edges.items()},
            list(self.red),
            self.root,
        )

    def parse(self, D: Dataset) -> bool:
        """Thread every pair of D through the edges; False if D is not accounted for."""
        accepts: dict[int, set] = {}
        visits: dict[int, list[Visit]] = {q: [] for q in self.edges}
        for z, out in D:
            q, pos = self.root, 0
            visits[q].append(Visit(z, out, 0, 0))
            for i, a in enumerate(z, 1):
                edge = self.edges[q].get(a)
                if edge is None:
                    return False
                q, outs = edge
                w = next((w for w in outs if out.startswith(w, pos)), None)
                if w is None:
                    return False
                pos += len(w)
                visits[q].append(Visit(z, out, i, pos))
            accepts.setdefault(q, set()).add(out[pos:])
        if not all(is_antichain(s) for s in accepts.values()):
            return False
        self.accepts = {q: frozenset(s) for q, s in accepts.items()}
        self.visits = visits
        return True

    def access(self) -> dict[int, str]:
        key = key_for(self.input_alphabet)
        found = {self.root: ""}
        layer = [self.root]
        while layer:
            nxt = []
            for q in sorted(layer, key=lambda s: key(found[s])):
                for a in self.input_alphabet:
                    edge = self.edges[q].get(a)
                    if edge is not None and edge[0] not in found:
                        found[edge[0]] = found[q] + a
                        nxt.append(edge[0])
            layer = nxt
        return found

    def least_prefix(self, x: str) -> str:
        """X_l: the llex-least output along the path of x, edge by edge."""
        key = key_for(self.output_alphabet)
        q, parts = self.root, []
        for a in x:
            q, outs = self.edges[q][a]
            parts.append(min(outs, key=key))
        return "".join(parts)

    def frontier(self) -> list[tuple[str, int, int, str]]:
        """Non-red children of red states as (access, parent, child, symbol), llex order."""
        access = self.access()
        red = set(self.red)
        found = []
        for r in self.red:
            for a, (t, _) in self.edges[r].items():
                if t not in red:
                    found.append((access[r] + a, r, t, a))
        key = key_for(self.input_alphabet)
        return sorted(found, key=lambda f: key(f[0]))

    def machine(self, only_red: bool = False) -> Sdt:
        access = self.access()
        keep = [q for q in access if not only_red or q in self.red]
        key = key_for(self.input_alphabet)
        keep.sort(key=lambda q: key(access[q]))
        name = {q: "q_" + (access[q] or "λ") for q in keep}
        trans = {
            (name[q], a): (name[t], outs)
            for q in keep
            for a, (t, outs) in self.edges[q].items()
            if t in name
        }
        accepts = {name[q]: self.accepts[q] for q in keep if q in self.accepts}
        return Sdt(
            self.input_alphabet, self.output_alphabet, tuple(name[q] for q in keep), name[self.root], trans, accepts
        )


def _alphabets(D: Dataset) -> tuple[Alphabet, Alphabet]:
    sigma = D.input_alphabet or Alphabet(("a",))
    omega = D.output_alphabet or Alphabet(("A",))
    return sigma, omega


def initial_hypothesis(D: Dataset) -> Hypothesis:
    if len(D) == 0:
        raise LearnerError("cannot learn from an empty dataset")
    sigma, omega = _alphabets(D)
    ids = {"": 0}
    edges: dict[int, dict] = {0: {}}
    for x in D.dom():
        for i in range(1, len(x) + 1):
            if x[:i] not in ids:
                ids[x[:i]] = len(ids)
                edges[ids[x[:i]]] = {}
                edges[ids[x[: i - 1]]][x[i - 1]] = (ids[x[:i]], LAMBDA)
    H = Hypothesis(sigma, omega, edges)
    if not H.parse(D):
        raise LearnerError("dataset outputs for one input are not pairwise incomparable")
    return H


def initial_transducer(D: Dataset) -> Sdt:
    """Prefix-tree transducer: lambda on every edge, each input's outputs on its #-transition."""
    return initial_hypothesis(D).machine()


# -- queries over data -------------------------------------------------------

def compare(x: str, Z: str, W: str, D: Dataset, o: Oracle) -> bool:
    """Swap the output prefixes Z and W in x's data and ask whether the results are translations."""
    if Z == W:
        return True
    for Y in sorted(D.outputs(x)):
        if Y.startswith(Z) and not o.query(x, W + Y[len(Z):]):
            return False
        if Y.startswith(W) and not o.query(x, Z + Y[len(W):]):
            return False
    return True


def _candidate_order(P: frozenset) -> tuple:
    return (len(P), sum(map(len, P)))


def vac_candidates(D: Dataset, x: str, X_l: str, o: Oracle) -> list[frozenset]:
    """Antichains of x's translations behind X_l that pass the swap test, ascending.

    One candidate per prefix of the llex-least translation; on every other
    branch the shortest prefix that swaps cleanly is taken.
    """
    okey = key_for(D.output_alphabet)
    T = {Y[len(X_l):] for Y in D.outputs(x) if Y.startswith(X_l)}
    if not T:
        raise LearnerError(f"no translation of {x!r} extends {X_l!r}")
    Z = min(T, key=okey)
    found = {LAMBDA}
    for Zh in prefixes(Z):
        chosen = {Zh}
        for R in sorted(T, key=okey):
            if R.startswith(Zh):
                continue
            for Rh in prefixes(R):
                if Zh.startswith(Rh):
                    continue
                if compare(x, X_l + Zh, X_l + Rh, D, o):
                    chosen.add(Rh)
                    break
            else:
                chosen = None
                break
        if chosen is not None and is_antichain(chosen):
            found.add(frozenset(chosen))
    return sorted(found, key=_candidate_order)


def test_vps(x: str, A: list[frozenset], D: Dataset, o: Oracle, X_l: str = "") -> frozenset:
    """The greatest candidate of A supported by every pair of D whose input extends x.

    Outputs are read behind ``X_l``; pairs whose output does not extend it
    are ignored.
    """
    visits = [
        Visit(z, out, len(x), len(X_l))
        for z, out in D
        if z.startswith(x) and out.startswith(X_l)
    ]
    return _test_visits(visits, A, o)


def _test_visits(visits: list[Visit], A: list[frozenset], o: Oracle) -> frozenset:
    """For a pair whose output past the state is W, some R in the candidate
    must prefix W, and replacing R by any other member must still give a
    translation.
    """
    for P in reversed(A):
        if P == LAMBDA:
            return P
        if all(_supports(v, P, o) for v in visits):
            return P
    return LAMBDA


def _supports(v: Visit, P: frozenset, o: Oracle) -> bool:
    X, rest = v.out[: v.pos], v.out[v.pos:]
    R = next((r for r in P if rest.startswith(r)), None)
    if R is None:
        return False
    tail = rest[len(R):]
    return all(o.query(v.z, X + Q + tail) for Q in sorted(P))


def onward(y: str, H: Hypothesis, D: Dataset, o: Oracle) -> Hypothesis:
    """Push the greatest supported antichain onto the edge entering the state reached by y."""
    access = H.access()
    by_access = {s: q for q, s in access.items()}
    q = by_access[y]
    parent = by_access[y[:-1]]
    visits = H.visits.get(q, [])
    if not visits:
        return H
    xhat = llex_min((v.z for v in visits), H.input_alphabet)
    X_l = H.least_prefix(y)
    P = _test_visits(visits, vac_candidates(D, xhat, X_l, o), o)
    if P == LAMBDA:
        return H
    G = H.copy()
    t, outs = G.edges[parent][y[-1]]
    G.edges[parent][y[-1]] = (t, product(outs, P))
    if not G.parse(D):
        raise LearnerError(f"onwarding {y!r} by {sorted(P)} lost data")
    return G


def future_agrees(x: str, y: str, H: Hypothesis, D: Dataset, o: Oracle) -> bool:
    """Whether every observed future of x, replayed after y, is a translation, and vice versa."""
    if x == y:
        return True
    by_access = {s: q for q, s in H.access().items()}
    qx, qy = by_access[x], by_access[y]
    X0, Y0 = H.least_prefix(x), H.least_prefix(y)
    for v in H.visits.get(qx, []):
        if not o.query(y + v.z[v.i:], Y0 + v.out[v.pos:]):
            return False
    for v in H.visits.get(qy, []):
        if not o.query(x + v.z[v.i:], X0 + v.out[v.pos:]):
            return False
    return True


def _fold(H: Hypothesis, s: int, t: int) -> None:
    """Graft the tree below t onto s; where s already has an edge the subtrees fold recursively."""
    for a, (c, outs) in list(H.edges[t].items()):
        mine = H.edges[s].get(a)
        if mine is None:
            H.edges[s][a] = (c, outs)
        else:
            _fold(H, mine[0], c)
    del H.edges[t]


def merge_states(x: str, y: str, H: Hypothesis, D: Dataset, o: Oracle) -> tuple[Hypothesis, bool]:
    """Redirect the edge into y's state onto x's state and fold y's subtree there."""
    if not future_agrees(x, y, H, D, o):
        return H, False
    by_access = {s: q for q, s in H.access().items()}
    qx, qy = by_access[x], by_access[y]
    parent = by_access[y[:-1]]
    G = H.copy()
    _, outs = G.edges[parent][y[-1]]
    G.edges[parent][y[-1]] = (qx, outs)
    _fold(G, qx, qy)
    if not G.parse(D):
        raise FoldConflict(f"merging {y!r} into {x!r} contradicts the data")
    return G, True


@dataclass
class LearnStep:
    access: str
    action: str
    target: str | None = None


def learn(D: Dataset, o: Oracle, trace: Callable[[LearnStep], None] | None = None) -> Sdt:
    """Onward each frontier state in llex order, merge it into the first agreeing red state or promote it."""
    H = initial_hypothesis(D)
    access = H.access()
    while True:
        front = H.frontier()
        if not front:
            break
        y, _, child, _ = front[0]
        H = onward(y, H, D, o)
        access = H.access()
        for r in H.red:
            H, merged = merge_states(access[r], y, H, D, o)
            if merged:
                if trace:
                    trace(LearnStep(y, "merge", access[r]))
                break
        else:
            H.red.append(child)
            if trace:
                trace(LearnStep(y, "promote"))
    return check(H.machine(only_red=True))
