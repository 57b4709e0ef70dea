"""Isomorphism, bounded equivalence and canonical forms of SDTs."""
from __future__ import annotations

from dataclasses import dataclass

from .strings import (
    ac_sorted,
    key_for,
    left_quotient,
    maximal_factorization,
    product,
    valid_antichains,
)
from .transducer import (
    DEFAULT_PAIR_CAP,
    PairCapExceeded,
    Sdt,
    access_strings,
    enumerate_pairs,
    trim,
)

LAMBDA = frozenset({""})


def isomorphic(G1: Sdt, G2: Sdt) -> bool:
    """Whether the lock-step pairing from the initial states is an output-preserving bijection."""
    fwd = {G1.initial: G2.initial}
    back = {G2.initial: G1.initial}
    todo = [G1.initial]
    symbols = set(G1.input_alphabet) | set(G2.input_alphabet)
    while todo:
        p = todo.pop()
        q = fwd[p]
        if G1.accepts.get(p) != G2.accepts.get(q):
            return False
        for a in symbols:
            e1, e2 = G1.step(p, a), G2.step(q, a)
            if e1 is None or e2 is None:
                if e1 is not e2:
                    return False
                continue
            (t1, o1), (t2, o2) = e1, e2
            if o1 != o2:
                return False
            if t1 in fwd or t2 in back:
                if fwd.get(t1) != t2 or back.get(t2) != t1:
                    return False
                continue
            fwd[t1], back[t2] = t2, t1
            todo.append(t1)
    return len(fwd) == len(G1.states) and len(back) == len(G2.states)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a bounded comparison; falsy when a counterexample was found."""

    equivalent: bool
    depth: int
    counterexample: str | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def default_depth(G1: Sdt, G2: Sdt) -> int:
    return len(G1.states) + len(G2.states) + max(G1.max_output_length, G2.max_output_length) + 2


def bounded_equiv(G1: Sdt, G2: Sdt, n: int | None = None, cap: int = DEFAULT_PAIR_CAP) -> Verdict:
    """Compare domains and translations on all inputs of length at most n.

    Inputs are visited in llex order, so the reported counterexample is the
    llex-least one.  Finite prefix codes form a free monoid under ``*``, so
    output sets are tracked as sequences of irreducible factors instead of
    being expanded; a mismatch is confirmed on the expanded sets (bounded
    by ``cap``) before it is reported.
    """
    if n is None:
        n = default_depth(G1, G2)
    symbols = list(G1.input_alphabet) + [a for a in G2.input_alphabet if a not in G1.input_alphabet]
    atoms: dict[frozenset, tuple] = {}

    def factors(S: frozenset) -> tuple:
        if S not in atoms:
            atoms[S] = tuple(f for f in maximal_factorization(S) if f != LAMBDA)
        return atoms[S]

    def expand(seq: tuple) -> frozenset:
        out = LAMBDA
        for f in seq:
            out = product(out, f)
            if len(out) > cap:
                raise PairCapExceeded(cap)
        return out

    def final(G: Sdt, q, seq):
        if q is None or q not in G.accepts:
            return None
        return seq + factors(G.accepts[q])

    layer = [("", G1.initial, (), G2.initial, ())]
    for depth in range(n + 1):
        for x, p, s1, q, s2 in layer:
            t1, t2 = final(G1, p, s1), final(G2, q, s2)
            if t1 == t2:
                continue
            if t1 is None or t2 is None or expand(t1) != expand(t2):
                return Verdict(False, n, x)
        if depth == n:
            break
        nxt = []
        for x, p, s1, q, s2 in layer:
            for a in symbols:
                e1 = G1.step(p, a) if p is not None else None
                e2 = G2.step(q, a) if q is not None else None
                if e1 is None and e2 is None:
                    continue
                p2, n1 = (e1[0], s1 + factors(e1[1])) if e1 else (None, ())
                q2, n2 = (e2[0], s2 + factors(e2[1])) if e2 else (None, ())
                nxt.append((x + a, p2, n1, q2, n2))
        layer = nxt
    return Verdict(True, n)


# -- direct canonical form ---------------------------------------------------

def common_antichains(G: Sdt, max_rounds: int = 1000) -> dict[str, frozenset]:
    """For each state, the ac-greatest antichain valid for every future output set.

    Greatest fixpoint: a state's value must be a valid antichain of its
    accept set and of ``o(e) * C(target)`` for each outgoing edge; states
    not yet assigned impose no constraint.
    """
    C: dict[str, frozenset | None] = {q: None for q in G.states}
    for _ in range(max_rounds):
        changed = False
        for q in G.states:
            options = None
            constraints = []
            if q in G.accepts:
                constraints.append(G.accepts[q])
            for t, outs in G.out_edges(q).values():
                if C[t] is not None:
                    constraints.append(product(outs, C[t]))
            for S in constraints:
                found = set(valid_antichains(S))
                options = found if options is None else options & found
            if options is None:
                continue
            best = ac_sorted(options)[-1]
            if best != C[q]:
                C[q] = best
                changed = True
        if not changed:
            missing = [q for q, c in C.items() if c is None]
            if missing:
                raise ValueError(f"states {missing} have no future; trim the machine first")
            return C  # type: ignore[return-value]
    raise RuntimeError("common antichain iteration did not stabilise")


def _name(access: str) -> str:
    return "q_" + (access or "λ")


def minimal_form(G: Sdt) -> Sdt:
    """Canonical machine computed directly: push outputs forward, then minimise.

    Serves as an oracle independent of the learner.
    """
    G = trim(G)
    C = common_antichains(G)
    root = "\0init"
    lam = frozenset({""})
    states = [root] + list(G.states)
    cset = dict(C)
    cset[root] = lam

    def src(q: str) -> str:
        return G.initial if q == root else q

    trans = {}
    accepts = {}
    for q in states:
        for a, (t, outs) in G.out_edges(src(q)).items():
            trans[(q, a)] = (t, left_quotient(cset[q], product(outs, C[t])))
        if src(q) in G.accepts:
            accepts[q] = left_quotient(cset[q], G.accepts[src(q)])
    pushed = trim(Sdt(G.input_alphabet, G.output_alphabet, tuple(states), root, trans, accepts))
    return _minimise(pushed)


def _minimise(G: Sdt) -> Sdt:
    """Moore partition refinement on output-labelled structure, states named by access string."""
    block = {q: 0 for q in G.states}
    while True:
        sig = {}
        for q in G.states:
            edges = []
            for a in G.input_alphabet:
                e = G.step(q, a)
                edges.append(None if e is None else (block[e[0]], tuple(sorted(e[1]))))
            acc = G.accepts.get(q)
            sig[q] = (block[q], None if acc is None else tuple(sorted(acc)), tuple(edges))
        ids: dict = {}
        new = {q: ids.setdefault(sig[q], len(ids)) for q in G.states}
        if len(ids) == len(set(block.values())):
            break
        block = new
    access = access_strings(G)
    key = key_for(G.input_alphabet)
    rep: dict[int, str] = {}
    for q in sorted(G.states, key=lambda s: key(access[s])):
        rep.setdefault(block[q], q)
    name = {b: _name(access[q]) for b, q in rep.items()}
    order = sorted(rep, key=lambda b: key(access[rep[b]]))
    trans = {}
    accepts = {}
    for b in order:
        q = rep[b]
        for a, (t, outs) in G.out_edges(q).items():
            trans[(name[b], a)] = (name[block[t]], outs)
        if q in G.accepts:
            accepts[name[b]] = G.accepts[q]
    return Sdt(
        G.input_alphabet, G.output_alphabet, tuple(name[b] for b in order), name[block[G.initial]], trans, accepts
    )


def normal_names(G: Sdt) -> Sdt:
    """Rename states after their llex-least access strings, ordered by them."""
    access = access_strings(G)
    key = key_for(G.input_alphabet)
    ordered = sorted(G.states, key=lambda s: key(access[s]))
    mapping = {q: _name(access[q]) for q in ordered}
    H = G.relabel(mapping)
    return Sdt(H.input_alphabet, H.output_alphabet, tuple(mapping[q] for q in ordered), H.initial,
               H.transitions, H.accepts)


# -- canonicalisation by learning from self ----------------------------------

class NonConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class CanonicalReport:
    machine: Sdt
    rounds: int
    stable: bool
    depth: int = 0


def canonicalize(
    G: Sdt,
    start: int | None = None,
    max_rounds: int = 8,
    cap: int = DEFAULT_PAIR_CAP,
) -> CanonicalReport:
    """Learn G from its own bounded enumeration at growing depths until the result settles."""
    from .learner import FoldConflict, learn
    from .oracle import machine_oracle

    k = len(G.states) + 1 if start is None else start
    prev = None
    for r in range(max_rounds):
        depth = k + r
        try:
            H = learn(enumerate_pairs(G, depth, cap), machine_oracle(G))
        except FoldConflict:
            prev = None
            continue
        if prev is not None and isomorphic(prev, H) and bounded_equiv(H, G, depth + 2, cap):
            return CanonicalReport(H, r + 1, True, depth)
        prev = H
    raise NonConvergence(f"no stable canonical form within {max_rounds} rounds from depth {k}")
