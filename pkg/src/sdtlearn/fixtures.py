"""Small reference machines used by the tests and the CLI."""
from __future__ import annotations

from .strings import Alphabet
from .transducer import Sdt, random_sdt

SIGMA = Alphabet(("a",))
OMEGA = Alphabet(("A", "B"))
LAM = frozenset({""})


def g_chain(i: int) -> Sdt:
    """G_i: i edges ``a:A,B`` in a row, then a loop ``a:A``; every state accepts.

    G_0 is the single loop ``a:A,B``.
    """
    if i == 0:
        return Sdt(SIGMA, OMEGA, ("q_λ",), "q_λ", {("q_λ", "a"): ("q_λ", {"A", "B"})}, {"q_λ": LAM})
    names = ["q_" + ("a" * k or "λ") for k in range(i + 1)]
    trans = {(names[k], "a"): (names[k + 1], {"A", "B"}) for k in range(i)}
    trans[(names[i], "a")] = (names[i], {"A"})
    return Sdt(SIGMA, OMEGA, tuple(names), names[0], trans, {q: LAM for q in names})


G0 = g_chain(0)
G1 = g_chain(1)
G2 = g_chain(2)


def deferred_pair() -> tuple[Sdt, Sdt]:
    """Two machines for {<a, A>}: output on the #-transition vs on the edge."""
    alpha_in, alpha_out = Alphabet(("a",)), Alphabet(("A",))
    late = Sdt(alpha_in, alpha_out, ("q0", "q1"), "q0", {("q0", "a"): ("q1", LAM)}, {"q1": {"A"}})
    early = Sdt(alpha_in, alpha_out, ("q0", "q1"), "q0", {("q0", "a"): ("q1", {"A"})}, {"q1": LAM})
    return late, early


def random_fixtures(count: int = 20, seed: int = 0, max_states: int = 5) -> list[Sdt]:
    """Random trim machines with |Σ|, |Ω|, |o(e)| and output lengths all at most 2."""
    ab, AB = Alphabet(("a", "b")), Alphabet(("A", "B"))
    machines = []
    for i in range(count):
        n = 1 + (seed + i) % max_states
        machines.append(random_sdt(n, ab, AB, max_out_len=2, max_out_set=2, seed=seed * 1000 + i))
    return machines
