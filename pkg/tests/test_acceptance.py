"""Acceptance criteria 1-11, one test each.

Every test records a ``criterion N: PASS|FAIL ...`` line; the lines are
printed as they happen and again in the terminal summary.  Run this file
directly for the lines alone: ``python3 tests/test_acceptance.py``.
"""
import contextlib
import io
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import pydot
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import (  # noqa: E402
    S12,
    S12_VALID,
    S26,
    S26_FACTORS,
    S26_SUFFIXES_1,
    S26_SUFFIXES_2,
    product_translations,
)
from sdtlearn.cli import main as cli  # noqa: E402
from sdtlearn.dataset import parse_dataset  # noqa: E402
from sdtlearn.equivalence import bounded_equiv, canonicalize, default_depth, isomorphic  # noqa: E402
from sdtlearn.fixtures import G0, G1, G2, deferred_pair, random_fixtures  # noqa: E402
from sdtlearn.learner import LearnerError, learn  # noqa: E402
from sdtlearn.oracle import machine_oracle  # noqa: E402
from sdtlearn.sampler import characteristic_sample  # noqa: E402
from sdtlearn.strings import (  # noqa: E402
    Alphabet,
    ac_less,
    format_string_set,
    is_antichain,
    left_quotient,
    maximal_factorization,
    prefix_closure,
    product,
    product_all,
    valid_antichains,
)
from sdtlearn.transducer import (  # noqa: E402
    contains_translation,
    enumerate_pairs,
    format_sdt,
    iter_domain,
    parse_sdt,
    random_sdt,
    translate,
)

# tolerances, as stated by the criteria
C1_SECONDS = 1.0
C2_SECONDS = 1.0
C3_MIN_SETS, C3_MAX_ALPHABET, C3_MAX_STRINGS, C3_MAX_LEN, C3_SECONDS = 1000, 3, 12, 6, 60.0
C6_MIN_PROBES, C6_MAX_STATES, C6_MAX_INPUT, C6_SECONDS = 500, 5, 6, 30.0
C7_MIN_FIXTURES, C7_MAX_K, C7_DEPTH_SLACK, C7_SECONDS = 20, 8, 4, 60.0
C8_EXTRA_PAIRS = 20
C9_QUERY_FACTOR, C9_SAMPLE_FACTOR = 50, 50
C10_SECONDS = 120.0

RESULTS: list[str] = []


def record(n: int, ok: bool, detail: str) -> bool:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def fixture_suite():
    return [G0, G1, G2, *deferred_pair(), *random_fixtures(20)]


def machine_size(G) -> int:
    return len(G.states) + len(G.edges) + sum(len(y) for *_, outs in G.edges for y in outs) + sum(
        len(y) for outs in G.accepts.values() for y in outs
    )


def fmt(S) -> str:
    return "{" + format_string_set(S, Alphabet(("a", "b"))) + "}"


# -- 1, 2: golden sets ---------------------------------------------------------

def criterion_1() -> bool:
    start = time.perf_counter()
    found = valid_antichains(S12, Alphabet(("a", "b")))
    took = time.perf_counter() - start
    ordered = all(ac_less(P, Q) for P, Q in zip(found, found[1:]))
    ok = found == S12_VALID and ordered and took < C1_SECONDS
    return record(1, ok, f"{len(found)} valid antichains, ordered={ordered}, {took:.3f}s")


def criterion_2() -> bool:
    start = time.perf_counter()
    factors = maximal_factorization(S26, Alphabet(("a", "b")))
    took = time.perf_counter() - start
    q1 = left_quotient(factors[0], S26)
    q2 = left_quotient(product(factors[0], factors[1]), S26) if len(factors) > 1 else None
    ok = factors == S26_FACTORS and q1 == S26_SUFFIXES_1 and q2 == S26_SUFFIXES_2 and took < C2_SECONDS
    shown = ", ".join(fmt(P) for P in factors)
    return record(
        2, ok,
        f"got {len(factors)} factors [{shown}], expected [{', '.join(fmt(P) for P in S26_FACTORS)}]; "
        f"first quotient matches={q1 == S26_SUFFIXES_1}, second matches={q2 == S26_SUFFIXES_2}, {took:.3f}s",
    )


# -- 3, 4, 5: properties over random string sets -------------------------------

def random_sets(count: int = C3_MIN_SETS, seed: int = 2024) -> list[frozenset]:
    rng = random.Random(seed)
    sets = []
    for _ in range(count):
        sigma = "abc"[: rng.randint(1, C3_MAX_ALPHABET)]
        size = rng.randint(1, C3_MAX_STRINGS)
        sets.append(frozenset(
            "".join(rng.choice(sigma) for _ in range(rng.randint(0, C3_MAX_LEN))) for _ in range(size)
        ))
    return sets


def brute_force_vac(S) -> set[frozenset]:
    """Every valid antichain lies inside one class of nodes with equal subtrees,
    so enumerating antichain subsets of each class and testing maximality is exhaustive."""
    tree = prefix_closure(S)
    below = {p: frozenset(t[len(p):] for t in tree if t.startswith(p)) for p in tree}
    classes: dict[frozenset, list[str]] = {}
    for p, shape in below.items():
        classes.setdefault(shape, []).append(p)
    found = set()
    for members in classes.values():
        # members of one class share a subtree, so two comparable members would need an infinite tree
        for mask in range(1, 1 << len(members)):
            P = frozenset(m for i, m in enumerate(members) if mask >> i & 1)
            if all(any(s.startswith(p) or p.startswith(s) for p in P) for s in S):
                found.add(P)
    return found


CORPUS = random_sets()


def criterion_3() -> bool:
    start = time.perf_counter()
    order_bad = brute_bad = 0
    for S in CORPUS:
        found = valid_antichains(S)
        if not all(ac_less(P, Q) and not ac_less(Q, P) for i, P in enumerate(found) for Q in found[i + 1:]):
            order_bad += 1
        if set(found) != brute_force_vac(S) or len(set(found)) != len(found):
            brute_bad += 1
    took = time.perf_counter() - start
    ok = order_bad == brute_bad == 0 and len(CORPUS) >= C3_MIN_SETS and took < C3_SECONDS
    return record(3, ok, f"{len(CORPUS)} sets, order violations={order_bad}, brute-force mismatches={brute_bad}, {took:.1f}s")


def criterion_4() -> bool:
    bad_sets, bad_pairs, on_antichains, example = set(), 0, 0, None
    for S in CORPUS:
        for P in valid_antichains(S):
            if product(P, left_quotient(P, S)) != S:
                bad_pairs += 1
                bad_sets.add(S)
                on_antichains += is_antichain(S)
                if example is None or len(S) < len(example[0]):
                    example = (S, P)
    detail = f"{len(CORPUS)} sets, violations={bad_pairs} (in {len(bad_sets)} sets, {on_antichains} on prefix-free sets)"
    if example:
        detail += f"; smallest: S={fmt(example[0])}, P={fmt(example[1])}"
    return record(4, bad_pairs == 0, detail)


def criterion_5() -> bool:
    counts = {"product": 0, "factor-vac": 0, "idempotence": 0}
    bad_sets = set()
    on_antichains = 0
    for S in CORPUS:
        factors = maximal_factorization(S)
        failed = False
        if product_all(factors) != S:
            counts["product"] += 1
            failed = True
        for P in factors:
            expected = [P] if P == {""} else [frozenset({""}), P]
            if valid_antichains(P) != expected:
                counts["factor-vac"] += 1
                failed = True
                break
        if maximal_factorization(product_all(factors)) != factors:
            counts["idempotence"] += 1
            failed = True
        if failed:
            bad_sets.add(S)
            on_antichains += is_antichain(S)
    detail = ", ".join(f"{k} violations={v}" for k, v in counts.items())
    return record(5, not bad_sets, f"{len(CORPUS)} sets, {detail} ({on_antichains} failing sets are prefix-free)")


# -- 6: translation semantics ----------------------------------------------------

def criterion_6() -> bool:
    rng = random.Random(6)
    ab, AB = Alphabet(("a", "b")), Alphabet(("A", "B"))
    start = time.perf_counter()
    probes = disagreements = positives = 0
    seed = 0
    while probes < C6_MIN_PROBES:
        G = random_sdt(rng.randint(1, C6_MAX_STATES), ab, AB, seed=seed)
        seed += 1
        domain = list(iter_domain(G, C6_MAX_INPUT))
        for _ in range(10):
            if domain and rng.random() < 0.5:
                x = rng.choice(domain)
            else:
                x = "".join(rng.choice("ab") for _ in range(rng.randint(0, C6_MAX_INPUT)))
            full = product_translations(G, x)
            if full and rng.random() < 0.5:
                y = rng.choice(sorted(full))
            else:
                y = "".join(rng.choice("AB") for _ in range(rng.randint(0, 6)))
            expected = full is not None and y in full
            positives += expected
            disagreements += contains_translation(G, x, y) != expected
            probes += 1
    took = time.perf_counter() - start
    ok = disagreements == 0 and took < C6_SECONDS
    return record(6, ok, f"{probes} probes ({positives} true), disagreements={disagreements}, {took:.2f}s")


# -- 7, 9: learning from enumerated data ----------------------------------------

@dataclass
class Convergence:
    k: int | None = None
    seconds: float = 0.0
    query_ratio: float = 0.0  # queries / |D|^2, worst over the runs
    notes: list[str] = field(default_factory=list)


def converge(G) -> Convergence:
    result = Convergence()
    start = time.perf_counter()
    learned = {}

    def at(k):
        if k not in learned:
            D = enumerate_pairs(G, k)
            o = machine_oracle(G)
            try:
                H = learn(D, o) if len(D) else None
            except LearnerError as e:
                result.notes.append(f"k={k}: {e}")
                H = None
            if len(D):
                result.query_ratio = max(result.query_ratio, o.stats().total / len(D) ** 2)
            learned[k] = H
        return learned[k]

    for k in range(C7_MAX_K + 1):
        H, H_next = at(k), at(k + 1)
        if H is None or H_next is None:
            continue
        if isomorphic(H, H_next) and bounded_equiv(H, G, k + C7_DEPTH_SLACK):
            result.k = k
            break
    result.seconds = time.perf_counter() - start
    return result


_CONVERGENCE: dict[int, Convergence] = {}


def convergence_runs() -> list[Convergence]:
    for i, G in enumerate(fixture_suite()):
        if i not in _CONVERGENCE:
            _CONVERGENCE[i] = converge(G)
    return [_CONVERGENCE[i] for i in range(len(fixture_suite()))]


def criterion_7() -> bool:
    runs = convergence_runs()
    stuck = [i for i, r in enumerate(runs) if r.k is None]
    slow = [i for i, r in enumerate(runs) if r.seconds >= C7_SECONDS]
    ks = [r.k for r in runs if r.k is not None]
    ok = not stuck and not slow and len(runs) >= C7_MIN_FIXTURES
    return record(
        7, ok,
        f"{len(runs)} machines, converged={len(ks)}, max k={max(ks, default=None)}, "
        f"non-converging={stuck}, slowest={max(r.seconds for r in runs):.2f}s",
    )


def criterion_9() -> bool:
    runs = convergence_runs()
    worst_q = max(r.query_ratio for r in runs)
    worst_cs = 0.0
    for G in fixture_suite():
        worst_cs = max(worst_cs, len(characteristic_sample(G)) / machine_size(G) ** 2)
    ok = worst_q <= C9_QUERY_FACTOR and worst_cs <= C9_SAMPLE_FACTOR
    return record(9, ok, f"max queries/|D|^2={worst_q:.3f} (limit {C9_QUERY_FACTOR}), max |CS|/size^2={worst_cs:.3f} (limit {C9_SAMPLE_FACTOR})")


# -- 8: characteristic samples ----------------------------------------------------

def criterion_8() -> bool:
    failures = []
    largest = 0
    for i, G in enumerate(fixture_suite()):
        cs = characteristic_sample(G)
        largest = max(largest, len(cs))
        H = learn(cs, machine_oracle(G))
        if not bounded_equiv(H, G, default_depth(H, G)):
            failures.append((i, "cs"))
            continue
        rng = random.Random(i)
        pool = [(x, y) for x in iter_domain(G, len(G.states) + 4) for y in sorted(translate(G, x))]
        extra = [p for p in pool if p not in cs]
        D = cs | rng.sample(extra, min(C8_EXTRA_PAIRS, len(extra)))
        H = learn(D, machine_oracle(G))
        if not bounded_equiv(H, G, default_depth(H, G)):
            failures.append((i, "cs+extra"))
    return record(8, not failures, f"{len(fixture_suite())} machines, failures={failures}, largest |CS|={largest}")


# -- 10: canonical forms -------------------------------------------------------

def criterion_10() -> bool:
    start = time.perf_counter()
    failures = []
    for i, G in enumerate(fixture_suite()):
        first = canonicalize(G).machine
        if not isomorphic(canonicalize(first).machine, first):
            failures.append(i)
    late, early = deferred_pair()
    paired = isomorphic(canonicalize(late).machine, canonicalize(early).machine)
    took = time.perf_counter() - start
    ok = not failures and paired and took < C10_SECONDS
    return record(10, ok, f"idempotence failures={failures}, deferred pair isomorphic={paired}, {took:.1f}s")


# -- 11: files ------------------------------------------------------------------

def criterion_11(tmp: Path) -> bool:
    failures = []

    def run(*argv):
        with contextlib.redirect_stdout(io.StringIO()), contextlib.redirect_stderr(io.StringIO()):
            code = cli([str(a) for a in argv])
        if code != 0:
            failures.append(f"exit {code}: {' '.join(map(str, argv))}")

    for seed in range(5):
        path = tmp / f"gen{seed}.sdt"
        run("gen", "--states", 1 + seed, "--seed", seed, "--out", path)
        G = parse_sdt(path.read_text(encoding="utf-8"))
        if format_sdt(G) != path.read_text(encoding="utf-8") or parse_sdt(format_sdt(G)) != G:
            failures.append(f"sdt gen{seed}")
    for i, G in enumerate([G0, G1, G2, *deferred_pair(), *random_fixtures(5)]):
        src = tmp / f"m{i}.sdt"
        src.write_text(format_sdt(G), encoding="utf-8")
        pairs, cs, canon, dot = (tmp / f"m{i}.{ext}" for ext in ("pairs.tsv", "cs.tsv", "canon.sdt", "dot"))
        run("pairs", src, "--max-len", 4, "--out", pairs)
        run("cs", src, "--out", cs)
        run("canon", src, "--out", canon)
        run("dot", src, "--out", dot)
        sigma, omega = G.input_alphabet, G.output_alphabet
        if parse_dataset(pairs.read_text(encoding="utf-8"), sigma, omega) != enumerate_pairs(G, 4):
            failures.append(f"pairs m{i}")
        if parse_dataset(cs.read_text(encoding="utf-8"), sigma, omega) != characteristic_sample(G):
            failures.append(f"cs m{i}")
        H = parse_sdt(canon.read_text(encoding="utf-8"))
        if parse_sdt(format_sdt(H)) != H or not bounded_equiv(H, G):
            failures.append(f"canon m{i}")
        graphs = pydot.graph_from_dot_data(dot.read_text(encoding="utf-8"))
        if not graphs or len(graphs[0].get_edges()) != len(G.edges) + 1:
            failures.append(f"dot m{i}")
    return record(11, not failures, f"failures={failures}")


# -- pytest entry points -----------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7, 8, 9, 10])
def test_criterion(n):
    assert globals()[f"criterion_{n}"](), RESULTS[-1]


def test_criterion_11(tmp_path):
    assert criterion_11(tmp_path), RESULTS[-1]


if __name__ == "__main__":
    import tempfile

    for n in range(1, 11):
        globals()[f"criterion_{n}"]()
    with tempfile.TemporaryDirectory() as tmp:
        criterion_11(Path(tmp))
