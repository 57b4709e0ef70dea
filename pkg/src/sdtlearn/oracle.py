"""Translation-query and domain oracles backed by a hidden machine."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Protocol

from .transducer import Sdt, contains_translation, in_domain


class BudgetExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleStats:
    translation_queries: int = 0
    domain_queries: int = 0
    cache_hits: int = 0

    @property
    def total(self) -> int:
        return self.translation_queries + self.domain_queries


class Oracle(Protocol):
    def query(self, x: str, y: str) -> bool: ...

    def dk(self, x: str) -> bool: ...

    def stats(self) -> OracleStats: ...


class MachineOracle:
    """Answers ``[x, y]`` and ``DK(x)`` from a target SDT, memoizing every answer.

    The counters record distinct questions; repeats only bump ``cache_hits``.
    """

    def __init__(self, machine: Sdt):
        self.machine = machine
        self._lock = threading.Lock()
        self._translations: dict[tuple[str, str], bool] = {}
        self._domain: dict[str, bool] = {}
        self._hits = 0

    def query(self, x: str, y: str) -> bool:
        with self._lock:
            hit = self._translations.get((x, y))
            if hit is not None:
                self._hits += 1
                return hit
            answer = contains_translation(self.machine, x, y)
            self._translations[(x, y)] = answer
            return answer

    def dk(self, x: str) -> bool:
        with self._lock:
            hit = self._domain.get(x)
            if hit is not None:
                self._hits += 1
                return hit
            answer = in_domain(self.machine, x)
            self._domain[x] = answer
            return answer

    def stats(self) -> OracleStats:
        with self._lock:
            return OracleStats(len(self._translations), len(self._domain), self._hits)


def machine_oracle(G: Sdt) -> MachineOracle:
    return MachineOracle(G)


class BudgetedOracle:
    """Delegates to ``inner`` until ``max_queries`` distinct questions have been asked."""

    def __init__(self, inner: Oracle, max_queries: int):
        if max_queries < 0:
            raise ValueError("max_queries must be non-negative")
        self.inner = inner
        self.max_queries = max_queries
        self.machine = getattr(inner, "machine", None)
        self._lock = threading.Lock()
        self._seen: dict[tuple, bool] = {}

    def _ask(self, key: tuple, ask):
        with self._lock:
            if key in self._seen:
                return self._seen[key]
            if len(self._seen) >= self.max_queries:
                raise BudgetExhausted(f"query budget of {self.max_queries} exhausted")
            answer = ask()
            self._seen[key] = answer
            return answer

    def query(self, x: str, y: str) -> bool:
        return self._ask(("t", x, y), lambda: self.inner.query(x, y))

    def dk(self, x: str) -> bool:
        return self._ask(("d", x), lambda: self.inner.dk(x))

    def stats(self) -> OracleStats:
        return self.inner.stats()


def budgeted(o: Oracle, max_queries: int) -> BudgetedOracle:
    return BudgetedOracle(o, max_queries)
