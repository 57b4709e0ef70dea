"""Finite sets of translation pairs and their tab-separated file format."""
from __future__ import annotations

from typing import Iterable, Iterator

from .strings import LAMBDA_TOKEN, Alphabet, format_string, key_for


class DatasetParseError(ValueError):
    pass


class Dataset:
    """A duplicate-free set of ``(input, output)`` pairs with an index by input."""

    def __init__(
        self,
        pairs: Iterable[tuple[str, str]],
        input_alphabet: Alphabet | None = None,
        output_alphabet: Alphabet | None = None,
    ):
        pairs = frozenset(pairs)
        self.input_alphabet = input_alphabet or Alphabet.infer(x for x, _ in pairs)
        self.output_alphabet = output_alphabet or Alphabet.infer(y for _, y in pairs)
        for x, y in pairs:
            if self.input_alphabet is not None:
                self.input_alphabet.check(x)
            if self.output_alphabet is not None:
                self.output_alphabet.check(y)
        self.pairs = pairs
        index: dict[str, set[str]] = {}
        for x, y in pairs:
            index.setdefault(x, set()).add(y)
        self.index = {x: frozenset(ys) for x, ys in index.items()}
        ik, ok = key_for(self.input_alphabet), key_for(self.output_alphabet)
        self._sorted = sorted(pairs, key=lambda p: (ik(p[0]), ok(p[1])))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[str, str]]:
        return iter(self._sorted)

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __eq__(self, other) -> bool:
        return isinstance(other, Dataset) and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash(self.pairs)

    def __repr__(self) -> str:
        return f"Dataset({len(self)} pairs)"

    def outputs(self, x: str) -> frozenset[str]:
        return self.index.get(x, frozenset())

    def dom(self) -> list[str]:
        """Inputs in llex order."""
        return sorted(self.index, key=key_for(self.input_alphabet))

    def ran(self) -> frozenset[str]:
        return frozenset(y for _, y in self.pairs)

    def union(self, other: Iterable[tuple[str, str]]) -> "Dataset":
        return Dataset(self.pairs | frozenset(other), self.input_alphabet, self.output_alphabet)

    __or__ = union

    def with_alphabets(self, input_alphabet: Alphabet | None, output_alphabet: Alphabet | None) -> "Dataset":
        return Dataset(self.pairs, input_alphabet or self.input_alphabet, output_alphabet or self.output_alphabet)


def format_dataset(D: Dataset) -> str:
    return "".join(f"{format_string(x)}\t{format_string(y)}\n" for x, y in D)


def parse_dataset(text: str, input_alphabet: Alphabet | None = None, output_alphabet: Alphabet | None = None) -> Dataset:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0] or not fields[1]:
            raise DatasetParseError(f"line {lineno}: expected 'input<TAB>output', got {raw!r}")
        x, y = ("" if f == LAMBDA_TOKEN else f for f in fields)
        pairs.append((x, y))
    try:
        return Dataset(pairs, input_alphabet, output_alphabet)
    except ValueError as e:
        raise DatasetParseError(str(e)) from e
