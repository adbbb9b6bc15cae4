"""Finite representations u·v^ω of ultimately periodic infinite words."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from random import Random
from typing import Hashable, Sequence

Letter = Hashable


@dataclass(frozen=True)
class LassoWord:
    """The infinite word prefix · period · period · ...; period is nonempty."""

    prefix: tuple[Letter, ...]
    period: tuple[Letter, ...]

    def __post_init__(self):
        if not self.period:
            raise ValueError("lasso period must be nonempty")

    @classmethod
    def make(cls, prefix: Sequence[Letter], period: Sequence[Letter]) -> "LassoWord":
        return cls(tuple(prefix), tuple(period))

    def letter(self, position: int) -> Letter:
        if position < len(self.prefix):
            return self.prefix[position]
        return self.period[(position - len(self.prefix)) % len(self.period)]

    def unroll(self, length: int) -> tuple[Letter, ...]:
        return tuple(self.letter(i) for i in range(length))

    def __str__(self) -> str:
        if all(isinstance(x, str) and len(x) == 1 for x in self.prefix + self.period):
            return "".join(self.prefix) + "(" + "".join(self.period) + ")"
        return f"{list(self.prefix)}({list(self.period)})"


def _primitive_root(word: tuple[Letter, ...]) -> tuple[Letter, ...]:
    """Shortest word whose power equals ``word`` (border-array method)."""
    n = len(word)
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k > 0 and word[i] != word[k]:
            k = fail[k - 1]
        if word[i] == word[k]:
            k += 1
        fail[i] = k
    p = n - fail[-1]
    if p < n and n % p == 0:
        return word[:p]
    return word


def lasso_canonicalize(w: LassoWord) -> LassoWord:
    """Unique minimal representation of the same infinite word.

    The period is reduced to its primitive root, then prefix letters equal
    to the aligned period letter are absorbed by rotating the period.
    Idempotent and denotation-preserving.
    """
    period = _primitive_root(w.period)
    prefix = w.prefix
    while prefix and prefix[-1] == period[-1]:
        prefix = prefix[:-1]
        period = period[-1:] + period[:-1]
    return LassoWord(prefix, period)


def lasso_equal(w1: LassoWord, w2: LassoWord) -> bool:
    """True iff the two representations denote the same infinite word."""
    return lasso_canonicalize(w1) == lasso_canonicalize(w2)


def enumerate_lassos(
    alphabet: Sequence[Letter], max_prefix: int, max_period: int
) -> list[LassoWord]:
    """All canonical lassos with bounded prefix and period lengths.

    Only canonical representations are produced (primitive period, minimal
    prefix), so each ultimately periodic word appears exactly once.
    """
    letters = list(alphabet)
    result = []
    for plen in range(1, max_period + 1):
        for period in itertools.product(letters, repeat=plen):
            if _primitive_root(period) != period:
                continue
            for ulen in range(0, max_prefix + 1):
                for prefix in itertools.product(letters, repeat=ulen):
                    if prefix and prefix[-1] == period[-1]:
                        continue
                    result.append(LassoWord(prefix, period))
    return result


def random_lassos(
    alphabet: Sequence[Letter],
    count: int,
    rng: Random,
    max_prefix: int = 4,
    max_period: int = 5,
) -> list[LassoWord]:
    """Sample ``count`` distinct canonical lassos."""
    seen = set()
    result = []
    attempts = 0
    while len(result) < count and attempts < 50 * count + 100:
        attempts += 1
        ulen = rng.randint(0, max_prefix)
        vlen = rng.randint(1, max_period)
        prefix = tuple(rng.choice(alphabet) for _ in range(ulen))
        period = tuple(rng.choice(alphabet) for _ in range(vlen))
        w = lasso_canonicalize(LassoWord(prefix, period))
        if w not in seen:
            seen.add(w)
            result.append(w)
    return result
