"""Finitely supported rational sequences indexed by ordinals.

Natural-number indices are finite ordinals, so one type covers both
``c_00([1, w^alpha])`` and ``c_00``.  :func:`iota` fixes the identification
of the two index sets.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterator, Mapping

from .ordinal import Ord, omega_pow
from .stepfn import to_fraction

__all__ = ["FinSeq", "seq_sup_norm", "iota", "iota_inverse", "reindex"]


class FinSeq:
    """Immutable finite map ``Ord -> Fraction`` without zero entries."""

    __slots__ = ("_entries", "bound")

    def __init__(self, entries: Mapping | None = None, bound: Ord | None = None):
        clean = {}
        for key, value in (entries or {}).items():
            if isinstance(key, int):
                key = Ord.from_int(key)
            if not isinstance(key, Ord):
                raise TypeError(f"index must be an Ord or int, got {type(key).__name__}")
            if bound is not None and (not key or key > bound):
                raise ValueError(f"index {key} outside [1, {bound}]")
            v = to_fraction(value)
            if v:
                clean[key] = v
        object.__setattr__(self, "_entries", clean)
        object.__setattr__(self, "bound", bound)

    def __setattr__(self, name, value):
        raise AttributeError("FinSeq is immutable")

    def __getitem__(self, key) -> Fraction:
        if isinstance(key, int):
            key = Ord.from_int(key)
        return self._entries.get(key, Fraction(0))

    def __iter__(self) -> Iterator[Ord]:
        return iter(sorted(self._entries))

    def __len__(self):
        return len(self._entries)

    def items(self):
        return sorted(self._entries.items())

    def support(self) -> list[Ord]:
        return sorted(self._entries)

    def __eq__(self, other):
        if not isinstance(other, FinSeq):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        return hash(frozenset(self._entries.items()))

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in self.items())
        return f"FinSeq({{{body}}})"

    def __add__(self, other: "FinSeq") -> "FinSeq":
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out.get(k, 0) + v
        return FinSeq(out)

    def __mul__(self, c) -> "FinSeq":
        c = to_fraction(c)
        return FinSeq({k: c * v for k, v in self._entries.items()})

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"entries": [{"index": k.to_json(), "value": str(v)} for k, v in self.items()]}

    @classmethod
    def from_json(cls, data) -> "FinSeq":
        try:
            entries = {}
            for item in data["entries"]:
                key = Ord.from_json(item["index"])
                if key in entries:
                    raise ValueError(f"duplicate index {key}")
                entries[key] = Fraction(item["value"])
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed sequence JSON: {exc}") from exc
        return cls(entries)


def seq_sup_norm(s: FinSeq) -> Fraction:
    return max((abs(v) for v in s._entries.values()), default=Fraction(0))


# Enumeration behind iota: a point t <= w^alpha is the coefficient vector
# (k_alpha, k_{alpha-1}, ..., k_0), where k_alpha = 1 only for t = w^alpha.
# Vectors are ranked by coefficient sum, then lexicographically ascending.


def _completions(length: int, total: int) -> int:
    # non-negative integer vectors of the given length summing to total
    if length == 0:
        return 1 if total == 0 else 0
    return comb(total + length - 1, length - 1)


@lru_cache(maxsize=None)
def _count_below_sum(alpha: int, s: int) -> int:
    # valid vectors with coefficient sum in [1, s)
    n = sum(_completions(alpha, t) for t in range(1, s))
    return n + (1 if s > 1 else 0)


def iota(t: Ord, alpha: int) -> int:
    """1-based rank of ``t`` in the fixed enumeration of ``[1, w^alpha]``."""
    if not t or t > omega_pow(alpha):
        raise ValueError(f"{t} is outside [1, w^{alpha}]")
    if t == omega_pow(alpha):
        # (1, 0, ..., 0) is the lexicographically largest vector of sum 1
        return alpha + 1
    vec = t.coefficients(alpha)[::-1]  # (k_{alpha-1}, ..., k_0)
    s = sum(vec)
    rank = _count_below_sum(alpha, s)
    remaining = s
    for i, k in enumerate(vec):
        tail = alpha - i - 1
        for smaller in range(k):
            rank += _completions(tail, remaining - smaller)
        remaining -= k
    return rank + 1


def iota_inverse(n: int, alpha: int) -> Ord:
    """Inverse of :func:`iota`."""
    if n < 1:
        raise ValueError("ranks start at 1")
    s = 1
    while _count_below_sum(alpha, s + 1) < n:
        s += 1
    offset = n - 1 - _count_below_sum(alpha, s)
    if s == 1 and offset == alpha:
        return omega_pow(alpha)
    vec = []
    remaining = s
    for i in range(alpha):
        tail = alpha - i - 1
        k = 0
        while True:
            c = _completions(tail, remaining - k)
            if offset < c:
                break
            offset -= c
            k += 1
        vec.append(k)
        remaining -= k
    return Ord.from_coefficients(vec[::-1])


def reindex(s: FinSeq, alpha: int) -> FinSeq:
    """Move every index ``t`` to ``iota(t, alpha)``."""
    return FinSeq({iota(k, alpha): v for k, v in s._entries.items()})
