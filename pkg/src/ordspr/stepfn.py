"""Step functions on ordinal intervals.

A :class:`StepFn` is a finite rational combination of indicators of clopen
intervals ``(a, b]``.  It is stored as cells ``(end_i, value_i)``; cell ``i``
covers ``(end_{i-1}, end_i]`` and the first cell starts at the formal left
endpoint ``start`` (``0`` for a function on ``[1, gamma]``).  Adjacent cells
never share a value, so two StepFns are equal iff they represent the same
function.
"""
from __future__ import annotations

from bisect import bisect_left
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .ordinal import ZERO, Ord, add, omega_pow

__all__ = [
    "StepFn",
    "FnPair",
    "to_fraction",
    "indicator",
    "block_indicator",
    "constant",
    "zero",
    "combine",
    "scale",
    "fn_abs",
    "fn_add",
    "fn_sub",
    "meet",
    "join",
    "sup_norm",
    "shift",
    "glue",
    "restrict",
    "vanishes_at_end",
    "am_member",
]


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


class StepFn:
    __slots__ = ("start", "ends", "values")

    def __init__(self, cells: Iterable[tuple[Ord, object]], start: Ord = ZERO):
        ends: list[Ord] = []
        values: list[Fraction] = []
        prev = start
        for end, value in cells:
            if not isinstance(end, Ord):
                raise TypeError(f"cell end must be an Ord, got {type(end).__name__}")
            if end <= prev:
                raise ValueError("cell ends must be strictly increasing and above start")
            v = to_fraction(value)
            if values and values[-1] == v:
                ends[-1] = end
            else:
                ends.append(end)
                values.append(v)
            prev = end
        if not ends:
            raise ValueError("a step function needs at least one cell")
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "ends", tuple(ends))
        object.__setattr__(self, "values", tuple(values))

    @classmethod
    def _raw(cls, start: Ord, ends: tuple, values: tuple) -> "StepFn":
        obj = object.__new__(cls)
        object.__setattr__(obj, "start", start)
        object.__setattr__(obj, "ends", ends)
        object.__setattr__(obj, "values", values)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("StepFn is immutable")

    @property
    def domain_end(self) -> Ord:
        return self.ends[-1]

    @property
    def cells(self) -> list[tuple[Ord, Fraction]]:
        return list(zip(self.ends, self.values))

    @property
    def breakpoints(self) -> tuple[Ord, ...]:
        """Cell ends strictly below the domain end."""
        return self.ends[:-1]

    def __eq__(self, other):
        if not isinstance(other, StepFn):
            return NotImplemented
        return (
            self.start == other.start
            and self.ends == other.ends
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.start, self.ends, self.values))

    def __repr__(self):
        cells = ", ".join(f"({e}, {v})" for e, v in zip(self.ends, self.values))
        lo = "" if not self.start else f"start={self.start}, "
        return f"StepFn({lo}[{cells}])"

    def __call__(self, t: Ord) -> Fraction:
        return self.eval(t)

    def eval(self, t: Ord) -> Fraction:
        if t <= self.start or t > self.ends[-1]:
            raise ValueError(f"{t} is outside ({self.start}, {self.ends[-1]}]")
        return self.values[bisect_left(self.ends, t)]

    def __add__(self, other):
        return fn_add(self, other)

    def __sub__(self, other):
        return fn_sub(self, other)

    def __neg__(self):
        return scale(-1, self)

    def __mul__(self, c):
        return scale(c, self)

    __rmul__ = __mul__

    def __abs__(self):
        return fn_abs(self)

    def __and__(self, other):
        return meet(self, other)

    def __or__(self, other):
        return join(self, other)

    def map_values(self, op: Callable[[Fraction], Fraction]) -> "StepFn":
        return StepFn(zip(self.ends, map(op, self.values)), start=self.start)

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values)

    def to_json(self) -> dict:
        data = {
            "domain": self.domain_end.to_json(),
            "cells": [{"end": e.to_json(), "value": str(v)} for e, v in zip(self.ends, self.values)],
        }
        if self.start:
            data["start"] = self.start.to_json()
        return data

    @classmethod
    def from_json(cls, data) -> "StepFn":
        try:
            start = Ord.from_json(data.get("start", []))
            domain = Ord.from_json(data["domain"])
            cells = [(Ord.from_json(c["end"]), Fraction(c["value"])) for c in data["cells"]]
        except (KeyError, TypeError, AttributeError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed step function JSON: {exc}") from exc
        fn = cls(cells, start=start)
        if fn.domain_end != domain:
            raise ValueError(f"last cell ends at {fn.domain_end}, domain says {domain}")
        return fn


class FnPair:
    """Element of the sup-normed direct sum of two C(K) spaces."""

    __slots__ = ("left", "right")

    def __init__(self, left: StepFn, right: StepFn):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    def __setattr__(self, name, value):
        raise AttributeError("FnPair is immutable")

    def __eq__(self, other):
        if not isinstance(other, FnPair):
            return NotImplemented
        return self.left == other.left and self.right == other.right

    def __hash__(self):
        return hash((self.left, self.right))

    def __repr__(self):
        return f"FnPair({self.left!r}, {self.right!r})"

    def norm(self) -> Fraction:
        return max(sup_norm(self.left), sup_norm(self.right))

    def to_json(self) -> dict:
        return {"left": self.left.to_json(), "right": self.right.to_json()}

    @classmethod
    def from_json(cls, data) -> "FnPair":
        try:
            return cls(StepFn.from_json(data["left"]), StepFn.from_json(data["right"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed pair JSON: {exc}") from exc


def constant(c, gamma: Ord) -> StepFn:
    return StepFn([(gamma, c)])


def zero(gamma: Ord) -> StepFn:
    return StepFn([(gamma, 0)])


def indicator(a: Ord, b: Ord, gamma: Ord) -> StepFn:
    """Indicator of ``(a, b]`` inside ``[1, gamma]``."""
    if not a < b:
        raise ValueError(f"empty interval ({a}, {b}]")
    if b > gamma:
        raise ValueError(f"{b} exceeds the domain end {gamma}")
    cells = []
    if a:
        cells.append((a, 0))
    cells.append((b, 1))
    if b < gamma:
        cells.append((gamma, 0))
    return StepFn(cells)


def block_interval(m: Sequence[int], alpha: int) -> tuple[Ord, Ord]:
    k = len(m)
    if k == 0 or k > alpha:
        raise ValueError(f"block index length must be in 1..{alpha}, got {k}")
    if any(x < 1 for x in m):
        raise ValueError("block indices are positive integers")
    lower_terms = [(alpha - i - 1, mi - 1) for i, mi in enumerate(m)]
    lo = Ord((e, c) for e, c in lower_terms if c)
    hi = Ord((e, c) for e, c in lower_terms[:-1] + [(alpha - k, m[-1])] if c)
    return lo, hi


def block_indicator(m: Sequence[int], alpha: int) -> StepFn:
    """Indicator of the nested block ``1_{m_1,...,m_k}`` inside ``[1, w^alpha]``."""
    lo, hi = block_interval(m, alpha)
    return indicator(lo, hi, omega_pow(alpha))


def _check_same_domain(f: StepFn, g: StepFn) -> None:
    if f.ends[-1] != g.ends[-1] or f.start != g.start:
        raise ValueError(
            f"domain mismatch: ({f.start}, {f.ends[-1]}] vs ({g.start}, {g.ends[-1]}]"
        )


def combine(op: Callable[[Fraction, Fraction], Fraction], f: StepFn, g: StepFn) -> StepFn:
    """Apply ``op`` pointwise over the common refinement of f and g."""
    _check_same_domain(f, g)
    fe, fv, ge, gv = f.ends, f.values, g.ends, g.values
    i = j = 0
    ends = []
    values = []
    while i < len(fe):
        a, b = fe[i], ge[j]
        v = op(fv[i], gv[j])
        if a < b:
            end = a
            i += 1
        elif b < a:
            end = b
            j += 1
        else:
            end = a
            i += 1
            j += 1
        if values and values[-1] == v:
            ends[-1] = end
        else:
            ends.append(end)
            values.append(v)
    return StepFn._raw(f.start, tuple(ends), tuple(values))


def _add(x, y):
    return x + y


def _sub(x, y):
    return x - y


def fn_add(f: StepFn, g: StepFn) -> StepFn:
    return combine(_add, f, g)


def fn_sub(f: StepFn, g: StepFn) -> StepFn:
    return combine(_sub, f, g)


def meet(f: StepFn, g: StepFn) -> StepFn:
    return combine(min, f, g)


def join(f: StepFn, g: StepFn) -> StepFn:
    return combine(max, f, g)


def scale(c, f: StepFn) -> StepFn:
    c = to_fraction(c)
    if c == 0:
        return StepFn._raw(f.start, (f.ends[-1],), (Fraction(0),))
    return StepFn._raw(f.start, f.ends, tuple(c * v for v in f.values))


def fn_abs(f: StepFn) -> StepFn:
    return f.map_values(abs)


def sup_norm(f: StepFn) -> Fraction:
    return max(abs(v) for v in f.values)


def shift(f: StepFn, delta: Ord) -> StepFn:
    """Translate ``f`` by left addition: the result lives on ``(delta + start, delta + end]``."""
    # left addition is strictly increasing, so cell order survives
    return StepFn._raw(
        add(delta, f.start),
        tuple(add(delta, e) for e in f.ends),
        f.values,
    )


def glue(g: StepFn, f: StepFn) -> StepFn:
    """``g`` on ``(0, gamma1]`` followed by ``f`` translated past ``gamma1``."""
    if g.start or f.start:
        raise ValueError("glue expects functions on intervals starting at 1")
    moved = shift(f, g.domain_end)
    return StepFn(list(zip(g.ends, g.values)) + list(zip(moved.ends, moved.values)))


def restrict(f: StepFn, lo: Ord, hi: Ord) -> list[tuple[Ord, Fraction]]:
    """Cells of ``f`` clipped to ``(lo, hi]``, with the last one ending at ``hi``."""
    if lo < f.start or hi > f.ends[-1] or not lo < hi:
        raise ValueError(f"({lo}, {hi}] is not inside the domain of f")
    i = bisect_left(f.ends, lo)
    if i < len(f.ends) and f.ends[i] == lo:
        i += 1
    out = []
    while f.ends[i] < hi:
        out.append((f.ends[i], f.values[i]))
        i += 1
    out.append((hi, f.values[i]))
    return out


def vanishes_at_end(f: StepFn) -> bool:
    return f.values[-1] == 0


def am_member(f: StepFn) -> bool:
    """Whether ``f`` satisfies ``f(w*(n-1)+1) / n == f(w*n)`` for every ``n >= 1``."""
    w2 = omega_pow(2)
    if f.start or f.domain_end != w2:
        raise ValueError("am_member expects a function on [1, w^2]")
    if not vanishes_at_end(f):
        raise ValueError("am_member expects a function vanishing at w^2")
    # past the last breakpoint f is 0, so both sides vanish
    last = f.breakpoints[-1] if f.breakpoints else ZERO
    for n in range(1, last.coefficient(1) + 3):
        left = f.eval(Ord(((1, n - 1), (0, 1)) if n > 1 else ((0, 1),)))
        right = f.eval(omega_pow(1, n))
        if left / n != right:
            return False
    return True
