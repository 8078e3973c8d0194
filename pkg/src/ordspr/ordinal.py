"""Ordinals below omega^omega in Cantor normal form.

An :class:`Ord` stores its CNF as a tuple of ``(exponent, coefficient)`` pairs
with exponents strictly descending and coefficients positive.  Python's tuple
ordering on that representation coincides with the ordinal order, which keeps
comparisons cheap; step functions compare ordinals constantly.
"""
from __future__ import annotations

import re
from typing import Iterable, Sequence

__all__ = [
    "Ord",
    "ZERO",
    "ONE",
    "OMEGA",
    "omega_pow",
    "compare",
    "add",
    "subtract",
    "beta0",
    "ell",
    "floor_level",
    "parse",
]


class Ord:
    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[int, int]] = ()):
        terms = tuple((int(e), int(k)) for e, k in terms)
        prev = None
        for e, k in terms:
            if e < 0 or k < 1:
                raise ValueError(f"invalid CNF term w^{e}*{k}")
            if prev is not None and e >= prev:
                raise ValueError("CNF exponents must be strictly descending")
            prev = e
        object.__setattr__(self, "terms", terms)

    @classmethod
    def _raw(cls, terms: tuple) -> "Ord":
        # trusted constructor for already-normalized terms
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def from_int(cls, n: int) -> "Ord":
        if n < 0:
            raise ValueError("ordinals are non-negative")
        return cls._raw(((0, n),) if n else ())

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[int]) -> "Ord":
        """Build from ``coeffs[j]`` = coefficient of ``w^j`` (ascending)."""
        return cls._raw(tuple((j, k) for j, k in reversed(list(enumerate(coeffs))) if k))

    def __setattr__(self, name, value):
        raise AttributeError("Ord is immutable")

    def __eq__(self, other):
        if isinstance(other, Ord):
            return self.terms == other.terms
        if isinstance(other, int):
            return self.terms == (((0, other),) if other else ())
        return NotImplemented

    def __hash__(self):
        return hash(self.terms)

    def __lt__(self, other):
        if not isinstance(other, Ord):
            return NotImplemented
        return self.terms < other.terms

    def __le__(self, other):
        if not isinstance(other, Ord):
            return NotImplemented
        return self.terms <= other.terms

    def __gt__(self, other):
        if not isinstance(other, Ord):
            return NotImplemented
        return self.terms > other.terms

    def __ge__(self, other):
        if not isinstance(other, Ord):
            return NotImplemented
        return self.terms >= other.terms

    def __add__(self, other):
        if isinstance(other, int):
            other = Ord.from_int(other)
        if not isinstance(other, Ord):
            return NotImplemented
        return add(self, other)

    def __radd__(self, other):
        if isinstance(other, int):
            return add(Ord.from_int(other), self)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Ord({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, k in self.terms:
            if e == 0:
                parts.append(str(k))
                continue
            base = "w" if e == 1 else f"w^{e}"
            parts.append(base if k == 1 else f"{base}*{k}")
        return " + ".join(parts)

    @property
    def degree(self) -> int:
        """Leading exponent; -1 for zero."""
        return self.terms[0][0] if self.terms else -1

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and self.terms[-1][0] > 0

    def coefficient(self, j: int) -> int:
        for e, k in self.terms:
            if e == j:
                return k
            if e < j:
                break
        return 0

    def coefficients(self, length: int) -> list[int]:
        """Ascending coefficient vector ``[k_0, ..., k_{length-1}]``."""
        out = [0] * length
        for e, k in self.terms:
            if e >= length:
                raise ValueError(f"{self} has a term of exponent >= {length}")
            out[e] = k
        return out

    def to_json(self) -> list[list[int]]:
        return [[e, k] for e, k in self.terms]

    @classmethod
    def from_json(cls, data) -> "Ord":
        if not isinstance(data, list) or any(
            not isinstance(p, list) or len(p) != 2 or not all(isinstance(v, int) for v in p)
            for p in data
        ):
            raise ValueError(f"malformed ordinal JSON: {data!r}")
        return cls((e, k) for e, k in data)


ZERO = Ord._raw(())
ONE = Ord._raw(((0, 1),))
OMEGA = Ord._raw(((1, 1),))


def omega_pow(e: int, k: int = 1) -> Ord:
    """``w^e * k``."""
    if k == 0:
        return ZERO
    return Ord._raw(((e, k),))


def compare(a: Ord, b: Ord) -> str:
    """Return ``"less"``, ``"equal"`` or ``"greater"``."""
    if a.terms == b.terms:
        return "equal"
    return "less" if a.terms < b.terms else "greater"


def add(a: Ord, b: Ord) -> Ord:
    """Ordinal sum ``a + b``; terms of ``a`` below b's leading exponent vanish."""
    if not b.terms:
        return a
    lead, k = b.terms[0]
    head = []
    for e, c in a.terms:
        if e > lead:
            head.append((e, c))
        elif e == lead:
            k += c
            break
        else:
            break
    return Ord._raw(tuple(head) + ((lead, k),) + b.terms[1:])


def subtract(a: Ord, b: Ord) -> Ord:
    """The unique ``c`` with ``b + c == a``; requires ``b <= a``."""
    if b > a:
        raise ValueError(f"cannot subtract {b} from smaller ordinal {a}")
    at, bt = a.terms, b.terms
    i = 0
    while i < len(bt) and i < len(at) and at[i] == bt[i]:
        i += 1
    if i == len(bt):
        return Ord._raw(at[i:])
    # first difference: same exponent with larger coefficient in a, or a's
    # exponent larger; everything of b from here on is absorbed
    e, k = at[i]
    be, bk = bt[i]
    if e == be:
        return Ord._raw(((e, k - bk),) + at[i + 1:])
    return Ord._raw(at[i:])


def _check_domain(t: Ord, alpha: int) -> None:
    if alpha < 0:
        raise ValueError("alpha must be a natural number")
    if not t.terms or t > omega_pow(alpha):
        raise ValueError(f"{t} is outside [1, w^{alpha}]")


def beta0(t: Ord, alpha: int) -> int:
    """Smallest CNF exponent of ``t``, with ``beta0(w^alpha) = alpha``."""
    _check_domain(t, alpha)
    return t.terms[-1][0]


def ell(t: Ord, alpha: int) -> Ord:
    """Round ``t`` up to the next limit of one level higher than beta0(t).

    Drops every term below ``w^(beta0(t)+1)`` and bumps that coefficient by
    one; fixes ``w^alpha``.
    """
    _check_domain(t, alpha)
    if t.terms == ((alpha, 1),):
        return t
    j = t.terms[-1][0] + 1
    head = [(e, k) for e, k in t.terms if e > j]
    return Ord._raw(tuple(head) + ((j, t.coefficient(j) + 1),))


def floor_level(t: Ord, j: int) -> Ord:
    """Largest ordinal ``<= t`` whose CNF exponents are all ``>= j``."""
    return Ord._raw(tuple((e, k) for e, k in t.terms if e >= j))


_TERM_RE = re.compile(
    r"^(?:(?P<w>[wω])(?:\^(?P<exp>\d+))?(?:\*(?P<k>\d+))?|(?P<n>\d+))$"
)


def parse(text: str) -> Ord:
    """Parse the textual syntax, e.g. ``"w^3*2 + w*5 + 7"``.

    Terms must appear in strictly descending exponent order.
    """
    if not isinstance(text, str):
        raise ValueError(f"expected a string, got {type(text).__name__}")
    s = text.replace(" ", "").replace("·", "*")
    if not s:
        raise ValueError("empty ordinal")
    if s == "0":
        return ZERO
    terms = []
    for part in s.split("+"):
        m = _TERM_RE.match(part)
        if m is None:
            raise ValueError(f"cannot parse ordinal term {part!r} in {text!r}")
        if m.group("n") is not None:
            e, k = 0, int(m.group("n"))
        else:
            e = int(m.group("exp")) if m.group("exp") is not None else 1
            k = int(m.group("k")) if m.group("k") is not None else 1
        if k == 0:
            raise ValueError(f"zero coefficient in {text!r}")
        terms.append((e, k))
    return Ord(terms)
