"""Constructive operators between spaces of step functions on ordinal intervals.

The chain for ``alpha >= 2`` is

    f  --R-->  coefficients over [1, w^alpha]  --iota-->  c_00  --S-->  C_0[1, w^2)

and the SPR embedding pairs ``S(R f)`` with ``f`` itself, either as an
:class:`FnPair` or glued into a single interval.  :func:`urysohn_embed` moves
``C[1, w^alpha]`` into a larger ordinal interval while keeping point
evaluations (the witnesses ``t -> s_t``).
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .ordinal import ZERO, Ord, add, ell, floor_level, omega_pow, subtract
from .seqspace import FinSeq, reindex
from .stepfn import FnPair, StepFn, glue, restrict, vanishes_at_end

__all__ = [
    "LinOperator",
    "basis_x",
    "S",
    "r_support",
    "R",
    "R2",
    "T",
    "T_glued",
    "T_glued_w2",
    "interleave",
    "self_embed_w2",
    "self_embed_operator",
    "urysohn_embed",
    "spr_embed_into",
]

HALF = Fraction(1, 2)
W2 = omega_pow(2)


@dataclass(frozen=True)
class LinOperator:
    """A linear map between step-function spaces plus the properties it claims.

    Claims are metadata; the ``spr`` module and the test-suite check them.
    ``witness`` maps a source point ``t`` to a target point ``s_t`` with
    ``apply(f)(s_t) == f(t)`` when the operator has that property.
    """

    name: str
    source_domain: Ord
    target_domain: Ord
    apply: Callable[[StepFn], StepFn] = field(repr=False)
    isometric: bool = False
    positive: bool = False
    unital: bool = False
    spr_constant: Optional[Fraction] = None
    witness: Optional[Callable[[Ord], Ord]] = field(default=None, repr=False)

    def __call__(self, f: StepFn) -> StepFn:
        if f.start or f.domain_end != self.source_domain:
            raise ValueError(
                f"{self.name} expects a function on [1, {self.source_domain}], "
                f"got domain end {f.domain_end}"
            )
        return self.apply(f)

    def compose(self, inner: "LinOperator", name: str | None = None, **claims) -> "LinOperator":
        """``self`` after ``inner``."""
        if inner.target_domain != self.source_domain:
            raise ValueError("operator domains do not chain")
        witness = None
        if inner.witness is not None and self.witness is not None:
            outer_w, inner_w = self.witness, inner.witness
            witness = lambda t: outer_w(inner_w(t))  # noqa: E731
        return LinOperator(
            name=name or f"{self.name}.{inner.name}",
            source_domain=inner.source_domain,
            target_domain=self.target_domain,
            apply=lambda f: self.apply(inner.apply(f)),
            witness=witness,
            **claims,
        )


def _point(p: int, q: int) -> Ord:
    """The ordinal ``w*p + q``."""
    if p == 0:
        return Ord.from_int(q)
    return Ord._raw(((1, p), (0, q)) if q else ((1, p),))


def _check_domain(f: StepFn, gamma: Ord, what: str) -> None:
    if f.start or f.domain_end != gamma:
        raise ValueError(f"{what} expects a function on [1, {gamma}], got domain end {f.domain_end}")


def basis_x(n: int) -> StepFn:
    """The n-th function of the isometric SPR copy of c_0 in C_0[1, w^2).

    Value 1 at the point ``n``, ``1/2`` on the block ``(w*n, w*(n+1)]`` and
    ``1/2`` at each point ``w*(m-1) + n`` for ``2 <= m <= n``.
    """
    if n < 1:
        raise ValueError("basis_x is indexed from 1")
    cells = []
    if n > 1:
        cells.append((_point(0, n - 1), 0))
    cells.append((_point(0, n), 1))
    for p in range(1, n):
        # block p+1 carries the singleton w*p + n
        cells.append((_point(p, n - 1), 0))
        cells.append((_point(p, n), HALF))
    cells.append((_point(n, 0), 0))
    cells.append((_point(n + 1, 0), HALF))
    cells.append((W2, 0))
    return StepFn(cells)


def _natural_index(key: Ord) -> int:
    if not key.terms or key.terms[0][0] != 0:
        raise ValueError(f"S expects natural-number indices, got {key}")
    return key.terms[0][1]


def S(lam: FinSeq) -> StepFn:
    """``sum_n lam_n * basis_x(n)``, built block by block.

    Point ``n`` carries ``lam_n``; inside block ``(w*p, w*(p+1)]`` the value is
    ``lam_p / 2`` except at ``w*p + q`` with ``q > p``, where it is
    ``(lam_p + lam_q) / 2``.
    """
    coeffs = {_natural_index(k): v for k, v in lam.items()}
    if not coeffs:
        return StepFn([(W2, 0)])
    support = sorted(coeffs)
    cells: list[tuple[Ord, Fraction]] = []

    def emit_block(p: int, base: Fraction, spikes: list[tuple[int, Fraction]]):
        prev = 0
        for q, v in spikes:
            if q - 1 > prev:
                cells.append((_point(p, q - 1), base))
            cells.append((_point(p, q), v))
            prev = q
        cells.append((_point(p + 1, 0), base))

    emit_block(0, Fraction(0), [(q, coeffs[q]) for q in support])
    for p in range(1, support[-1] + 1):
        base = coeffs.get(p, Fraction(0)) * HALF
        spikes = [(q, base + coeffs[q] * HALF) for q in support if q > p]
        emit_block(p, base, spikes)
    cells.append((W2, 0))
    return StepFn(cells)


def r_support(f: StepFn, alpha: int) -> set[Ord]:
    """Finite set containing every ``t`` where ``f(t) != f(ell(t))``, plus ``w^alpha``.

    ``t`` and ``ell(t)`` fall in different cells exactly when some breakpoint
    ``b`` satisfies ``t <= b < ell(t)``; at level ``j`` those ``t`` are
    ``floor_level(b, j+1) + w^j * r`` with ``1 <= r <= k_j(b)``.
    """
    top = omega_pow(alpha)
    out = {top}
    for b in f.breakpoints:
        for e, k in b.terms:
            if e >= alpha:
                continue
            head = floor_level(b, e + 1).terms
            for r in range(1, k + 1):
                out.add(Ord._raw(head + ((e, r),)))
    return out


def R(f: StepFn, alpha: int) -> FinSeq:
    """Coefficients ``a(w^alpha) = f(w^alpha)/2`` and ``a(t) = (f(t) - f(ell(t)))/2``."""
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    top = omega_pow(alpha)
    _check_domain(f, top, "R")
    entries = {}
    for t in r_support(f, alpha):
        if t == top:
            entries[t] = f.eval(t) * HALF
        else:
            entries[t] = (f.eval(t) - f.eval(ell(t, alpha))) * HALF
    return FinSeq(entries, bound=top)


def R2(f: StepFn) -> FinSeq:
    """Coefficient map on C_0[1, w^2): ``a(w*n) = f(w*n)/2``, ``a(w*(n-1)+m) = (f(w*(n-1)+m) - f(w*n))/2``."""
    _check_domain(f, W2, "R2")
    if not vanishes_at_end(f):
        raise ValueError("R2 expects a function vanishing at w^2")
    # with f(w^2) = 0 this is R at alpha = 2, whose top coefficient vanishes
    return R(f, 2)


def T(f: StepFn, alpha: int) -> FnPair:
    """``(S(iota(R f)), f)`` in ``C_0[1, w^2)`` (+)_inf ``C[1, w^alpha]``."""
    if alpha < 2:
        raise ValueError("T needs alpha >= 2")
    _check_domain(f, omega_pow(alpha), "T")
    return FnPair(S(reindex(R(f, alpha), alpha)), f)


def _spr_constant(alpha: int) -> Fraction:
    return Fraction(6 * (alpha + 1))


def T_glued(alpha: int) -> LinOperator:
    """T with both components glued into ``[1, w^2 + w^alpha] = [1, w^alpha]``."""
    if alpha < 3:
        raise ValueError("the glued embedding into [1, w^alpha] needs alpha >= 3")
    top = omega_pow(alpha)

    def apply(f: StepFn) -> StepFn:
        return glue(T(f, alpha).left, f)

    return LinOperator(
        name=f"T-glued:alpha={alpha}",
        source_domain=top,
        target_domain=add(W2, top),
        apply=apply,
        isometric=True,
        spr_constant=_spr_constant(alpha),
        witness=lambda t: add(W2, t),
    )


def T_glued_w2() -> LinOperator:
    """T at alpha = 2 glued into ``[1, w^2 * 2]``."""

    def apply(f: StepFn) -> StepFn:
        return glue(T(f, 2).left, f)

    return LinOperator(
        name="T-glued-w2",
        source_domain=W2,
        target_domain=omega_pow(2, 2),
        apply=apply,
        isometric=True,
        spr_constant=_spr_constant(2),
        witness=lambda t: add(W2, t),
    )


def _blocks(f: StepFn) -> list[list[tuple[Ord, Fraction]]]:
    # cells of f inside each block (w*(n-1), w*n], as offsets in (0, w];
    # blocks after the returned ones are identically zero
    last = f.breakpoints[-1] if f.breakpoints else ZERO
    out = []
    for n in range(1, last.coefficient(1) + 2):
        lo, hi = _point(n - 1, 0), _point(n, 0)
        out.append([(subtract(e, lo), v) for e, v in restrict(f, lo, hi)])
    return out


def interleave(f1: StepFn, f2: StepFn) -> StepFn:
    """Block ``n`` of f1 goes to block ``2n-1``, block ``n`` of f2 to block ``2n``."""
    for f in (f1, f2):
        _check_domain(f, W2, "interleave")
        if not vanishes_at_end(f):
            raise ValueError("interleave expects functions vanishing at w^2")
    b1, b2 = _blocks(f1), _blocks(f2)
    cells = []
    for k in range(1, 2 * max(len(b1), len(b2)) + 1):
        source = b1 if k % 2 else b2
        n = (k + 1) // 2
        lo = _point(k - 1, 0)
        if n <= len(source):
            cells.extend((add(lo, off), v) for off, v in source[n - 1])
        else:
            cells.append((_point(k, 0), Fraction(0)))
    cells.append((W2, Fraction(0)))
    return StepFn(cells)


def self_embed_w2(f: StepFn) -> StepFn:
    """Isometric SPR self-embedding of C_0[1, w^2]: interleave ``S(iota(R2 f))`` with ``f``."""
    return interleave(S(reindex(R2(f), 2)), f)


def _self_embed_witness(t: Ord) -> Ord:
    # block n of f lands in block 2n at the same offset
    if t == W2:
        return W2
    p, q = t.coefficient(1), t.coefficient(0)
    if q:
        return _point(2 * p + 1, q)
    return _point(2 * p, 0)


def self_embed_operator() -> LinOperator:
    return LinOperator(
        name="self-w2",
        source_domain=W2,
        target_domain=W2,
        apply=self_embed_w2,
        isometric=True,
        spr_constant=Fraction(12),
        witness=_self_embed_witness,
    )


def _c0_image(
    f: StepFn, c: Fraction, src_lo: Ord, level: int, tgt_lo: Ord
) -> list[tuple[Ord, Fraction]]:
    """Image of ``f - c`` on the open copy ``(src_lo, src_lo + w^level)``.

    ``c`` is the value of ``f`` at ``src_lo + w^level``, so ``f - c`` lies in
    C_0 of that copy.  Cells cover ``(tgt_lo, tgt_lo + w^level]`` and vanish
    at the top.  Block ``n`` contributes ``(f - c)(top_n) * g_n`` plus the
    recursive image of ``f - f(top_n)`` on the open block, where ``g_n`` is
    the indicator of the matching target block.
    """
    src_top = add(src_lo, omega_pow(level))
    if level == 1:
        # singleton blocks: the image is f - c translated, cell by cell
        return [(add(tgt_lo, subtract(e, src_lo)), v - c) for e, v in restrict(f, src_lo, src_top)]
    step = omega_pow(level - 1)
    bps = f.breakpoints
    hi = bisect_left(bps, src_top)
    last_inner = bps[hi - 1] if hi and bps[hi - 1] > src_lo else None
    nblocks = subtract(last_inner, src_lo).coefficient(level - 1) + 1 if last_inner else 0
    cells: list[tuple[Ord, Fraction]] = []
    for n in range(1, nblocks + 1):
        blk_src_lo = add(src_lo, omega_pow(level - 1, n - 1))
        blk_tgt_lo = add(tgt_lo, omega_pow(level - 1, n - 1))
        top_value = f.eval(add(blk_src_lo, step))
        v = top_value - c
        sub = _c0_image(f, top_value, blk_src_lo, level - 1, blk_tgt_lo)
        if v:
            sub = [(e, w + v) for e, w in sub]
        cells.extend(sub)
    cells.append((add(tgt_lo, omega_pow(level)), Fraction(0)))
    return cells


def urysohn_embed(alpha: int, gamma: Ord, copies: int = 1, offset: Ord = ZERO) -> LinOperator:
    """Positive unital isometry ``C[1, w^alpha * copies] -> C[1, gamma]`` with point witnesses.

    Copy ``i`` of ``[1, w^alpha]`` is sent onto ``(offset + w^alpha*(i-1), offset + w^alpha*i]``
    through the nested block recursion; the clopen sets ``W_i`` carrying the
    top values partition ``[1, gamma]``.  With ``offset = 0`` and
    ``gamma = w^alpha * copies`` this is the identity.  The witness of ``t``
    is ``offset + t``.
    """
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    if copies < 1:
        raise ValueError("copies must be positive")
    unit = omega_pow(alpha)
    source = omega_pow(alpha, copies)
    if add(offset, source) > gamma:
        raise ValueError(
            f"[1, {gamma}] is too small: need offset + w^{alpha}*{copies} <= gamma"
        )

    def apply(f: StepFn) -> StepFn:
        _check_domain(f, source, "urysohn_embed")
        cells: list[tuple[Ord, Fraction]] = []
        first_top = f.eval(unit)
        if offset:
            cells.append((offset, first_top))
        for i in range(1, copies + 1):
            src_lo = omega_pow(alpha, i - 1)
            tgt_lo = add(offset, src_lo)
            c = f.eval(omega_pow(alpha, i))
            cells.extend((e, v + c) for e, v in _c0_image(f, c, src_lo, alpha, tgt_lo))
        end = add(offset, source)
        if end < gamma:
            cells.append((gamma, f.eval(source)))
        return StepFn(cells)

    name = f"urysohn:alpha={alpha},gamma={gamma}"
    if copies != 1:
        name += f",copies={copies}"
    if offset:
        name += f",offset={offset}"
    return LinOperator(
        name=name,
        source_domain=source,
        target_domain=gamma,
        apply=apply,
        isometric=True,
        positive=True,
        unital=True,
        witness=lambda t: add(offset, t),
    )


def spr_embed_into(alpha: int, gamma: Ord) -> LinOperator:
    """Isometric SPR embedding of ``C[1, w^alpha]`` into ``C[1, gamma]``.

    ``alpha >= 3`` needs ``gamma >= w^alpha``; ``alpha = 2`` needs two points
    in the second derived set, i.e. ``gamma >= w^2 * 2``.
    """
    if alpha <= 1:
        raise ValueError(
            "no infinite-dimensional subspace embeds in an SPR way into C[1, w]; alpha must be >= 2"
        )
    if alpha == 2:
        if gamma < omega_pow(2, 2):
            raise ValueError(
                "C[1, w^2] has no isometric SPR embedding into C[1, gamma] when "
                "[1, gamma] has a single point of order 2; need gamma >= w^2*2"
            )
        inner = T_glued_w2()
        outer = urysohn_embed(2, gamma, copies=2)
    else:
        if gamma < omega_pow(alpha):
            raise ValueError(f"need gamma >= w^{alpha}")
        inner = T_glued(alpha)
        outer = urysohn_embed(alpha, gamma)
    return outer.compose(
        inner,
        name=f"spr-into:alpha={alpha},gamma={gamma}",
        isometric=True,
        spr_constant=_spr_constant(alpha),
    )
