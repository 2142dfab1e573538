"""Truncated symmetric powers T^l of graded sheaves.

T^l(V) is the degree-l part of Sym(V) modulo p-th powers of a basis, so its
rank counts exponent vectors with entries in [0, p-1] summing to l.  For a
direct sum of strongly semistable pieces, T^l splits into summands indexed by
block exponent vectors ``c`` with ``0 <= c_i <= r_i(p-1)``; the summand has
slope ``sum c_i mu_i`` and rank ``prod rank_tl(r_i, p, c_i)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .errors import ValidationError, ZeroSheafError
from .hn import SlopeProfile, instability
from .rational import (
    as_rational,
    binomial,
    bounded_compositions,
    format_rational,
    require_prime,
)


def _check_rpl(r: int, p: int, l: int) -> None:
    if r < 1:
        raise ValidationError(f"rank must be >= 1, got {r}")
    require_prime(p)
    if l < 0:
        raise ValidationError(f"l must be >= 0, got {l}")


def rank_tl(r: int, p: int, l: int) -> int:
    """Rank of T^l for a rank-r sheaf, by the alternating-sum formula.

    Inclusion-exclusion over the ``q`` slots forced to exceed ``p - 1``.
    """
    _check_rpl(r, p, l)
    total = 0
    for q in range(l // p + 1):
        total += (-1) ** q * binomial(r, q) * binomial(r + l - q * p - 1, l - q * p)
    return total


def rank_tl_oracle(r: int, p: int, l: int) -> int:
    """Same quantity as :func:`rank_tl`, by counting exponent vectors."""
    _check_rpl(r, p, l)
    return sum(1 for _ in bounded_compositions(l, [p - 1] * r))


def dvec(r: int, p: int, l: int) -> tuple[int, ...]:
    """Greedy exponent vector ``(p-1, ..., p-1, s, 0, ..., 0)`` of length r.

    ``t = l // (p-1)`` leading entries are ``p - 1`` and ``s = l - t(p-1)``.
    Paired with descending unit slopes it picks the top summand of T^l.
    """
    _check_rpl(r, p, l)
    if l > r * (p - 1):
        raise ZeroSheafError(f"l={l} exceeds r(p-1)={r * (p - 1)}")
    t, s = divmod(l, p - 1)
    out = [p - 1] * t
    if t < r:
        out.append(s)
    out.extend([0] * (r - len(out)))
    return tuple(out)


def dvec_literal(r: int, p: int, l: int) -> tuple[int, ...]:
    """The vector read with ``l // p`` leading ``p - 1`` entries and ``l - (l//p)p`` next.

    Kept only to exhibit that its entries generally do not sum to ``l``.
    """
    _check_rpl(r, p, l)
    lp = l // p
    out = [p - 1] * min(lp, r)
    if len(out) < r:
        out.append(l - lp * p)
    out.extend([0] * (r - len(out)))
    return tuple(out[:r])


@dataclass(frozen=True)
class TruncatedDecomposition:
    """Slope -> rank map of the summands of T^l(E)."""

    l: int
    p: int
    pieces: tuple[tuple[Fraction, int], ...]  # slopes strictly descending

    @property
    def total_rank(self) -> int:
        return sum(rk for _, rk in self.pieces)

    @property
    def mu_max(self) -> Fraction:
        return self.pieces[0][0]

    @property
    def mu_min(self) -> Fraction:
        return self.pieces[-1][0]

    def as_dict(self) -> dict[Fraction, int]:
        return dict(self.pieces)

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "p": self.p,
            "pieces": [
                {"slope": format_rational(s), "rank": str(rk)} for s, rk in self.pieces
            ],
            "total_rank": str(self.total_rank),
        }


def _check_profile_l(profile: SlopeProfile, p: int, l: int) -> None:
    require_prime(p)
    if l < 0:
        raise ValidationError(f"l must be >= 0, got {l}")
    top = profile.total_rank * (p - 1)
    if l > top:
        raise ZeroSheafError(f"T^{l} vanishes: l exceeds r(p-1)={top}")


def tl_decomposition(profile: SlopeProfile, p: int, l: int) -> TruncatedDecomposition:
    _check_profile_l(profile, p, l)
    caps = [b.rank * (p - 1) for b in profile.blocks]
    acc: dict[Fraction, int] = {}
    for c in bounded_compositions(l, caps):
        rk = prod(rank_tl(b.rank, p, ci) for b, ci in zip(profile.blocks, c))
        if rk == 0:
            continue
        slope = sum((ci * b.slope for b, ci in zip(profile.blocks, c)), Fraction(0))
        acc[slope] = acc.get(slope, 0) + rk
    pieces = tuple((s, acc[s]) for s in sorted(acc, reverse=True))
    return TruncatedDecomposition(l, p, pieces)


def tl_extremes(profile: SlopeProfile, p: int, l: int) -> tuple[Fraction, Fraction]:
    """(mu_max, mu_min) of T^l(E) from the greedy vector against unit slopes."""
    _check_profile_l(profile, p, l)
    xs = profile.unit_slopes()
    d = dvec(len(xs), p, l)
    mu_max = sum((di * x for di, x in zip(d, xs)), Fraction(0))
    mu_min = sum((di * x for di, x in zip(d, reversed(xs))), Fraction(0))
    return mu_max, mu_min


def instability_tl_exact(profile: SlopeProfile, p: int, l: int) -> Fraction:
    hi, lo = tl_extremes(profile, p, l)
    return hi - lo


def _tl2_factor(r: int, p: int, l: int) -> int:
    return min(l, (r // 2) * (p - 1))


def bound_tl2(profile: SlopeProfile, p: int, l: int) -> Fraction:
    """``min{l, [r/2](p-1)} * I(E)`` for a direct sum of strongly semistable pieces."""
    require_prime(p)
    if l < 0:
        raise ValidationError(f"l must be >= 0, got {l}")
    return _tl2_factor(profile.total_rank, p, l) * instability(profile)


def tl2_case_value(r: int, p: int, l: int, i_e) -> Fraction:
    """Four-case closed form for ``sum_{i<=[r/2]} (d_i - d_{r-i+1}) * I(E)``.

    The top degree ``l = r(p-1)`` is folded into the ``r(p-1) - l`` branches,
    where it gives 0.
    """
    _check_rpl(r, p, l)
    if l > r * (p - 1):
        raise ZeroSheafError(f"l={l} exceeds r(p-1)={r * (p - 1)}")
    i_e = as_rational(i_e)
    half = r // 2
    if l <= half * (p - 1):
        coeff = l
    elif r % 2 == 0:
        coeff = r * (p - 1) - l
    elif l <= (half + 1) * (p - 1):
        coeff = (p - 1) * half
    else:
        coeff = r * (p - 1) - l
    return coeff * i_e


def tl2_pairing_coefficient(r: int, p: int, l: int) -> int:
    """``sum_{i<=[r/2]} (d_i - d_{r-i+1})`` computed from :func:`dvec` directly."""
    d = dvec(r, p, l)
    return sum(d[i] - d[r - 1 - i] for i in range(r // 2))


def bound_instab_tl(r: int, p: int, l: int, i_e, lmax_omega) -> Fraction:
    """``min{l, [r/2](p-1)} * ((r-1)/p * max{0, L_max(Omega)} + I(E))``."""
    _check_rpl(r, p, l)
    i_e = as_rational(i_e)
    if i_e < 0:
        raise ValidationError("instability must be >= 0")
    lmax = max(Fraction(0), as_rational(lmax_omega))
    return _tl2_factor(r, p, l) * (Fraction(r - 1, p) * lmax + i_e)
