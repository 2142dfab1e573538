"""Frobenius pushforward slopes, the canonical-filtration ledger, and instability bounds.

All quantities are exact rationals relative to a fixed polarization.  The
invariants of the cotangent sheaf (``mu_omega``, ``lmax_omega``,
``i_omega``) are user inputs; nothing here tries to compute them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .citations import Citation
from .errors import HypothesisError, InvariantError, ValidationError
from .rational import as_rational, binomial, format_rational, require_prime
from .truncated import bound_instab_tl, rank_tl

_ZERO = Fraction(0)


@dataclass(frozen=True)
class VarietyContext:
    n: int
    p: int
    mu_omega: Fraction
    lmax_omega: Optional[Fraction] = None
    i_omega: Optional[Fraction] = None
    omega_semistable: bool = False
    omega_strongly_semistable: bool = False

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n!r}")
        require_prime(self.p)
        object.__setattr__(self, "mu_omega", as_rational(self.mu_omega))
        if self.lmax_omega is not None:
            object.__setattr__(self, "lmax_omega", as_rational(self.lmax_omega))
        # strongly semistable implies semistable
        if self.omega_strongly_semistable:
            object.__setattr__(self, "omega_semistable", True)
        i_omega = None if self.i_omega is None else as_rational(self.i_omega)
        if i_omega is not None and i_omega < 0:
            raise ValidationError("i_omega must be >= 0")
        if self.omega_semistable:
            if i_omega not in (None, _ZERO):
                raise ValidationError("a semistable cotangent sheaf has i_omega = 0")
            i_omega = _ZERO
        object.__setattr__(self, "i_omega", i_omega)

    @property
    def top_degree(self) -> int:
        """``n(p-1)``: last nonzero step of the canonical filtration."""
        return self.n * (self.p - 1)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "mu_omega": format_rational(self.mu_omega),
            "lmax_omega": None
            if self.lmax_omega is None
            else format_rational(self.lmax_omega),
            "i_omega": None if self.i_omega is None else format_rational(self.i_omega),
            "omega_semistable": self.omega_semistable,
            "omega_strongly_semistable": self.omega_strongly_semistable,
        }

    @classmethod
    def from_json(cls, data) -> "VarietyContext":
        if not isinstance(data, dict):
            raise ValidationError("context JSON must be an object")
        unknown = set(data) - {
            "n",
            "p",
            "mu_omega",
            "lmax_omega",
            "i_omega",
            "omega_semistable",
            "omega_strongly_semistable",
        }
        if unknown:
            raise ValidationError(f"unknown context keys: {sorted(unknown)}")
        try:
            n, p, mu = data["n"], data["p"], data["mu_omega"]
        except KeyError as exc:
            raise ValidationError(f"context JSON missing {exc}") from exc
        lmax = data.get("lmax_omega")
        i_om = data.get("i_omega")
        return cls(
            n=n,
            p=p,
            mu_omega=as_rational(mu),
            lmax_omega=None if lmax is None else as_rational(lmax),
            i_omega=None if i_om is None else as_rational(i_om),
            omega_semistable=bool(data.get("omega_semistable", False)),
            omega_strongly_semistable=bool(data.get("omega_strongly_semistable", False)),
        )


@dataclass(frozen=True)
class SheafStats:
    rank: int
    slope: Optional[Fraction] = None
    instability: Fraction = _ZERO

    def __post_init__(self):
        if isinstance(self.rank, bool) or not isinstance(self.rank, int) or self.rank < 1:
            raise ValidationError(f"rank must be a positive integer, got {self.rank!r}")
        if self.slope is not None:
            object.__setattr__(self, "slope", as_rational(self.slope))
        inst = as_rational(self.instability)
        if inst < 0:
            raise ValidationError("instability must be >= 0")
        object.__setattr__(self, "instability", inst)

    @property
    def semistable(self) -> bool:
        return self.instability == 0


class PushforwardLedger(NamedTuple):
    rank: int
    slope: Fraction
    degree: Fraction


class FiltrationStep(NamedTuple):
    l: int
    rank: int
    slope_offset: Fraction


class Advice(NamedTuple):
    conclusion: str
    citation: Citation


def mu_pushforward(ctx: VarietyContext, mu_e, m: int = 1) -> Fraction:
    """Slope of the m-fold Frobenius pushforward of a sheaf of slope ``mu_e``."""
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    pm = ctx.p**m
    return Fraction(ctx.n * (pm - 1), 2 * pm) * ctx.mu_omega + as_rational(mu_e) / pm


def canonical_filtration_ranks(ctx: VarietyContext, r_e: int) -> list[FiltrationStep]:
    """Graded pieces ``E (x) T^l(Omega^1)`` of ``F^* F_* E`` for ``0 <= l <= n(p-1)``."""
    if r_e < 1:
        raise ValidationError(f"rank must be >= 1, got {r_e}")
    return [
        FiltrationStep(l, r_e * rank_tl(ctx.n, ctx.p, l), l * ctx.mu_omega)
        for l in range(ctx.top_degree + 1)
    ]


def filtration_degree(ctx: VarietyContext, stats: SheafStats) -> Fraction:
    """Degree of ``F^* F_* E`` summed over the canonical filtration."""
    mu_e = stats.slope
    return sum(
        (step.rank * (mu_e + step.slope_offset) for step in canonical_filtration_ranks(ctx, stats.rank)),
        _ZERO,
    )


def pushforward_stats(ctx: VarietyContext, stats: SheafStats) -> PushforwardLedger:
    if stats.slope is None:
        raise ValidationError("pushforward needs the slope of E")
    rank = ctx.p**ctx.n * stats.rank
    slope = mu_pushforward(ctx, stats.slope, 1)
    degree = rank * slope
    # pulling back by Frobenius multiplies degrees by p
    if ctx.p * degree != filtration_degree(ctx, stats):
        raise InvariantError("pushforward degree disagrees with the canonical filtration")
    return PushforwardLedger(rank, slope, degree)


def pushforward_forms_coeff(n: int, p: int, i: int) -> tuple[int, Fraction]:
    """(rank, degree / mu_omega) of ``F_* Omega^i``."""
    if not 0 <= i <= n:
        raise ValidationError(f"form degree i={i} outside [0, {n}]")
    c = binomial(n, i)
    pn1 = p ** (n - 1)
    coeff = Fraction(n * c * pn1 * (p - 1), 2) + i * c * pn1
    return c * p**n, coeff


def deg_pushforward_forms(ctx: VarietyContext, i: int) -> tuple[int, Fraction]:
    rank, coeff = pushforward_forms_coeff(ctx.n, ctx.p, i)
    return rank, coeff * ctx.mu_omega


def bound_langer_gap(r: int, p: int, i_e, lmax_omega) -> Fraction:
    """Upper bound on ``L_max(E) - L_min(E)``."""
    if r < 1:
        raise ValidationError(f"rank must be >= 1, got {r}")
    require_prime(p)
    i_e = as_rational(i_e)
    if i_e < 0:
        raise ValidationError("instability must be >= 0")
    return Fraction(r - 1, p) * max(_ZERO, as_rational(lmax_omega)) + i_e


def bound_tensor(parts, p: int, lmax_omega) -> Fraction:
    """Instability bound for a tensor product of the given sheaves."""
    parts = list(parts)
    if not parts:
        raise ValidationError("tensor bound needs at least one factor")
    require_prime(p)
    m = len(parts)
    excess = sum(s.rank for s in parts) - m
    return Fraction(excess, p) * max(_ZERO, as_rational(lmax_omega)) + sum(
        (s.instability for s in parts), _ZERO
    )


def _need_mu_nonnegative(ctx: VarietyContext, force: bool) -> None:
    if ctx.mu_omega < 0 and not force:
        raise HypothesisError("requires mu(Omega^1_X) >= 0")


def bound_sun(ctx: VarietyContext, r_e: int, i_tensor_by_l, *, force: bool = False) -> Fraction:
    """``p^{n-1} * rk(E) * max_l I(E (x) T^l(Omega^1))``."""
    entries = [as_rational(x) for x in i_tensor_by_l]
    if len(entries) != ctx.top_degree + 1:
        raise ValidationError(
            f"expected {ctx.top_degree + 1} per-l entries, got {len(entries)}"
        )
    if any(x < 0 for x in entries):
        raise ValidationError("instabilities must be >= 0")
    if r_e < 1:
        raise ValidationError(f"rank must be >= 1, got {r_e}")
    _need_mu_nonnegative(ctx, force)
    return ctx.p ** (ctx.n - 1) * r_e * max(entries)


def bound_pushforward_caseI(ctx: VarietyContext, r_e: int, *, force: bool = False) -> Fraction:
    """Instability bound for ``F_* E`` (E semistable) when Omega^1 is semistable of slope <= 0."""
    if r_e < 1:
        raise ValidationError(f"rank must be >= 1, got {r_e}")
    if not force:
        if not ctx.omega_semistable:
            raise HypothesisError("requires Omega^1_X slope semistable")
        if ctx.mu_omega > 0:
            raise HypothesisError("requires mu(Omega^1_X) <= 0")
    n, p = ctx.n, ctx.p
    return -Fraction(n * (p - 1) * p ** (n - 1) * r_e, 2) * ctx.mu_omega


def bound_pushforward_caseII(
    ctx: VarietyContext, stats: SheafStats, *, force: bool = False
) -> tuple[list[Fraction], Fraction]:
    """Per-l bounds on ``I(E (x) T^l(Omega^1))`` and the resulting bound on ``I(F_* E)``.

    Each entry chains the tensor bound with the truncated-power bound for
    ``T^l(Omega^1)``; the total feeds the per-l list through :func:`bound_sun`.
    """
    if ctx.lmax_omega is None:
        raise ValidationError("case II bound needs lmax_omega")
    if ctx.i_omega is None:
        raise ValidationError("case II bound needs i_omega")
    _need_mu_nonnegative(ctx, force)
    n, p = ctx.n, ctx.p
    per_l = []
    for l in range(ctx.top_degree + 1):
        t_l = SheafStats(
            rank=rank_tl(n, p, l),
            instability=bound_instab_tl(n, p, l, ctx.i_omega, ctx.lmax_omega),
        )
        per_l.append(bound_tensor([stats, t_l], p, ctx.lmax_omega))
    total = bound_sun(ctx, stats.rank, per_l, force=force)
    return per_l, total


def stability_advisor(
    ctx: VarietyContext,
    *,
    e_strongly_semistable: bool = False,
    e_semistable: bool = False,
    mu_max_omega_nonpositive: bool = False,
) -> list[Advice]:
    """Sufficient stability conclusions that fire under the asserted flags.

    Purely qualitative; nothing is verified about actual sheaves.
    """
    e_ss = e_semistable or e_strongly_semistable
    om_ss = ctx.omega_semistable
    om_sss = ctx.omega_strongly_semistable
    mu = ctx.mu_omega
    out: list[Advice] = []

    mr = mu_max_omega_nonpositive or (om_ss and mu <= 0)
    if mr:
        text = "every slope semistable sheaf on X is strongly semistable"
        if e_ss and not e_strongly_semistable:
            text += "; in particular E is strongly semistable"
        out.append(Advice(text, Citation.MEHTA_RAMANATHAN))
    if om_sss:
        out.append(
            Advice(
                "T^l(Omega^1_X) strongly semistable for 0 <= l <= n(p-1)",
                Citation.SEMISTAB_TL,
            )
        )
    if e_strongly_semistable:
        out.append(
            Advice("T^l(E) strongly semistable for 0 <= l <= rk(E)(p-1)", Citation.SEMISTAB_TL)
        )
    if om_sss and mu >= 0 and e_strongly_semistable:
        out.append(Advice("F_*E semistable", Citation.FRO_DIRIM))
    if om_ss and mu == 0 and e_ss:
        out.append(Advice("F_*E strongly semistable", Citation.FRO_DIRIM))
    if om_ss and mu == 0:
        out.append(
            Advice(
                "B^i (1 <= i <= n) and Z^i (1 <= i <= n-1) strongly semistable of slope 0",
                Citation.BXZX0,
            )
        )
    return out
