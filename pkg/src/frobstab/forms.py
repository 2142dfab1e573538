"""Ranks and degrees of the sheaves B^i (locally exact) and Z^i (locally closed forms).

Degrees are stored as coefficients of ``mu(Omega^1_X)``: every formula here
is linear in it, so one table covers every polarization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import SlopeOrderError, ValidationError
from .frobenius import pushforward_forms_coeff
from .hn import HNPolygon, SlopeProfile, polygon_of
from .rational import as_rational, binomial, format_rational, require_prime


class FormsRow(NamedTuple):
    i: int
    rank_b: int
    rank_z: int
    degb_coeff: Fraction
    degz_coeff: Fraction


@dataclass(frozen=True)
class FormsTable:
    n: int
    p: int
    rows: tuple[FormsRow, ...]

    def row(self, i: int) -> FormsRow:
        return self.rows[i]

    def mu_b(self, i: int) -> Fraction:
        r = self.rows[i]
        return r.degb_coeff / r.rank_b

    def mu_z(self, i: int) -> Fraction:
        r = self.rows[i]
        return r.degz_coeff / r.rank_z

    def cartier_ok(self) -> bool:
        """Z^i / B^i has the rank and degree of Omega^i on every row i >= 1."""
        n = self.n
        for r in self.rows[1:]:
            c = binomial(n, r.i)
            if r.rank_z - r.rank_b != c or r.degz_coeff - r.degb_coeff != r.i * c:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "rows": [
                {
                    "i": r.i,
                    "rank_b": str(r.rank_b),
                    "rank_z": str(r.rank_z),
                    "degb_coeff": format_rational(r.degb_coeff),
                    "degz_coeff": format_rational(r.degz_coeff),
                }
                for r in self.rows
            ],
        }


def _check_np(n: int, p: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    require_prime(p)


def forms_recurrence(n: int, p: int) -> FormsTable:
    """Build the table from ``0 -> Z^{i-1} -> F_*Omega^{i-1} -> B^i -> 0`` and Cartier.

    Row 0 is the convention ``B^0 = 0``, ``Z^0 = O_X``.
    """
    _check_np(n, p)
    rows = [FormsRow(0, 0, 1, Fraction(0), Fraction(0))]
    for i in range(1, n + 1):
        prev = rows[-1]
        push_rank, push_deg = pushforward_forms_coeff(n, p, i - 1)
        rank_b = push_rank - prev.rank_z
        degb = push_deg - prev.degz_coeff
        c = binomial(n, i)
        rows.append(FormsRow(i, rank_b, rank_b + c, degb, degb + i * c))
    return FormsTable(n, p, tuple(rows))


def alternating_tail(n: int, p: int, i: int) -> int:
    """``sum_{j=1}^{i-1} (-1)^{i+j+1} j C(n,j) (p^{n-1} - 1)``."""
    return sum(
        (-1) ** (i + j + 1) * j * binomial(n, j) * (p ** (n - 1) - 1) for j in range(1, i)
    )


def forms_closed(n: int, p: int, i: int) -> FormsRow:
    """Closed-form rank and degree coefficients of B^i and Z^i, ``1 <= i <= n``."""
    _check_np(n, p)
    if not 1 <= i <= n:
        raise ValidationError(f"i={i} outside [1, {n}]")
    c_prev = binomial(n - 1, i - 1)
    rank_b = c_prev * (p**n - 1)
    degb = Fraction(n * c_prev * p ** (n - 1) * (p - 1), 2) + alternating_tail(n, p, i)
    c = binomial(n, i)
    return FormsRow(i, rank_b, rank_b + c, degb, degb + i * c)


@dataclass(frozen=True)
class ZiVerdict:
    n: int
    p: int
    i: int
    mu_b_coeff: Fraction
    mu_omega_i_coeff: Fraction
    exact_destabilizes: bool
    exact_first_term_ratio: Fraction
    exact_first_term_holds: bool
    printed_sufficient_lhs: Fraction
    printed_sufficient_holds: bool
    alternating_tail: int
    in_claimed_range: bool

    @property
    def conflict(self) -> bool:
        """The printed simplification and the exact first term disagree on the verdict."""
        return self.printed_sufficient_holds != self.exact_first_term_holds

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "i": self.i,
            "mu_b_coeff": format_rational(self.mu_b_coeff),
            "mu_omega_i_coeff": format_rational(self.mu_omega_i_coeff),
            "exact_destabilizes": self.exact_destabilizes,
            "exact_first_term_ratio": format_rational(self.exact_first_term_ratio),
            "exact_first_term_holds": self.exact_first_term_holds,
            "printed_sufficient_lhs": format_rational(self.printed_sufficient_lhs),
            "printed_sufficient_holds": self.printed_sufficient_holds,
            "alternating_tail": str(self.alternating_tail),
            "in_claimed_range": self.in_claimed_range,
            "conflict": self.conflict,
            "units": "mu(Omega^1_X)",
            "assumes": "mu(Omega^1_X) > 0",
        }


def check_zi_instability(n: int, p: int, i: int, table: FormsTable | None = None) -> ZiVerdict:
    """Does B^i destabilize Z^i, i.e. ``mu(B^i) > mu(Omega^i) = i mu(Omega^1)``?

    Valid under ``mu(Omega^1_X) > 0``.  Both the exact first term of the
    slope ratio and its printed simplification ``n(p^n - p) / 2(p^n - 1)``
    are reported so any disagreement is visible.  ``in_claimed_range`` is
    false for ``i >= n/2``, where no claim is made.
    """
    _check_np(n, p)
    if not 1 <= i <= n - 1:
        raise ValidationError(f"i={i} outside [1, {n - 1}]")
    table = table or forms_recurrence(n, p)
    mu_b = table.mu_b(i)
    pn = p**n
    exact_ratio = Fraction(n * p ** (n - 1) * (p - 1), 2 * (pn - 1))
    printed = Fraction(n * (pn - p), 2 * (pn - 1))
    return ZiVerdict(
        n=n,
        p=p,
        i=i,
        mu_b_coeff=mu_b,
        mu_omega_i_coeff=Fraction(i),
        exact_destabilizes=mu_b > i,
        exact_first_term_ratio=exact_ratio,
        exact_first_term_holds=exact_ratio > i,
        printed_sufficient_lhs=printed,
        printed_sufficient_holds=printed > i,
        alternating_tail=alternating_tail(n, p, i),
        in_claimed_range=2 * i < n,
    )


def z1_profile(n: int, p: int) -> SlopeProfile:
    """The two-block profile ``[(rk B^1, mu(B^1)), (n, mu(Omega^1))]`` in mu(Omega^1) units."""
    _check_np(n, p)
    row = forms_recurrence(n, p).row(1)
    return SlopeProfile([(row.rank_b, row.degb_coeff / row.rank_b), (n, Fraction(1))])


def z1_hn(n: int, p: int) -> HNPolygon:
    """Polygon of the filtration ``0 < B^1 < Z^1`` (mu(Omega^1) units).

    Assumes ``mu(Omega^1_X) > 0`` and that the truncated powers of Omega^1
    are semistable.  Raises :class:`SlopeOrderError` when ``mu(B^1)`` does not
    exceed ``mu(Omega^1)``, since the filtration would then not be HN-ordered.
    """
    if n < 3:
        raise ValidationError(f"needs n >= 3, got {n}")
    prof = z1_profile(n, p)
    if not prof.is_normal:
        mu_b = prof.blocks[0].slope
        raise SlopeOrderError(
            f"mu(B^1) = {format_rational(mu_b)} does not exceed mu(Omega^1) = 1 "
            f"for n={n}, p={p}"
        )
    return polygon_of(prof)


def bound_bn_subsheaf(n: int, p: int, r_b: int, mu_omega=1) -> Fraction:
    """Upper bound on ``mu(B) - mu(B^n)`` for a subsheaf B of ``F_* omega_X`` of rank r_b."""
    _check_np(n, p)
    top = p**n - 1
    if not 1 <= r_b <= top:
        raise ValidationError(f"r_b={r_b} outside [1, {top}]")
    mu_omega = as_rational(mu_omega)
    return -Fraction(n * (p - 1) * (p**n - r_b - 1), 2 * p * top * r_b) * mu_omega
