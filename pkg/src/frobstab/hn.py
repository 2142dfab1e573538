"""Slope profiles, Harder-Narasimhan polygons and the Shatz dominance order.

A :class:`SlopeProfile` is a list of ``(rank, slope)`` blocks standing for a
direct sum of semistable pieces.  Its HN-normal form has strictly decreasing
slopes; the cumulative ``(rank, degree)`` points of that form are the
vertices of the HN polygon.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import NotNormalizedError, RankMismatchError, ValidationError
from .rational import as_rational, format_rational


class Block(NamedTuple):
    rank: int
    slope: Fraction


class ProfileStats(NamedTuple):
    mu: Fraction
    mu_max: Fraction
    mu_min: Fraction
    instability: Fraction


@dataclass(frozen=True)
class SlopeProfile:
    blocks: tuple[Block, ...]

    def __init__(self, blocks):
        cleaned = []
        for b in blocks:
            rank, slope = b
            if isinstance(rank, bool) or not isinstance(rank, int):
                raise ValidationError(f"block rank must be an integer, got {rank!r}")
            if rank < 1:
                raise ValidationError(f"block rank must be >= 1, got {rank}")
            cleaned.append(Block(rank, as_rational(slope)))
        if not cleaned:
            raise ValidationError("a slope profile needs at least one block")
        object.__setattr__(self, "blocks", tuple(cleaned))

    @property
    def total_rank(self) -> int:
        return sum(b.rank for b in self.blocks)

    @property
    def total_degree(self) -> Fraction:
        return sum((b.rank * b.slope for b in self.blocks), Fraction(0))

    @property
    def is_normal(self) -> bool:
        return all(a.slope > b.slope for a, b in zip(self.blocks, self.blocks[1:]))

    def unit_slopes(self) -> list[Fraction]:
        """Each block's slope repeated ``rank`` times, sorted descending."""
        out = [b.slope for b in self.blocks for _ in range(b.rank)]
        out.sort(reverse=True)
        return out

    def to_json(self) -> dict:
        return {
            "blocks": [
                {"rank": b.rank, "slope": format_rational(b.slope)} for b in self.blocks
            ]
        }

    @classmethod
    def from_json(cls, data) -> "SlopeProfile":
        try:
            raw = data["blocks"]
            return cls((int(b["rank"]), as_rational(b["slope"])) for b in raw)
        except ValidationError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed profile JSON: {exc}") from exc


@dataclass(frozen=True)
class HNPolygon:
    """Concave vertex chain starting at the origin, ranks strictly increasing."""

    vertices: tuple[tuple[int, Fraction], ...]

    def __init__(self, vertices):
        verts = tuple((int(r), as_rational(d)) for r, d in vertices)
        if not verts or verts[0] != (0, Fraction(0)):
            raise ValidationError("polygon must start at (0, 0)")
        if len(verts) < 2:
            raise ValidationError("polygon needs at least one segment")
        for (r0, _), (r1, _) in zip(verts, verts[1:]):
            if r1 <= r0:
                raise ValidationError("polygon vertex ranks must strictly increase")
        slopes = _segment_slopes(verts)
        if any(a <= b for a, b in zip(slopes, slopes[1:])):
            raise ValidationError("polygon segment slopes must strictly decrease")
        object.__setattr__(self, "vertices", verts)

    @property
    def total_rank(self) -> int:
        return self.vertices[-1][0]

    @property
    def total_degree(self) -> Fraction:
        return self.vertices[-1][1]

    def height(self, x) -> Fraction:
        """Exact piecewise-linear height at rank ``x`` (0 <= x <= total rank)."""
        x = as_rational(x)
        if x < 0 or x > self.total_rank:
            raise ValidationError(f"rank {x} outside [0, {self.total_rank}]")
        for (r0, d0), (r1, d1) in zip(self.vertices, self.vertices[1:]):
            if x <= r1:
                return d0 + (d1 - d0) * (x - r0) / (r1 - r0)
        raise AssertionError("unreachable")

    def to_json(self) -> dict:
        return {"vertices": [[r, format_rational(d)] for r, d in self.vertices]}

    @classmethod
    def from_json(cls, data) -> "HNPolygon":
        try:
            return cls((int(r), as_rational(d)) for r, d in data["vertices"])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"malformed polygon JSON: {exc}") from exc


def _segment_slopes(verts) -> list[Fraction]:
    return [
        Fraction(d1 - d0) / (r1 - r0) for (r0, d0), (r1, d1) in zip(verts, verts[1:])
    ]


def normalize(profile: SlopeProfile) -> SlopeProfile:
    """Merge equal-slope blocks and sort by slope, descending."""
    merged: dict[Fraction, int] = {}
    for b in profile.blocks:
        merged[b.slope] = merged.get(b.slope, 0) + b.rank
    return SlopeProfile((merged[s], s) for s in sorted(merged, reverse=True))


def profile_stats(profile: SlopeProfile) -> ProfileStats:
    norm = normalize(profile)
    mu = profile.total_degree / profile.total_rank
    mu_max = norm.blocks[0].slope
    mu_min = norm.blocks[-1].slope
    return ProfileStats(mu, mu_max, mu_min, mu_max - mu_min)


def instability(profile: SlopeProfile) -> Fraction:
    return profile_stats(profile).instability


def polygon_of(profile: SlopeProfile) -> HNPolygon:
    """Cumulative ``(rank, degree)`` chain of an HN-normal profile."""
    if not profile.is_normal:
        raise NotNormalizedError(
            "polygon_of needs strictly decreasing slopes; call normalize() first"
        )
    verts = [(0, Fraction(0))]
    r, d = 0, Fraction(0)
    for b in profile.blocks:
        r += b.rank
        d += b.rank * b.slope
        verts.append((r, d))
    return HNPolygon(verts)


def dominates(p: HNPolygon, q: HNPolygon, *, equal_degree: bool = False) -> bool:
    """True when ``p`` lies on or above ``q`` at every rank.

    Heights are compared at the union of both vertex sets, which is exact for
    piecewise-linear chains.  With ``equal_degree=True`` the two polygons must
    also share their end point.
    """
    if p.total_rank != q.total_rank:
        raise RankMismatchError(
            f"total ranks differ: {p.total_rank} vs {q.total_rank}"
        )
    if equal_degree and p.total_degree != q.total_degree:
        return False
    xs = sorted({r for r, _ in p.vertices} | {r for r, _ in q.vertices})
    return all(p.height(x) >= q.height(x) for x in xs)


def refine(profile: SlopeProfile, index: int, r1: int, mu1) -> SlopeProfile:
    """Split block ``index`` into ``(r1, mu1)`` and a complement of equal total degree.

    The complement slope is forced by degree conservation; ``mu1`` must be at
    least the block's slope so that the split goes "up then down".
    """
    blk = profile.blocks[index]
    mu1 = as_rational(mu1)
    if not 1 <= r1 < blk.rank:
        raise ValidationError(f"split rank {r1} must lie in [1, {blk.rank - 1}]")
    if mu1 < blk.slope:
        raise ValidationError("first piece of a refinement must not have smaller slope")
    r2 = blk.rank - r1
    mu2 = (blk.rank * blk.slope - r1 * mu1) / r2
    blocks = list(profile.blocks)
    blocks[index : index + 1] = [Block(r1, mu1), Block(r2, mu2)]
    return SlopeProfile(blocks)
