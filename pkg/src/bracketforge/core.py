"""Domain types: signatures, match graphs, dynamic policies, distributions.

Teams are identified with their seed (1 is the strongest).  Places are
1-based with 1 best.  Everything here is immutable once built.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

import numpy as np

from .errors import DuplicateIdentifier, EmptyRound, NoChampion, ParityError, TooFewTeams

PROB_TOL = 1e-9


# -- signatures --------------------------------------------------------------

@dataclass(frozen=True)
class BracketSignature:
    """Per-round entrant counts ``a_1..a_r`` of a single-elimination shape.

    Construction runs the survivor recurrence ``c_i = (c_{i-1} + a_i) / 2``
    and rejects shapes where a round cannot be fully paired, where a round is
    empty, or where more than one team is left at the end.
    """

    entrants: tuple

    def __post_init__(self):
        entrants = tuple(int(a) for a in self.entrants)
        object.__setattr__(self, "entrants", entrants)
        if not entrants:
            raise ValueError("signature needs at least one round")
        if any(a < 0 for a in entrants):
            raise ValueError("entrant counts must be non-negative")
        if sum(entrants) < 2:
            raise TooFewTeams(f"{entrants}: a bracket needs at least 2 teams")
        alive = [0]
        for i, a in enumerate(entrants, start=1):
            playing = alive[-1] + a
            if playing % 2:
                raise ParityError(i, alive[-1], a)
            if playing == 0:
                raise EmptyRound(f"{entrants}: round {i} has no matches")
            alive.append(playing // 2)
        if alive[-1] != 1:
            raise NoChampion(f"{entrants}: {alive[-1]} teams survive the last round")
        object.__setattr__(self, "_alive", tuple(alive))

    @property
    def alive(self) -> tuple:
        """Survivor counts ``c_0..c_r``."""
        return self._alive

    @property
    def rounds(self) -> int:
        return len(self.entrants)

    @property
    def team_count(self) -> int:
        return sum(self.entrants)

    @property
    def matches_per_round(self) -> tuple:
        c = self._alive
        return tuple((c[i - 1] + a) // 2 for i, a in enumerate(self.entrants, start=1))

    @property
    def match_count(self) -> int:
        return self.team_count - 1

    def __str__(self):
        return "(" + ",".join(map(str, self.entrants)) + ")"


# -- flowchart pieces ----------------------------------------------------------

@dataclass(frozen=True)
class SeedEntry:
    seed: int


@dataclass(frozen=True)
class WinnerOf:
    match_id: str


@dataclass(frozen=True)
class LoserOf:
    match_id: str


Source = Union[SeedEntry, WinnerOf, LoserOf]


@dataclass(frozen=True)
class ToSlot:
    match_id: str
    slot: str  # "A" or "B"


@dataclass(frozen=True, order=True)
class FinalPlace:
    place: int

    @property
    def lo(self):
        return self.place

    @property
    def hi(self):
        return self.place

    @property
    def size(self):
        return 1


@dataclass(frozen=True, order=True)
class TieBlock:
    lo: int
    hi: int

    @property
    def size(self):
        return self.hi - self.lo + 1


Sink = Union[ToSlot, FinalPlace, TieBlock]
PlaceSink = Union[FinalPlace, TieBlock]


def place_block(lo: int, hi: int) -> PlaceSink:
    """Place sink covering ``lo..hi``; single places collapse to FinalPlace."""
    return FinalPlace(lo) if lo == hi else TieBlock(lo, hi)


def is_place(sink) -> bool:
    return isinstance(sink, (FinalPlace, TieBlock))


def expand(sink) -> range:
    return range(sink.lo, sink.hi + 1)


@dataclass(frozen=True)
class Match:
    id: str
    slot_a: Source
    slot_b: Source
    on_win: Sink
    on_lose: Sink
    round_hint: Optional[int] = field(default=None, compare=False)

    @property
    def sources(self):
        return (self.slot_a, self.slot_b)

    def slot(self, name):
        return self.slot_a if name == "A" else self.slot_b


@dataclass(frozen=True, eq=False)
class Multibracket:
    """A static format: a DAG of matches keyed by id.

    Construction does not validate; call :func:`bracketforge.flowchart.validate`.
    Equality compares the match maps only (``name`` is a label).
    """

    matches: Mapping[str, Match]
    name: str = "format"

    @classmethod
    def of(cls, matches, name="format"):
        out = {}
        for m in matches:
            if m.id in out:
                raise DuplicateIdentifier(f"match id {m.id!r} used twice")
            out[m.id] = m
        return cls(out, name)

    def __eq__(self, other):
        if not isinstance(other, Multibracket):
            return NotImplemented
        return dict(self.matches) == dict(other.matches)

    def __hash__(self):
        return hash(tuple(sorted(self.matches)))

    def __len__(self):
        return len(self.matches)

    @property
    def seeds(self) -> list:
        return sorted(s.seed for m in self.matches.values() for s in m.sources
                      if isinstance(s, SeedEntry))

    @property
    def team_count(self) -> int:
        return len(self.seeds)

    @property
    def places(self) -> list:
        """Every FinalPlace/TieBlock sink, one entry per sink (a multiset)."""
        out = []
        for mid in sorted(self.matches):
            m = self.matches[mid]
            out.extend(s for s in (m.on_win, m.on_lose) if is_place(s))
        return sorted(out, key=lambda s: (s.lo, s.hi))

    def replace(self, *matches) -> "Multibracket":
        updated = dict(self.matches)
        for m in matches:
            updated[m.id] = m
        return Multibracket(updated, self.name)


# -- dynamic formats -----------------------------------------------------------

RESEED = "reseed"
RANDOM_DRAW = "random"
SWISS = "swiss"

BY_SEED = "seed"
SHARED = "shared"


@dataclass(frozen=True)
class DynamicPolicy:
    """A round-by-round pairing rule rather than a fixed graph.

    ``reseed`` and ``random`` run over a bracket signature; ``swiss`` over
    ``teams`` and ``rounds``.  ``tiebreak`` only matters for Swiss: ``seed``
    ranks equal records by seed, ``shared`` puts them in one tie block.
    """

    kind: str
    signature: Optional[BracketSignature] = None
    teams: Optional[int] = None
    rounds: Optional[int] = None
    tiebreak: str = BY_SEED
    name: str = field(default="format", compare=False)

    @property
    def team_count(self) -> int:
        if self.kind == SWISS:
            return self.teams
        return self.signature.team_count

    @property
    def match_count(self) -> int:
        if self.kind == SWISS:
            return self.teams // 2 * self.rounds
        return self.signature.match_count


Format = Union[Multibracket, DynamicPolicy]


def team_count(fmt: Format) -> int:
    return fmt.team_count


# -- results -------------------------------------------------------------------

@dataclass(frozen=True)
class Outcome:
    """One playthrough.  ``placements`` maps seed to its place sink."""

    placements: Mapping[int, PlaceSink]
    match_results: tuple  # (match descriptor, winner seed, loser seed)

    def matches_played(self) -> dict:
        counts = dict.fromkeys(self.placements, 0)
        for _, w, l in self.match_results:
            counts[w] += 1
            counts[l] += 1
        return counts


@dataclass(frozen=True, eq=False)
class PlacementDistribution:
    """Seed-by-place probabilities; row ``i`` is seed ``i+1``, column ``p`` is place ``p+1``."""

    D: np.ndarray
    expected_matches: np.ndarray
    total_matches: float
    method: str = "exact"
    reps: Optional[int] = None
    stderr: Optional[np.ndarray] = None
    records: Optional[np.ndarray] = None  # Swiss only: seed x wins
    # Monte Carlo only: integer tallies with D == counts / count_scale
    counts: Optional[np.ndarray] = None
    count_scale: Optional[int] = None

    @property
    def team_count(self) -> int:
        return self.D.shape[0]
