"""Bracket-signature calculus and Swiss record profiles."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .core import BracketSignature
from .errors import GuardExceeded, NotPowerOfTwo

MAX_TEAMS = 32
MAX_ROUNDS = 8


@dataclass(frozen=True)
class SignatureReport:
    signature: BracketSignature
    team_count: int
    rounds: int
    alive: tuple
    matches_per_round: tuple


def validate_bracket_signature(entrants) -> SignatureReport:
    """Check ``entrants`` against the survivor recurrence and summarise it.

    >>> validate_bracket_signature([4, 2, 0]).alive
    (0, 2, 2, 1)
    """
    sig = BracketSignature(tuple(entrants))
    return SignatureReport(sig, sig.team_count, sig.rounds, sig.alive,
                           sig.matches_per_round)


def enumerate_bracket_signatures(n: int, max_rounds: int, *, unguarded: bool = False) -> list:
    """All valid signatures with ``n`` teams and at most ``max_rounds`` rounds.

    Sorted lexicographically by entrant tuple.  The search walks the
    recurrence directly, so only feasible prefixes are ever extended.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not unguarded and (n > MAX_TEAMS or max_rounds > MAX_ROUNDS):
        raise GuardExceeded(
            f"n={n}, max_rounds={max_rounds} exceeds the guard "
            f"(n <= {MAX_TEAMS}, rounds <= {MAX_ROUNDS}); pass unguarded=True"
        )
    if (1 << max_rounds) < n:
        raise ValueError(f"{n} teams need at least {(n - 1).bit_length()} rounds")

    found = []

    def extend(prefix, alive, remaining):
        if remaining == 0 and alive == 1 and prefix:
            found.append(tuple(prefix))
            return
        if len(prefix) == max_rounds:
            return
        for a in range(remaining + 1):
            playing = alive + a
            if playing % 2 or playing == 0:
                continue
            prefix.append(a)
            extend(prefix, playing // 2, remaining - a)
            prefix.pop()

    extend([], 0, n)
    return [BracketSignature(e) for e in sorted(found)]


def swiss_record_profile(n: int, rounds: int) -> dict:
    """Number of teams finishing on each ``(wins, losses)`` record.

    Only defined for ``n == 2**rounds``, where every record group stays even
    and the profile is binomial regardless of results.
    """
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    if n != 1 << rounds:
        raise NotPowerOfTwo(f"Swiss profile needs n = 2**rounds, got n={n}, rounds={rounds}")
    return {(w, rounds - w): comb(rounds, w) for w in range(rounds, -1, -1)}


def compact_signature(n: int) -> BracketSignature:
    """Fewest-rounds signature for ``n`` teams with byes to the best seeds."""
    if n < 2:
        raise ValueError("need at least 2 teams")
    rounds = (n - 1).bit_length()
    full = 1 << rounds
    first = 2 * (n - full // 2)
    if first == n:
        return BracketSignature((n,) + (0,) * (rounds - 1))
    return BracketSignature((first, n - first) + (0,) * (rounds - 2))
