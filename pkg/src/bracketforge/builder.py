"""Constructors for executable formats."""
from __future__ import annotations

from dataclasses import dataclass

from .core import (BY_SEED, RANDOM_DRAW, RESEED, SHARED, SWISS, BracketSignature,
                   DynamicPolicy, FinalPlace, LoserOf, Match, Multibracket, SeedEntry,
                   ToSlot, WinnerOf, expand, is_place, place_block)
from .errors import (DanglingSource, DepthExceedsRounds, DuplicateIdentifier,
                     InvalidFormat, LengthMismatch, NotABracket, NotPowerOfTwo,
                     OddTeamCount, PlaceOverlap, ValidationFailed)
from .flowchart import (ValidationReport, Violation, bracket_rounds, classify,
                        topological_order, validate)
from .signatures import compact_signature


def _signature(sig) -> BracketSignature:
    return sig if isinstance(sig, BracketSignature) else BracketSignature(tuple(sig))


def standard_seed_order(slots: int) -> list:
    """Seeds in draw order; adjacent pairs meet in round one.

    >>> standard_seed_order(8)
    [1, 8, 4, 5, 2, 7, 3, 6]
    """
    if slots < 1 or slots & (slots - 1):
        raise NotPowerOfTwo(f"{slots} is not a power of two")
    order = [1]
    while len(order) < slots:
        size = 2 * len(order)
        order = [s for x in order for s in (x, size + 1 - x)]
    return order


# -- proper brackets -------------------------------------------------------------

def _proper_matches(sig: BracketSignature, prefix="", offset=0, entry=SeedEntry):
    """Matches of the proper bracket for ``sig``.

    Byes go to the best seeds.  Walking down from the final, each slot is
    labelled with the seed expected there if favourites always win; a slot
    whose seed entered in an earlier round is fed by the match where that
    seed faces its mirror among that round's participants.
    """
    r = sig.rounds
    entry_round = {}
    seed = 1
    for i in range(r, 0, -1):
        for _ in range(sig.entrants[i - 1]):
            entry_round[seed] = i
            seed += 1

    participants = {}
    survivors = []
    for i in range(1, r + 1):
        here = sorted(survivors + [s for s, e in entry_round.items() if e == i])
        participants[i] = here
        survivors = here[: len(here) // 2]

    # (round, favourite, underdog, children) built top-down; ids by pre-order
    counters = [0] * (r + 1)
    nodes = []

    def grow(rnd, favourite):
        here = participants[rnd]
        underdog = here[len(here) - 1 - here.index(favourite)]
        counters[rnd] += 1
        node = {"id": f"{prefix}R{rnd}M{counters[rnd]}", "round": rnd,
                "seeds": (favourite, underdog), "feeders": [None, None]}
        nodes.append(node)
        for k, s in enumerate(node["seeds"]):
            if entry_round[s] < rnd:
                node["feeders"][k] = grow(rnd - 1, s)
        return node

    grow(r, participants[r][0])

    parent = {}
    for node in nodes:
        for slot, child in zip("AB", node["feeders"]):
            if child is not None:
                parent[child["id"]] = ToSlot(node["id"], slot)

    # round-i losers finish just above everyone knocked out before them
    worst = [sig.team_count + offset]
    for m in sig.matches_per_round:
        worst.append(worst[-1] - m)
    out = []
    for node in nodes:
        rnd = node["round"]
        srcs = [WinnerOf(child["id"]) if child is not None else entry(s)
                for s, child in zip(node["seeds"], node["feeders"])]
        on_win = parent.get(node["id"], FinalPlace(1 + offset))
        on_lose = place_block(worst[rnd] + 1, worst[rnd - 1])
        out.append(Match(node["id"], srcs[0], srcs[1], on_win, on_lose, rnd))
    return out


def build_proper_bracket(sig, name="format") -> Multibracket:
    """Proper single-elimination bracket with byes to the best seeds."""
    sig = _signature(sig)
    return Multibracket.of(_proper_matches(sig), name)


def favourite_results(mb: Multibracket) -> dict:
    """``{match_id: (winner, loser)}`` when the better seed always wins."""
    results = {}
    for mid in topological_order(mb):
        m = mb.matches[mid]
        pair = []
        for src in m.sources:
            if isinstance(src, SeedEntry):
                pair.append(src.seed)
            else:
                w, l = results[src.match_id]
                pair.append(w if isinstance(src, WinnerOf) else l)
        results[mid] = (min(pair), max(pair))
    return results


def _require_bracket(mb):
    report = validate(mb)
    if not report.ok:
        raise InvalidFormat(report)
    if not classify(mb).is_bracket:
        raise NotABracket("format is not a single-elimination bracket")


def check_proper(mb: Multibracket) -> ValidationReport:
    """Replay the all-favourites outcome and report every improper round.

    Each round must be played by the worst-ranked teams still alive (byes
    belong to the best seeds), and its participants must meet best-vs-worst.
    """
    _require_bracket(mb)
    rounds = bracket_rounds(mb)
    results = favourite_results(mb)
    remaining = set(mb.seeds)
    problems = []
    for rnd in range(1, max(rounds.values()) + 1):
        ids = sorted(mid for mid, i in rounds.items() if i == rnd)
        playing = sorted(s for mid in ids for s in results[mid])
        worst = sorted(remaining)[len(remaining) - len(playing):]
        if playing != worst:
            problems.append(Violation(
                "BYE", rnd, f"round {rnd} is played by {playing}, expected {worst}"))
        mirror = {s: playing[len(playing) - 1 - k] for k, s in enumerate(playing)}
        for mid in ids:
            w, l = results[mid]
            if mirror[w] != l:
                problems.append(Violation(
                    "PAIRING", mid, f"round {rnd} pairs {w} with {l}, expected {mirror[w]}"))
        remaining -= {results[mid][1] for mid in ids}
    return ValidationReport(tuple(problems))


# -- semibrackets and composition ------------------------------------------------

@dataclass(frozen=True)
class SemibracketSpec:
    signature: BracketSignature
    place_lo: int
    entrant_sources: tuple


def build_semibracket(spec: SemibracketSpec) -> Multibracket:
    """Bracket-shaped fragment whose champion takes ``place_lo``.

    The fragment's slots read from ``entrant_sources`` (index 0 plays as its
    top seed).  Match ids are prefixed ``P<place_lo>_``.  On its own the
    fragment does not validate; combine it with :func:`compose_linear`.
    """
    sig = _signature(spec.signature)
    if spec.place_lo < 1:
        raise ValueError("place_lo must be at least 1")
    sources = tuple(spec.entrant_sources)
    if len(sources) != sig.team_count:
        raise LengthMismatch(
            f"{len(sources)} sources for a {sig.team_count}-team signature")
    matches = _proper_matches(sig, prefix=f"P{spec.place_lo}_", offset=spec.place_lo - 1,
                              entry=lambda s: sources[s - 1])
    return Multibracket.of(matches, f"places {spec.place_lo}+")


def compose_linear(fragments, name=None) -> Multibracket:
    """Chain fragments into one multibracket.

    Any source in fragment ``k`` that reads a match from an earlier fragment
    rewires that match's sink to feed the slot.  After rewiring, fragments
    must claim disjoint places and the whole must validate.
    """
    fragments = list(fragments)
    if not fragments:
        raise ValueError("nothing to compose")
    merged = {}
    owner = {}
    for k, frag in enumerate(fragments):
        for mid in sorted(frag.matches):
            if mid in merged:
                raise DuplicateIdentifier(f"match {mid!r} appears in two fragments")
        for mid in sorted(frag.matches):
            m = frag.matches[mid]
            for slot, src in zip("AB", m.sources):
                if isinstance(src, SeedEntry):
                    continue
                up = src.match_id
                if up in frag.matches:
                    continue
                if up not in merged:
                    raise DanglingSource(f"{mid} reads {src}, not produced by an earlier fragment")
                old = merged[up]
                if isinstance(src, WinnerOf):
                    merged[up] = _with(old, on_win=ToSlot(mid, slot))
                else:
                    merged[up] = _with(old, on_lose=ToSlot(mid, slot))
        for mid, m in frag.matches.items():
            merged[mid] = m
            owner[mid] = k

    claimed = {}
    for mid in sorted(merged):
        m = merged[mid]
        for sink in (m.on_win, m.on_lose):
            if not is_place(sink):
                continue
            for p in expand(sink):
                if claimed.setdefault(p, owner[mid]) != owner[mid]:
                    raise PlaceOverlap(f"place {p} claimed by fragments {claimed[p]} and {owner[mid]}")

    mb = Multibracket(merged, name or fragments[0].name)
    report = validate(mb)
    if not report.ok:
        raise ValidationFailed(report)
    return mb


def _with(m: Match, **changes) -> Match:
    fields = dict(id=m.id, slot_a=m.slot_a, slot_b=m.slot_b, on_win=m.on_win,
                  on_lose=m.on_lose, round_hint=m.round_hint)
    fields.update(changes)
    return Match(**fields)


def attach_consolation(mb: Multibracket, depth: int) -> Multibracket:
    """Play off the losers of the last ``depth`` rounds before the final.

    Tier ``t`` (1 = semifinal losers) becomes a proper semibracket starting
    at the best place that tier used to share; its entrants are ordered by
    the seed expected to lose there if favourites win.  ``depth=1`` on a
    standard bracket is the third-place match.
    """
    _require_bracket(mb)
    rounds = bracket_rounds(mb)
    total = max(rounds.values())
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if depth >= total:
        raise DepthExceedsRounds(f"depth {depth} needs more than {total} rounds")
    results = favourite_results(mb)
    fragments = [mb]
    for tier in range(1, depth + 1):
        ids = [mid for mid, i in rounds.items() if i == total - tier]
        if len(ids) < 2:
            continue
        ids.sort(key=lambda mid: results[mid][1])
        place_lo = min(mb.matches[mid].on_lose.lo for mid in ids)
        spec = SemibracketSpec(compact_signature(len(ids)), place_lo,
                               tuple(LoserOf(mid) for mid in ids))
        fragments.append(build_semibracket(spec))
    if len(fragments) == 1:
        return mb
    return compose_linear(fragments, mb.name)


# -- dynamic policies ------------------------------------------------------------

def make_dynamic(kind: str, sig, name="format") -> DynamicPolicy:
    if kind not in (RESEED, RANDOM_DRAW):
        raise ValueError(f"unknown dynamic kind {kind!r}")
    return DynamicPolicy(kind, signature=_signature(sig), name=name)


def make_swiss(n: int, rounds: int, tiebreak: str = BY_SEED, name="format") -> DynamicPolicy:
    if n < 2:
        raise ValueError("Swiss needs at least 2 teams")
    if n % 2:
        raise OddTeamCount(f"Swiss needs an even team count, got {n}")
    if rounds < 1:
        raise ValueError("Swiss needs at least one round")
    if tiebreak not in (BY_SEED, SHARED):
        raise ValueError(f"unknown tiebreak {tiebreak!r}")
    return DynamicPolicy(SWISS, teams=n, rounds=rounds, tiebreak=tiebreak, name=name)
