import numpy as np
import pytest

from bracketforge.builder import attach_consolation, build_proper_bracket
from bracketforge.core import (FinalPlace, LoserOf, Match, Multibracket, SeedEntry, TieBlock,
                               ToSlot)
from bracketforge.models import make_model


def brute_force_static(mb, prob):
    """Placement matrix and per-seed matches played of a static format.

    Walks the match graph directly: pick any match whose two slots are
    filled, branch on its result, recurse.  Every one of the 2^m result
    vectors is visited separately, so nothing is shared with the engine.
    ``prob(i, j)`` is the chance seed ``i`` beats seed ``j``.
    """
    n = len(mb.seeds)
    D = np.zeros((n, n))
    played = np.zeros(n)

    slots = {}
    for m in mb.matches.values():
        for name, src in (("A", m.slot_a), ("B", m.slot_b)):
            if isinstance(src, SeedEntry):
                slots[(m.id, name)] = src.seed

    def walk(slots, done, weight):
        if weight == 0:
            return
        ready = [mid for mid in mb.matches if mid not in done
                 and (mid, "A") in slots and (mid, "B") in slots]
        if not ready:
            assert len(done) == len(mb.matches)
            return
        m = mb.matches[ready[0]]
        a, b = slots[(m.id, "A")], slots[(m.id, "B")]
        played[a - 1] += weight
        played[b - 1] += weight
        for w, l, p in ((a, b, prob(a, b)), (b, a, 1 - prob(a, b))):
            nxt = dict(slots)
            for team, sink in ((w, m.on_win), (l, m.on_lose)):
                if isinstance(sink, ToSlot):
                    nxt[(sink.match_id, sink.slot)] = team
                else:
                    D[team - 1, sink.lo - 1:sink.hi] += weight * p / sink.size
            walk(nxt, done | {m.id}, weight * p)

    walk(slots, frozenset(), 1.0)
    return D, played


def brute_force_reseed(entrants, prob):
    """Reseeded bracket: each round pairs best-vs-worst of whoever is in it."""
    n = sum(entrants)
    entering, seed = [], 1
    for a in reversed(entrants):
        entering.append(list(range(seed, seed + a)))
        seed += a
    entering.reverse()
    D = np.zeros((n, n))

    def walk(rnd, alive, worst, weight):
        if rnd == len(entrants):
            D[alive[0] - 1, 0] += weight
            return
        players = sorted(alive + entering[rnd])
        m = len(players) // 2
        lo = worst - m + 1
        pairs = [(players[k], players[-1 - k]) for k in range(m)]

        def branch(k, winners, w8):
            if k == m:
                walk(rnd + 1, winners, worst - m, w8)
                return
            a, b = pairs[k]
            for w, l, p in ((a, b, prob(a, b)), (b, a, 1 - prob(a, b))):
                D[l - 1, lo - 1:worst] += w8 * p / m
                branch(k + 1, winners + [w], w8 * p)

        branch(0, [], weight)

    walk(0, [], n, 1.0)
    return D


def crossing_bracket_matrix():
    return [[0.5, 0.6, 0.9, 0.2], [0.4, 0.5, 0.7, 0.8], [0.1, 0.3, 0.5, 0.55],
            [0.8, 0.2, 0.45, 0.5]]


def exhibition_bracket():
    """8-team bracket whose first two quarterfinal losers meet in a match
    that decides nothing: both results land in the 5..8 tie block."""
    mb = build_proper_bracket((8, 0, 0))
    q1, q2 = mb.matches["R1M1"], mb.matches["R1M2"]
    x = Match("X", LoserOf("R1M1"), LoserOf("R1M2"), TieBlock(5, 8), TieBlock(5, 8))
    return mb.replace(
        Match(q1.id, q1.slot_a, q1.slot_b, q1.on_win, ToSlot("X", "A")),
        Match(q2.id, q2.slot_a, q2.slot_b, q2.on_win, ToSlot("X", "B")),
        x,
    )


def swap_seeds(mb, x, y):
    sw = {x: y, y: x}

    def f(src):
        return SeedEntry(sw.get(src.seed, src.seed)) if isinstance(src, SeedEntry) else src

    return Multibracket.of([Match(m.id, f(m.slot_a), f(m.slot_b), m.on_win, m.on_lose,
                                  m.round_hint) for m in mb.matches.values()], mb.name)


def two_team(p=0.7):
    return (Multibracket.of([Match("F", SeedEntry(1), SeedEntry(2), FinalPlace(1), FinalPlace(2))],
                            "final"),
            make_model("matrix", [[0.5, p], [1 - p, 0.5]]))


@pytest.fixture
def bt8():
    return make_model("bt", [8, 7, 6, 5, 4, 3, 2, 1])


@pytest.fixture
def coin():
    return make_model("coin")


@pytest.fixture
def eight():
    return build_proper_bracket((8, 0, 0))


@pytest.fixture
def eight_third():
    return attach_consolation(build_proper_bracket((8, 0, 0)), 1)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
