"""Run formats under a strength model.

Every format is first turned into a plan with three entry points: ``run``
(one playthrough from a list of uniform draws), ``enumerate`` (exact
branch sweep with identical states merged) and ``draw_count`` (how many
uniforms one playthrough consumes).
"""
from __future__ import annotations

import math
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat

import numpy as np

from .core import (RANDOM_DRAW, RESEED, SHARED, SWISS, DynamicPolicy, FinalPlace,
                   Multibracket, Outcome, PlacementDistribution, SeedEntry, ToSlot,
                   place_block)
from .errors import InvalidFormat, StateCapExceeded, ZeroReps
from .flowchart import topological_order, validate
from .models import StrengthModel, make_model, BRADLEY_TERRY, COIN, MATRIX
from .rng import Stream, uniform_block

DEFAULT_STATE_CAP = 1 << 22
CHUNK = 4096

__all__ = ["make_model", "play", "enumerate_exact", "simulate", "DEFAULT_STATE_CAP",
           "BRADLEY_TERRY", "COIN", "MATRIX"]


class _Exact:
    def __init__(self, n):
        self.D = np.zeros((n, n))
        self.played = np.zeros(n)

    def place(self, team, sink, mass):
        self.D[team - 1, sink.lo - 1:sink.hi] += mass / sink.size

    def play(self, a, b, mass):
        self.played[a - 1] += mass
        self.played[b - 1] += mass


def _check_cap(branches, cap):
    if branches > cap:
        raise StateCapExceeded(f"{branches} branches exceed the state cap of {cap}")


class _StaticPlan:
    def __init__(self, mb: Multibracket):
        report = validate(mb)
        if not report.ok:
            raise InvalidFormat(report)
        self.n = mb.team_count
        self.ids = topological_order(mb)
        index = {mid: k for k, mid in enumerate(self.ids)}
        self.init = [0] * (2 * len(self.ids))
        self.steps = []
        for k, mid in enumerate(self.ids):
            m = mb.matches[mid]
            for j, src in enumerate(m.sources):
                if isinstance(src, SeedEntry):
                    self.init[2 * k + j] = src.seed
            dests = []
            for sink in (m.on_win, m.on_lose):
                if isinstance(sink, ToSlot):
                    dests.append(2 * index[sink.match_id] + (sink.slot == "B"))
                else:
                    dests.append(sink)
            self.steps.append((2 * k, 2 * k + 1, dests[0], dests[1]))
        self.draw_count = self.match_count = len(self.ids)

    def run(self, P, u):
        buf = self.init[:]
        placed = {}
        results = []
        ids = self.ids
        for k, (pa, pb, dw, dl) in enumerate(self.steps):
            a = buf[pa]
            b = buf[pb]
            if u[k] < P[a][b]:
                w, l = a, b
            else:
                w, l = b, a
            results.append((ids[k], w, l))
            if type(dw) is int:
                buf[dw] = w
            else:
                placed[w] = dw
            if type(dl) is int:
                buf[dl] = l
            else:
                placed[l] = dl
        return placed, results

    def enumerate(self, P, cap, acc):
        states = {tuple(self.init): 1.0}
        for pa, pb, dw, dl in self.steps:
            _check_cap(2 * len(states), cap)
            nxt = defaultdict(float)
            for buf, prob in states.items():
                a, b = buf[pa], buf[pb]
                acc.play(a, b, prob)
                p = P[a][b]
                for w, l, q in ((a, b, p), (b, a, 1.0 - p)):
                    if q == 0:
                        continue
                    mass = prob * q
                    nb = list(buf)
                    nb[pa] = nb[pb] = 0
                    for team, d in ((w, dw), (l, dl)):
                        if type(d) is int:
                            nb[d] = team
                        else:
                            acc.place(team, d, mass)
                    nxt[tuple(nb)] += mass
            states = nxt


def _perfect_matchings(players):
    if not players:
        yield ()
        return
    first = players[0]
    for k in range(1, len(players)):
        rest = players[1:k] + players[k + 1:]
        for tail in _perfect_matchings(rest):
            yield ((first, players[k]),) + tail


class _BracketPolicyPlan:
    """Reseeded or randomly drawn rounds over a bracket signature."""

    def __init__(self, policy: DynamicPolicy):
        sig = policy.signature
        self.n = sig.team_count
        self.random = policy.kind == RANDOM_DRAW
        self.entering = [[] for _ in sig.entrants]
        seed = 1
        for i in range(sig.rounds - 1, -1, -1):
            for _ in range(sig.entrants[i]):
                self.entering[i].append(seed)
                seed += 1
        self.blocks = []
        worst = self.n
        for m in sig.matches_per_round:
            self.blocks.append(place_block(worst - m + 1, worst))
            worst -= m
        per_round = sig.matches_per_round
        self.match_count = sum(per_round)
        self.draw_count = sum(per_round) + (sum(2 * m - 1 for m in per_round) if self.random else 0)

    def _pairs(self, players, u, pos):
        m = len(players) // 2
        if not self.random:
            return [(players[k], players[-1 - k]) for k in range(m)], pos
        perm = list(players)
        for i in range(len(perm) - 1, 0, -1):
            j = int(u[pos] * (i + 1))
            pos += 1
            perm[i], perm[j] = perm[j], perm[i]
        return [tuple(sorted(perm[2 * k:2 * k + 2])) for k in range(m)], pos

    def run(self, P, u):
        alive = []
        placed = {}
        results = []
        pos = 0
        for i, entering in enumerate(self.entering):
            players = sorted(alive + entering)
            pairs, pos = self._pairs(players, u, pos)
            alive = []
            for k, (a, b) in enumerate(pairs):
                if u[pos] < P[a][b]:
                    w, l = a, b
                else:
                    w, l = b, a
                pos += 1
                results.append((f"r{i + 1}m{k + 1}", w, l))
                placed[l] = self.blocks[i]
                alive.append(w)
        placed[alive[0]] = FinalPlace(1)
        return placed, results

    def enumerate(self, P, cap, acc):
        states = {(): 1.0}
        for i, entering in enumerate(self.entering):
            block = self.blocks[i]
            nxt = defaultdict(float)
            size = len(next(iter(states))) + len(entering)
            m = size // 2
            per_state = (2 ** m) * (_double_factorial(2 * m - 1) if self.random else 1)
            _check_cap(len(states) * per_state, cap)
            for alive, prob in states.items():
                players = sorted(alive + tuple(entering))
                if self.random:
                    drawings = list(_perfect_matchings(players))
                else:
                    drawings = [[(players[k], players[-1 - k]) for k in range(m)]]
                weight = prob / len(drawings)
                for pairs in drawings:
                    partial = [((), weight)]
                    for a, b in pairs:
                        acc.play(a, b, weight)
                        p = P[a][b]
                        grown = []
                        for winners, q in partial:
                            if p > 0:
                                grown.append((winners + (a,), q * p))
                                acc.place(b, block, q * p)
                            if p < 1:
                                grown.append((winners + (b,), q * (1.0 - p)))
                                acc.place(a, block, q * (1.0 - p))
                        partial = grown
                    for winners, q in partial:
                        nxt[tuple(sorted(winners))] += q
            states = nxt
        for (champion,), prob in states.items():
            acc.place(champion, FinalPlace(1), prob)


def _double_factorial(k):
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def swiss_pairs(wins) -> list:
    """Pairs for the next Swiss round given each seed's wins (index 0 = seed 1).

    Groups of equal wins are folded best-vs-worst by seed, best group first;
    an odd group sends its worst seed down to the next group.
    """
    groups = defaultdict(list)
    for seed, w in enumerate(wins, start=1):
        groups[w].append(seed)
    pairs = []
    carry = []
    for w in sorted(groups, reverse=True):
        group = sorted(carry + groups[w])
        carry = [group.pop()] if len(group) % 2 else []
        half = len(group) // 2
        pairs.extend((group[k], group[-1 - k]) for k in range(half))
    return pairs


class _SwissPlan:
    def __init__(self, policy: DynamicPolicy):
        self.n = policy.teams
        self.rounds = policy.rounds
        self.shared = policy.tiebreak == SHARED
        self.draw_count = self.match_count = self.n // 2 * self.rounds

    def placements(self, wins) -> dict:
        order = sorted(range(1, self.n + 1), key=lambda s: (-wins[s - 1], s))
        if not self.shared:
            return {s: FinalPlace(k + 1) for k, s in enumerate(order)}
        counts = Counter(wins)
        placed = {}
        lo = 1
        for w in sorted(counts, reverse=True):
            block = place_block(lo, lo + counts[w] - 1)
            for s in order[lo - 1:lo - 1 + counts[w]]:
                placed[s] = block
            lo += counts[w]
        return placed

    def run(self, P, u):
        wins = [0] * self.n
        results = []
        pos = 0
        for r in range(self.rounds):
            for k, (a, b) in enumerate(swiss_pairs(wins)):
                if u[pos] < P[a][b]:
                    w, l = a, b
                else:
                    w, l = b, a
                pos += 1
                wins[w - 1] += 1
                results.append((f"r{r + 1}m{k + 1}", w, l))
        return self.placements(wins), results

    def enumerate(self, P, cap, acc, records):
        states = {(0,) * self.n: 1.0}
        for _ in range(self.rounds):
            _check_cap(len(states) * 2 ** (self.n // 2), cap)
            nxt = defaultdict(float)
            for wins, prob in states.items():
                partial = [(wins, prob)]
                for a, b in swiss_pairs(wins):
                    acc.play(a, b, prob)
                    p = P[a][b]
                    grown = []
                    for rec, q in partial:
                        for w, pw in ((a, p), (b, 1.0 - p)):
                            if pw > 0:
                                nr = list(rec)
                                nr[w - 1] += 1
                                grown.append((tuple(nr), q * pw))
                    partial = grown
                for rec, q in partial:
                    nxt[rec] += q
            states = nxt
        for wins, prob in states.items():
            for s, sink in self.placements(wins).items():
                acc.place(s, sink, prob)
                records[s - 1, wins[s - 1]] += prob


def _plan(fmt):
    if isinstance(fmt, Multibracket):
        return _StaticPlan(fmt)
    if isinstance(fmt, DynamicPolicy):
        if fmt.kind == SWISS:
            return _SwissPlan(fmt)
        if fmt.kind in (RESEED, RANDOM_DRAW):
            return _BracketPolicyPlan(fmt)
    raise TypeError(f"not a format: {fmt!r}")


def _table(model: StrengthModel, n: int):
    if not model.covers(n):
        raise ValueError(f"model covers {model.size} teams but the format has {n}")
    return model.table(n)


def play(fmt, model: StrengthModel, rng=0) -> Outcome:
    """One playthrough.

    ``rng`` is a :class:`~bracketforge.rng.Stream`, an integer master seed
    (replication 0 of that seed), or an explicit sequence of uniforms.
    Match ``k`` in execution order is won by its first slot iff draw ``k``
    is below that slot's win probability.
    """
    plan = _plan(fmt)
    P = _table(model, plan.n)
    if isinstance(rng, int):
        rng = Stream(rng)
    u = rng.uniforms(plan.draw_count) if isinstance(rng, Stream) else list(rng)
    if len(u) < plan.draw_count:
        raise ValueError(f"need {plan.draw_count} draws, got {len(u)}")
    placed, results = plan.run(P, u)
    return Outcome(dict(sorted(placed.items())), tuple(results))


def enumerate_exact(fmt, model: StrengthModel, state_cap: int = DEFAULT_STATE_CAP) -> PlacementDistribution:
    """Exact placement distribution by sweeping every outcome branch."""
    plan = _plan(fmt)
    P = _table(model, plan.n)
    acc = _Exact(plan.n)
    records = None
    if isinstance(plan, _SwissPlan):
        records = np.zeros((plan.n, plan.rounds + 1))
        plan.enumerate(P, state_cap, acc, records)
    else:
        plan.enumerate(P, state_cap, acc)
    # every format holds a fixed number of matches in every branch, so the
    # total is exact; the per-seed sum agrees with it up to rounding
    return PlacementDistribution(acc.D, acc.played, float(plan.match_count),
                                 method="exact", records=records)


def _run_chunk(fmt, model, master_seed, start, stop):
    plan = _plan(fmt)
    P = _table(model, plan.n)
    draws = uniform_block(master_seed, start, stop, plan.draw_count).tolist()
    tally = Counter()
    played = [0] * (plan.n + 1)
    records = Counter()
    swiss = isinstance(plan, _SwissPlan)
    for u in draws:
        placed, results = plan.run(P, u)
        tally.update(placed.items())
        wins = Counter()
        for _, w, l in results:
            played[w] += 1
            played[l] += 1
            wins[w] += 1
        if swiss:
            records.update((s, wins[s]) for s in range(1, plan.n + 1))
    return tally, played, records


def simulate(fmt, model: StrengthModel, reps: int, master_seed: int = 0,
             workers: int = 1) -> PlacementDistribution:
    """Monte Carlo estimate over ``reps`` independent playthroughs.

    Replications are processed in fixed chunks and merged as integer
    counts, so the result is identical for any ``workers``.
    """
    if reps < 1:
        raise ZeroReps(f"reps must be at least 1, got {reps}")
    plan = _plan(fmt)
    _table(model, plan.n)
    bounds = [(s, min(s + CHUNK, reps)) for s in range(0, reps, CHUNK)]
    starts, stops = zip(*bounds)
    args = (repeat(fmt), repeat(model), repeat(master_seed), starts, stops)
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, *args))
    else:
        parts = list(map(_run_chunk, *args))

    n = plan.n
    tally = Counter()
    played = np.zeros(n + 1, dtype=np.int64)
    rec_counts = Counter()
    for t, p, r in parts:
        tally.update(t)
        played += np.array(p, dtype=np.int64)
        rec_counts.update(r)

    # integer tallies, tie blocks spread in units of 1/scale so each row
    # sums to exactly reps * scale
    scale = math.lcm(*{sink.size for _, sink in tally})
    counts = np.zeros((n, n), dtype=np.int64)
    for (seed, sink), count in tally.items():
        counts[seed - 1, sink.lo - 1:sink.hi] += count * (scale // sink.size)
    D = counts / (reps * scale)
    stderr = np.sqrt(D * (1 - D) / reps)
    expected = played[1:] / reps
    records = None
    if isinstance(plan, _SwissPlan):
        records = np.zeros((n, plan.rounds + 1))
        for (seed, w), count in rec_counts.items():
            records[seed - 1, w] = count / reps
    return PlacementDistribution(D, expected, float(played[1:].sum() / 2 / reps),
                                 method="mc", reps=reps, stderr=stderr, records=records,
                                 counts=counts, count_scale=reps * scale)
