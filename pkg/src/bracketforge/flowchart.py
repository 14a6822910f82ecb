"""Validation, analysis and rendering of multibracket match graphs."""
from __future__ import annotations

import heapq
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import lru_cache

from .core import (FinalPlace, LoserOf, Multibracket, SeedEntry, TieBlock, ToSlot,
                   WinnerOf, expand, is_place)
from .errors import InvalidFormat, UnknownMatch

WIN = "win"
LOSE = "lose"


@dataclass(frozen=True)
class Violation:
    code: str
    where: object
    message: str

    def __str__(self):
        return f"{self.code} [{self.where}]: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set:
        return {v.code for v in self.violations}

    def summary(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)


def validate(mb: Multibracket) -> ValidationReport:
    """Run every structural check and collect the failures."""
    out = []

    def bad(code, where, message):
        out.append(Violation(code, where, message))

    matches = mb.matches
    if not matches:
        bad("EMPTY", None, "format has no matches")
        return ValidationReport(tuple(out))

    consumed = Counter()
    seeds = Counter()
    slot_feeds = Counter()
    for mid in sorted(matches):
        m = matches[mid]
        if m.id != mid:
            bad("ID_MISMATCH", mid, f"keyed as {mid!r} but named {m.id!r}")
        if m.slot_a == m.slot_b:
            bad("SELF_PLAY", mid, f"both slots fed by {m.slot_a}")
        for name, src in (("A", m.slot_a), ("B", m.slot_b)):
            if isinstance(src, SeedEntry):
                seeds[src.seed] += 1
            elif isinstance(src, (WinnerOf, LoserOf)):
                consumed[src] += 1
                up = matches.get(src.match_id)
                if up is None:
                    bad("UNKNOWN_REF", mid, f"slot {name} reads from unknown match {src.match_id!r}")
                    continue
                sink = up.on_win if isinstance(src, WinnerOf) else up.on_lose
                if sink != ToSlot(mid, name):
                    bad("EDGE_MISMATCH", mid,
                        f"slot {name} reads {src} but {src.match_id} sends that team to {sink}")
            else:
                bad("BAD_SOURCE", mid, f"slot {name} has no valid source")
        for label, sink, kind in ((WIN, m.on_win, WinnerOf), (LOSE, m.on_lose, LoserOf)):
            if isinstance(sink, ToSlot):
                slot_feeds[(sink.match_id, sink.slot)] += 1
                down = matches.get(sink.match_id)
                if down is None or sink.slot not in ("A", "B"):
                    bad("UNKNOWN_REF", mid, f"{label} edge targets unknown slot {sink}")
                elif down.slot(sink.slot) != kind(mid):
                    bad("EDGE_MISMATCH", mid,
                        f"{label} edge targets {sink} but that slot reads {down.slot(sink.slot)}")
            elif not is_place(sink):
                bad("BAD_SINK", mid, f"{label} edge has no valid sink")

    for src, k in sorted(consumed.items(), key=lambda kv: str(kv[0])):
        if k > 1:
            bad("CONSUMED_TWICE", src.match_id, f"{src} feeds {k} slots")
    for (mid, slot), k in sorted(slot_feeds.items()):
        if k > 1:
            bad("SLOT_DUP", mid, f"slot {slot} targeted by {k} edges")

    n = sum(seeds.values())
    for s in sorted(seeds):
        if not 1 <= s <= n:
            bad("SEED_RANGE", s, f"seed {s} outside 1..{n}")
        if seeds[s] > 1:
            bad("SEED_DUP", s, f"seed {s} enters {seeds[s]} times")
    for s in range(1, n + 1):
        if s not in seeds:
            bad("SEED_MISSING", s, f"seed {s} never enters")

    try:
        topological_order(mb)
    except InvalidFormat as exc:
        out.extend(exc.report.violations)

    out.extend(_place_violations(mb, n))
    return ValidationReport(tuple(out))


def _place_violations(mb, n):
    out = []
    sinks = Counter(mb.places)
    covered = Counter()
    for sink in sorted(sinks, key=lambda s: (s.lo, s.hi)):
        k = sinks[sink]
        if isinstance(sink, TieBlock) and sink.lo >= sink.hi:
            out.append(Violation("BAD_TIE", sink, f"tie block {sink.lo}..{sink.hi} is empty or single"))
            continue
        if sink.lo < 1 or sink.hi > n:
            out.append(Violation("PLACE_RANGE", sink, f"outside places 1..{n}"))
            continue
        if isinstance(sink, FinalPlace) and k > 1:
            out.append(Violation("PLACE_DUP", sink, f"place {sink.place} awarded {k} times"))
        if isinstance(sink, TieBlock) and k != sink.size:
            out.append(Violation("TIE_CAPACITY", sink,
                                 f"tie block {sink.lo}..{sink.hi} holds {sink.size} but {k} teams reach it"))
        for p in expand(sink):
            covered[p] += 1
    for p in range(1, n + 1):
        if covered[p] > 1:
            out.append(Violation("PLACE_DUP", p, f"place {p} claimed by {covered[p]} sinks"))
        elif covered[p] == 0:
            out.append(Violation("PLACE_GAP", p, f"place {p} is never awarded"))
    return out


def require_valid(mb: Multibracket) -> None:
    report = validate(mb)
    if not report.ok:
        raise InvalidFormat(report)


def topological_order(mb: Multibracket) -> list:
    """Match ids in dependency order, ties broken by id.

    Raises :class:`InvalidFormat` carrying a CYCLE violation if the
    match-reference graph is cyclic.
    """
    indeg = dict.fromkeys(mb.matches, 0)
    children = defaultdict(list)
    for mid, m in mb.matches.items():
        for src in m.sources:
            if isinstance(src, (WinnerOf, LoserOf)) and src.match_id in mb.matches:
                indeg[mid] += 1
                children[src.match_id].append(mid)
    ready = [mid for mid, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        mid = heapq.heappop(ready)
        order.append(mid)
        for child in children[mid]:
            indeg[child] -= 1
            if indeg[child] == 0:
                heapq.heappush(ready, child)
    if len(order) != len(mb.matches):
        stuck = sorted(set(mb.matches) - set(order))
        raise InvalidFormat(ValidationReport((
            Violation("CYCLE", stuck[0], "cycle through " + ", ".join(stuck)),)))
    return order


# -- reachability --------------------------------------------------------------

def _reach_table(mb):
    matches = mb.matches

    @lru_cache(maxsize=None)
    def reach(mid, outcome):
        m = matches[mid]
        sink = m.on_win if outcome == WIN else m.on_lose
        if isinstance(sink, ToSlot):
            return reach(sink.match_id, WIN) | reach(sink.match_id, LOSE)
        return frozenset(expand(sink))

    return reach


def reachable_places(mb: Multibracket, match_id: str, outcome: str) -> frozenset:
    """Places the team taking ``outcome`` in ``match_id`` can still finish in."""
    if match_id not in mb.matches:
        raise UnknownMatch(match_id)
    if outcome not in (WIN, LOSE):
        raise ValueError(f"outcome must be {WIN!r} or {LOSE!r}")
    return _reach_table(mb)(match_id, outcome)


def is_meaningful(mb: Multibracket, match_id: str) -> bool:
    return reachable_places(mb, match_id, WIN) != reachable_places(mb, match_id, LOSE)


def is_efficient(mb: Multibracket) -> bool:
    return all(is_meaningful(mb, mid) for mid in mb.matches)


def is_monotone(mb: Multibracket, match_id: str = None) -> bool:
    """Winning never leaves a worse place reachable than losing.

    With ``match_id`` the check is for that match only; otherwise for all.
    """
    if match_id is not None and match_id not in mb.matches:
        raise UnknownMatch(match_id)
    reach = _reach_table(mb)
    ids = [match_id] if match_id is not None else mb.matches
    return all(max(reach(mid, WIN)) <= min(reach(mid, LOSE)) for mid in ids)


# -- structure -----------------------------------------------------------------

def win_fragments(mb: Multibracket) -> list:
    """Connected components of the winner-flow graph, as sorted id lists."""
    parent = {mid: mid for mid in mb.matches}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for mid, m in mb.matches.items():
        for src in m.sources:
            if isinstance(src, WinnerOf) and src.match_id in parent:
                a, b = find(mid), find(src.match_id)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    groups = defaultdict(list)
    for mid in mb.matches:
        groups[find(mid)].append(mid)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def fragment_root(mb: Multibracket, fragment) -> str:
    roots = [mid for mid in fragment if not isinstance(mb.matches[mid].on_win, ToSlot)]
    return roots[0]


@dataclass(frozen=True)
class Classification:
    is_bracket: bool
    is_linear: bool
    is_nonlinear: bool
    fragments: tuple = field(default=(), compare=False)


def classify(mb: Multibracket) -> Classification:
    """Bracket / linear / nonlinear.

    Fragments are the winner-flow components.  The format is linear when no
    loser re-enters its own fragment, each fragment's deciding match covers a
    contiguous place block, those blocks are disjoint, and every loser edge
    runs to a fragment whose block is strictly worse.
    """
    if not validate(mb).ok:
        return Classification(False, False, False)
    frags = win_fragments(mb)
    owner = {mid: i for i, frag in enumerate(frags) for mid in frag}
    loser_edges = set()
    internal_loss = False
    for mid, m in mb.matches.items():
        for src in m.sources:
            if isinstance(src, LoserOf):
                a, b = owner[src.match_id], owner[mid]
                if a == b:
                    internal_loss = True
                loser_edges.add((a, b))

    root = mb.matches[fragment_root(mb, frags[0])] if len(frags) == 1 else None
    is_bracket = (not loser_edges and root is not None and root.on_win == FinalPlace(1))

    decided = []
    for frag in frags:
        r = mb.matches[fragment_root(mb, frag)]
        places = set(reachable_places(mb, r.id, WIN)) | set(reachable_places(mb, r.id, LOSE))
        decided.append(places)
    contiguous = all(max(p) - min(p) + 1 == len(p) for p in decided)
    disjoint = sum(len(p) for p in decided) == len(set().union(*decided))
    downward = all(min(decided[b]) > max(decided[a]) for a, b in loser_edges)
    linear = not internal_loss and contiguous and disjoint and downward
    return Classification(is_bracket, linear, not linear, tuple(tuple(f) for f in frags))


def bracket_rounds(mb: Multibracket) -> dict:
    """Round number of every match in a bracket, counted back from the final."""
    frags = win_fragments(mb)
    if len(frags) != 1:
        raise ValueError("not a single winner tree")
    root = fragment_root(mb, frags[0])
    depth = {root: 0}
    stack = [root]
    while stack:
        mid = stack.pop()
        for src in mb.matches[mid].sources:
            if isinstance(src, WinnerOf):
                depth[src.match_id] = depth[mid] + 1
                stack.append(src.match_id)
    top = max(depth.values()) + 1
    return {mid: top - d for mid, d in depth.items()}


# -- rendering -----------------------------------------------------------------

def _place_node(sink):
    if isinstance(sink, FinalPlace):
        return f"p:{sink.place}", str(sink.place)
    return f"p:{sink.lo}-{sink.hi}", f"{sink.lo}-{sink.hi}"


def _node_for(sink):
    if isinstance(sink, ToSlot):
        return f"m:{sink.match_id}"
    return _place_node(sink)[0]


def to_dot(mb: Multibracket) -> str:
    """Graphviz text for ``mb``; identical input gives identical bytes."""
    name = mb.name.replace("\\", "\\\\").replace('"', '\\"')
    lines = [f'digraph "{name}" {{', "  rankdir=LR;"]
    ids = sorted(mb.matches)
    for mid in ids:
        m = mb.matches[mid]
        label = mid if m.round_hint is None else f"{mid}\\nround {m.round_hint}"
        lines.append(f'  "m:{mid}" [shape=box, label="{label}"];')
    for s in mb.seeds:
        lines.append(f'  "s:{s}" [shape=plaintext, label="seed {s}"];')
    for sink in sorted(set(mb.places), key=lambda s: (s.lo, s.hi)):
        node, label = _place_node(sink)
        lines.append(f'  "{node}" [shape=doublecircle, label="{label}"];')
    entries = sorted((src.seed, mid, slot)
                     for mid in ids
                     for slot, src in zip("AB", mb.matches[mid].sources)
                     if isinstance(src, SeedEntry))
    for seed, mid, slot in entries:
        lines.append(f'  "s:{seed}" -> "m:{mid}" [style=dotted, headlabel="{slot}"];')
    for mid in ids:
        m = mb.matches[mid]
        lines.append(f'  "m:{mid}" -> "{_node_for(m.on_win)}" [style=solid];')
        lines.append(f'  "m:{mid}" -> "{_node_for(m.on_lose)}" [style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"
