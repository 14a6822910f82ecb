"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The lines are also repeated in the pytest terminal summary.
"""
import itertools
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from bracketforge import cookbook
from bracketforge.builder import (SemibracketSpec, attach_consolation, build_proper_bracket,
                                  build_semibracket, check_proper, compose_linear, make_dynamic,
                                  make_swiss)
from bracketforge.core import LoserOf, Multibracket, SeedEntry
from bracketforge.dsl import compile_format, emit, parse
from bracketforge.engine import enumerate_exact, simulate
from bracketforge.flowchart import classify, is_efficient, is_monotone, validate
from bracketforge.models import make_model
from bracketforge.signatures import enumerate_bracket_signatures, swiss_record_profile

from conftest import ACCEPTANCE_LINES, exhibition_bracket, swap_seeds
from formatgen import random_format_text

GOLDEN_INPUTS = Path(__file__).parent / "golden" / "inputs"


def report(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def compositions(n, parts):
    """Weak compositions of n into ``parts`` parts (stars and bars)."""
    for bars in itertools.combinations(range(n + parts - 1), parts - 1):
        cuts = (-1,) + bars + (n + parts - 1,)
        yield tuple(cuts[k + 1] - cuts[k] - 1 for k in range(parts))


def playable(entrants):
    """Independent restatement of the survivor rule."""
    alive = 0
    for a in entrants:
        playing = alive + a
        if playing == 0 or playing % 2:
            return False
        alive = playing // 2
    return alive == 1


def test_criterion_01_signature_calculus():
    t0 = time.perf_counter()
    mismatches = []
    total = 0
    for n in range(2, 11):
        rounds = n - 1  # every round holds at least one match
        scan = sorted(c for k in range(1, rounds + 1) for c in compositions(n, k) if playable(c))
        got = [s.entrants for s in enumerate_bracket_signatures(n, rounds, unguarded=True)]
        total += len(got)
        if got != scan:
            mismatches.append(n)
    elapsed = time.perf_counter() - t0
    report(1, not mismatches and elapsed < 5,
           f"{total} signatures for n=2..10 equal the brute-force scan; "
           f"mismatches at {mismatches}; {elapsed:.2f}s (< 5s)")


def test_criterion_02_properness():
    t0 = time.perf_counter()
    built = failed_checks = mutations = undetected = 0
    for n in range(2, 11):
        for sig in enumerate_bracket_signatures(n, n - 1, unguarded=True):
            mb = build_proper_bracket(sig)
            built += 1
            if not (validate(mb).ok and check_proper(mb).ok):
                failed_checks += 1
            home = {s.seed: m.id for m in mb.matches.values() for s in m.sources
                    if isinstance(s, SeedEntry)}
            # exchanging the two slots of one match is the same bracket
            for x, y in itertools.combinations(sorted(home), 2):
                if home[x] == home[y]:
                    continue
                mutations += 1
                if check_proper(swap_seeds(mb, x, y)).ok:
                    undetected += 1
    elapsed = time.perf_counter() - t0
    report(2, failed_checks == 0 and undetected == 0 and elapsed < 10,
           f"{built} proper brackets valid+proper ({failed_checks} failures); "
           f"{mutations - undetected}/{mutations} seed swaps flagged; {elapsed:.2f}s (< 10s)")


def corpus():
    return {
        "proper (8,0,0)": build_proper_bracket((8, 0, 0)),
        "proper (4,2,0)": build_proper_bracket((4, 2, 0)),
        "proper (2,1,1,1,1,1,1)": build_proper_bracket((2, 1, 1, 1, 1, 1, 1)),
        "(8,0,0) + third place": attach_consolation(build_proper_bracket((8, 0, 0)), 1),
        "(8,0,0) consolation depth 2": attach_consolation(build_proper_bracket((8, 0, 0)), 2),
        "double elimination 4 (dsl)": compile_format(
            parse((GOLDEN_INPUTS / "double_elimination_4.fmt").read_text())),
        "page playoff": cookbook.load("page_playoff"),
        "swiss n=8 r=3": make_swiss(8, 3),
        "reseed (8,0,0)": make_dynamic("reseed", (8, 0, 0)),
        "random (8,0,0)": make_dynamic("random", (8, 0, 0)),
        "random (4,2,0)": make_dynamic("random", (4, 2, 0)),
    }


MODEL = make_model("bt", [8, 7, 6, 5, 4, 3, 2, 1])
_results = {}


def exact_and_mc():
    if not _results:
        for name, fmt in corpus().items():
            t0 = time.perf_counter()
            ex = enumerate_exact(fmt, MODEL)
            mc = simulate(fmt, MODEL, 200_000, master_seed=2024)
            _results[name] = (ex, mc, time.perf_counter() - t0)
    return _results


def test_criterion_03_exact_vs_mc():
    t0 = time.perf_counter()
    results = exact_and_mc()
    elapsed = time.perf_counter() - t0
    cells = within = 0
    for ex, mc, _ in results.values():
        diff = np.abs(mc.D - ex.D)
        # a zero standard error only allows an exact hit
        ok = np.where(mc.stderr > 0, diff <= 4 * mc.stderr, diff <= 1e-12)
        cells += ok.size
        within += int(ok.sum())
    share = within / cells
    report(3, len(results) >= 10 and share >= 0.99 and elapsed < 120,
           f"{len(results)} formats, 2e5 reps: {within}/{cells} cells "
           f"({100 * share:.2f}%) within 4 SE (>= 99%); {elapsed:.1f}s (< 120s)")


def test_criterion_04_symmetry():
    coin = make_model("coin")
    t0 = time.perf_counter()
    formats = {
        "4-team + third": attach_consolation(build_proper_bracket((4, 0)), 1),
        "2-team": build_proper_bracket((2,)),
        "swiss n=4 r=2 (shared)": make_swiss(4, 2, "shared"),
    }
    worst = max(float(np.abs(enumerate_exact(f, coin).D - 1 / f.team_count).max())
                for f in formats.values())
    elapsed = time.perf_counter() - t0
    report(4, worst <= 1e-9 and elapsed < 1,
           f"coin on {', '.join(formats)}: max |D - 1/n| = {worst:.1e} (<= 1e-9); "
           f"{elapsed:.3f}s (< 1s)")


def test_criterion_05_conservation():
    worst_exact = 0.0
    worst_mc = 0.0
    tallies_exact = True
    results = exact_and_mc()
    for ex, mc, _ in results.values():
        worst_exact = max(worst_exact, float(np.abs(ex.D.sum(axis=0) - 1).max()),
                          float(np.abs(ex.D.sum(axis=1) - 1).max()))
        # every replication places every seed once, so integer rows are exact
        tallies_exact &= bool(np.all(mc.counts.sum(axis=1) == mc.count_scale))
        tallies_exact &= bool(np.array_equal(mc.D, mc.counts / mc.count_scale))
        worst_mc = max(worst_mc, float(np.abs(mc.D.sum(axis=1) - 1).max()))
    report(5, worst_exact <= 1e-9 and tallies_exact and worst_mc <= 1e-12,
           f"exact D doubly stochastic to {worst_exact:.1e} (<= 1e-9); simulated rows: "
           f"integer tallies sum exactly to reps x tie scale on all {len(results)} formats: "
           f"{tallies_exact}, float rows off by <= {worst_mc:.1e}")


def test_criterion_06_equivalences():
    model = make_model("matrix", [[0.5, 0.9, 0.35, 0.6], [0.1, 0.5, 0.8, 0.45],
                                  [0.65, 0.2, 0.5, 0.7], [0.4, 0.55, 0.3, 0.5]])
    a = enumerate_exact(make_dynamic("reseed", (4, 0)), model).D
    b = enumerate_exact(build_proper_bracket((4, 0)), model).D
    diff = float(np.abs(a - b).max())
    main = build_proper_bracket((4, 0))
    # semifinal losers, the one expected to be the better seed first
    third = build_semibracket(SemibracketSpec((2,), 3, (LoserOf("R1M2"), LoserOf("R1M1"))))
    composed = emit(compose_linear([main, third]))
    attached = emit(attach_consolation(main, 1))
    report(6, diff <= 1e-12 and composed == attached,
           f"reseed (4,0) vs static max diff {diff:.1e} (<= 1e-12); "
           f"compose_linear == attach_consolation bytes: {composed == attached}")


def test_criterion_07_efficiency_predicates():
    eight_third = attach_consolation(build_proper_bracket((8, 0, 0)), 1)
    de = compile_format(parse((GOLDEN_INPUTS / "double_elimination_4.fmt").read_text()))
    checks = {
        "8+third efficient": is_efficient(eight_third),
        "exhibition inefficient": validate(exhibition_bracket()).ok
        and not is_efficient(exhibition_bracket()),
        "double elim not monotone": not is_monotone(de),
        "double elim nonlinear": classify(de).is_nonlinear,
    }
    report(7, all(checks.values()), ", ".join(f"{k}: {v}" for k, v in checks.items()))


def _cli(args, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    proc = subprocess.run([sys.executable, "-m", "bracketforge"] + args, capture_output=True,
                          env=env, check=True)
    return proc.stdout


def test_criterion_08_reproducibility():
    fmts = {"8+third": attach_consolation(build_proper_bracket((8, 0, 0)), 1),
            "swiss": make_swiss(8, 3), "random": make_dynamic("random", (8, 0, 0))}
    identical = True
    for fmt in fmts.values():
        runs = [simulate(fmt, MODEL, 10_000, master_seed=42, workers=w) for w in (1, 4, 8)]
        for r in runs[1:]:
            identical &= (np.array_equal(r.D, runs[0].D) and np.array_equal(r.stderr, runs[0].stderr)
                          and np.array_equal(r.expected_matches, runs[0].expected_matches))
    fmt = str(GOLDEN_INPUTS / "four_plus_third.fmt")
    commands = {
        "json": ["simulate", "--format", fmt, "--reps", "2000", "--seed", "42"],
        "csv": ["enumerate", "--format", fmt, "--out", "csv"],
        "dot": ["render", "--format", fmt],
    }
    stable = {k: _cli(argv, 1) == _cli(argv, 2) for k, argv in commands.items()}
    report(8, identical and all(stable.values()),
           f"simulate(seed=42, reps=1e4) identical for workers 1/4/8: {identical}; "
           f"CLI byte-stable across runs: {stable}")


def test_criterion_09_dsl():
    t0 = time.perf_counter()
    bad = []
    for seed in range(200):
        text = random_format_text(seed)
        ast = parse(text)
        once = emit(ast)
        fmt = compile_format(ast)
        if emit(parse(once)) != once or compile_format(parse(emit(fmt))) != fmt \
                or compile_format(parse(once)) != fmt:
            bad.append(seed)
    broken_cookbook = []
    for name in cookbook.names():
        fmt = compile_format(parse(cookbook.text(name)))
        if isinstance(fmt, Multibracket) and not validate(fmt).ok:
            broken_cookbook.append(name)
    elapsed = time.perf_counter() - t0
    report(9, not bad and not broken_cookbook and elapsed < 5,
           f"200 random files round-trip ({len(bad)} failures); "
           f"{len(cookbook.names())} cookbook formats parse/compile/validate "
           f"({len(broken_cookbook)} failures); {elapsed:.2f}s (< 5s)")


def test_criterion_10_swiss_profile():
    t0 = time.perf_counter()
    profile = swiss_record_profile(8, 3)
    counts = tuple(profile[(w, 3 - w)] for w in (3, 2, 1, 0))
    records = enumerate_exact(make_swiss(8, 3), make_model("coin")).records
    marginal = records.sum(axis=0)[::-1]  # wins 3, 2, 1, 0
    elapsed = time.perf_counter() - t0
    agree = bool(np.abs(marginal - np.array(counts)).max() <= 1e-9)
    report(10, counts == (1, 3, 3, 1) and agree and elapsed < 1,
           f"profile {counts} == (1,3,3,1); enumerator marginals "
           f"{tuple(round(float(x), 12) for x in marginal)} agree: {agree}; {elapsed:.3f}s (< 1s)")
