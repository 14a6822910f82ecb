"""Statistics over placement distributions."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np

from .core import PlacementDistribution
from .errors import MixedSizes, ShapeMismatch

DOMINANCE_TOL = 1e-12


class Relation(enum.Enum):
    DOMINATES = "Dominates"
    DOMINATED_BY = "DominatedBy"
    INCOMPARABLE = "Incomparable"
    EQUAL = "Equal"


def _matrix(D):
    D = D.D if isinstance(D, PlacementDistribution) else np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ShapeMismatch(f"placement matrix must be square, got shape {D.shape}")
    return D


def dominance_matrix(D, tol: float = DOMINANCE_TOL) -> list:
    """First-order stochastic dominance between every pair of seeds.

    Seed ``i`` dominates ``j`` when its chance of finishing at or above
    every place is at least ``j``'s, and strictly larger for some place.
    Differences within ``tol`` count as equal.
    """
    cdf = np.cumsum(_matrix(D), axis=1)
    n = cdf.shape[0]
    out = [[Relation.EQUAL] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            diff = cdf[i] - cdf[j]
            ahead = bool(np.any(diff > tol))
            behind = bool(np.any(diff < -tol))
            if ahead and behind:
                out[i][j] = Relation.INCOMPARABLE
            elif ahead:
                out[i][j] = Relation.DOMINATES
            elif behind:
                out[i][j] = Relation.DOMINATED_BY
    return out


def dominance_violations(D) -> int:
    """Pairs ``i < j`` (``i`` the better seed) where ``j`` dominates ``i``."""
    rel = dominance_matrix(D)
    n = len(rel)
    return sum(rel[j][i] is Relation.DOMINATES for i in range(n) for j in range(i + 1, n))


def expected_matches(result: PlacementDistribution):
    """Per-seed expected matches played and the expected number of matches held.

    The total is half the per-seed sum; the engine reports it from the
    integer match count, which avoids float drift in that sum.
    """
    per_seed = np.asarray(result.expected_matches, dtype=float)
    return per_seed, float(result.total_matches)


@dataclass(frozen=True)
class CompareReport:
    team_count: int
    names: tuple
    champion: tuple  # P(seed 1 finishes first) per format
    violations: tuple
    total_matches: tuple
    matrices: tuple

    def to_dict(self) -> dict:
        return {
            "team_count": self.team_count,
            "formats": [
                {"name": name, "p_seed1_wins": champ, "dominance_violations": viol,
                 "expected_total_matches": total, "D": D.tolist()}
                for name, champ, viol, total, D in zip(
                    self.names, self.champion, self.violations, self.total_matches,
                    self.matrices)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        width = max(12, *(len(n) for n in self.names)) + 2
        rows = [("metric", self.names),
                ("P(seed 1 wins)", [f"{x:.6f}" for x in self.champion]),
                ("dominance violations", [str(x) for x in self.violations]),
                ("expected matches", [f"{x:.6f}" for x in self.total_matches])]
        lines = ["".join([label.ljust(22)] + [c.rjust(width) for c in cells])
                 for label, cells in rows]
        for name, D in zip(self.names, self.matrices):
            lines.append("")
            lines.append(f"D[{name}] (rows seeds, columns places)")
            for k, row in enumerate(D, start=1):
                lines.append(f"{k:>4} " + " ".join(f"{x:.6f}" for x in row))
        return "\n".join(lines) + "\n"


def compare_formats(results) -> CompareReport:
    """Side-by-side summary of several ``(name, PlacementDistribution)`` pairs."""
    results = list(results)
    if not results:
        raise ValueError("nothing to compare")
    sizes = {r.team_count for _, r in results}
    if len(sizes) > 1:
        raise MixedSizes(f"formats have different team counts: {sorted(sizes)}")
    return CompareReport(
        team_count=sizes.pop(),
        names=tuple(name for name, _ in results),
        champion=tuple(float(r.D[0, 0]) for _, r in results),
        violations=tuple(dominance_violations(r) for _, r in results),
        total_matches=tuple(expected_matches(r)[1] for _, r in results),
        matrices=tuple(np.array(r.D) for _, r in results),
    )
