"""Pairwise strength models."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import PROB_TOL
from .errors import BadMatrix, NonPositiveStrength

COIN = "coin"
BRADLEY_TERRY = "bt"
MATRIX = "matrix"


@dataclass(frozen=True, eq=False)
class StrengthModel:
    """Win probabilities between seeds.

    ``P[i][j]`` is the chance seed ``i`` beats seed ``j``.  Coin covers any
    number of teams; the other kinds cover as many teams as they have
    parameters.
    """

    kind: str
    strengths: Optional[tuple] = None
    matrix: Optional[np.ndarray] = None

    @property
    def size(self) -> Optional[int]:
        if self.kind == BRADLEY_TERRY:
            return len(self.strengths)
        if self.kind == MATRIX:
            return self.matrix.shape[0]
        return None

    def covers(self, n: int) -> bool:
        return self.size is None or self.size >= n

    def prob(self, i: int, j: int) -> float:
        if self.kind == COIN:
            return 0.5
        if self.kind == BRADLEY_TERRY:
            si, sj = self.strengths[i - 1], self.strengths[j - 1]
            return si / (si + sj)
        return float(self.matrix[i - 1, j - 1])

    def table(self, n: int) -> list:
        """1-based ``(n+1) x (n+1)`` nested list, for fast lookups in loops."""
        if not self.covers(n):
            raise ValueError(f"{self.kind} model covers {self.size} teams, format has {n}")
        rows = [[0.5] * (n + 1) for _ in range(n + 1)]
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i != j:
                    rows[i][j] = self.prob(i, j)
        return rows

    def describe(self) -> str:
        return self.kind


def make_model(kind: str, params=None) -> StrengthModel:
    """Build and check a model.

    ``coin`` takes no parameters; ``bt`` takes positive strengths (index 0
    is seed 1); ``matrix`` takes a square win-probability matrix whose
    off-diagonal entries complement each other.  Entries of exactly 0 or 1
    are accepted for deterministic test models.
    """
    if kind == COIN:
        return StrengthModel(COIN)
    if kind == BRADLEY_TERRY:
        s = tuple(float(x) for x in params)
        if len(s) < 2:
            raise ValueError("Bradley-Terry needs at least two strengths")
        if any(not x > 0 for x in s):
            raise NonPositiveStrength(f"strengths must be positive: {s}")
        return StrengthModel(BRADLEY_TERRY, strengths=s)
    if kind == MATRIX:
        P = np.array(params, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] < 2:
            raise BadMatrix(f"matrix must be square with n >= 2, got shape {P.shape}")
        off = ~np.eye(P.shape[0], dtype=bool)
        if np.any(~np.isfinite(P[off])) or np.any(P[off] < 0) or np.any(P[off] > 1):
            raise BadMatrix("off-diagonal entries must lie in [0, 1]")
        gap = np.abs(P + P.T - 1)[off]
        if gap.size and gap.max() > PROB_TOL:
            i, j = np.argwhere(off & (np.abs(P + P.T - 1) > PROB_TOL))[0]
            raise BadMatrix(f"P[{i + 1}][{j + 1}] + P[{j + 1}][{i + 1}] = {P[i, j] + P[j, i]}, not 1")
        P = P.copy()
        np.fill_diagonal(P, 0.5)
        P.setflags(write=False)
        return StrengthModel(MATRIX, matrix=P)
    raise ValueError(f"unknown model kind {kind!r}")


def favourites_model(n: int) -> StrengthModel:
    """Deterministic model: the better seed always wins."""
    P = np.triu(np.ones((n, n)), 1)
    return make_model(MATRIX, P)


def _read_rows(path):
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            cells = [c.strip() for c in row if c.strip()]
            if not cells:
                continue
            try:
                rows.append([float(c) for c in cells])
            except ValueError:
                if rows:
                    raise
                continue  # only the first row may be a header
    return rows


def load_strengths(path) -> StrengthModel:
    """Strengths CSV: one value per row, or ``seed,strength`` rows."""
    rows = _read_rows(path)
    if len(rows) > 1 and all(len(r) == 2 for r in rows) \
            and sorted(r[0] for r in rows) == list(range(1, len(rows) + 1)):
        values = [r[1] for r in sorted(rows)]
    else:
        values = [v for r in rows for v in r]
    return make_model(BRADLEY_TERRY, values)


def load_matrix(path) -> StrengthModel:
    return make_model(MATRIX, _read_rows(path))
