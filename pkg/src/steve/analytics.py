"""Similarity search and tournament ranking over a trained model.

Team similarity is the squared euclidean distance between winner
representations.  A hypothetical match between ``a`` and ``b`` is decided by
comparing cross distances: ``a`` wins when its winner row is closer to
``b``'s loser row than vice versa.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Sequence

import numpy as np

from .trainer import EmbeddingModel


class Outcome(Enum):
    A_WINS = "a_wins"
    B_WINS = "b_wins"
    TIE = "tie"


@dataclass(frozen=True)
class HeadToHead:
    """Cross distances and the resulting outcome of one simulated match."""

    alpha_score: float  # |phi_a - psi_b|^2
    beta_score: float   # |phi_b - psi_a|^2
    outcome: Outcome


@dataclass(frozen=True)
class RankingEntry:
    team: int
    victories: float
    rank: int


def _sqdist(u: np.ndarray, v: np.ndarray) -> float:
    diff = u - v
    return float(diff @ diff)


def winner_distance(model: EmbeddingModel, a: int, b: int) -> float:
    """Squared euclidean distance between the winner representations."""
    model.registry.check_id(a)
    model.registry.check_id(b)
    return _sqdist(model.phi[a - 1], model.phi[b - 1])


def most_similar(model: EmbeddingModel, team: int, k: int) -> list[tuple[int, float]]:
    """The ``k`` teams closest to ``team`` by winner distance, ascending.

    The query team itself is excluded; exact distance ties are broken by
    ascending team name.
    """
    model.registry.check_id(team)
    if not 1 <= k <= model.m - 1:
        raise ValueError(f"k must be in 1..{model.m - 1}, got {k}")
    scored = [
        (winner_distance(model, team, other), model.registry.name_of(other), other)
        for other in range(1, model.m + 1)
        if other != team
    ]
    scored.sort(key=lambda t: (t[0], t[1]))
    return [(other, dist) for dist, _, other in scored[:k]]


def head_to_head(model: EmbeddingModel, a: int, b: int) -> HeadToHead:
    """Simulate one match by comparing cross winner/loser distances."""
    model.registry.check_id(a)
    model.registry.check_id(b)
    if a == b:
        raise ValueError("a and b must be distinct teams")
    alpha = _sqdist(model.phi[a - 1], model.psi[b - 1])
    beta = _sqdist(model.phi[b - 1], model.psi[a - 1])
    if alpha < beta:
        outcome = Outcome.A_WINS
    elif alpha > beta:
        outcome = Outcome.B_WINS
    else:
        outcome = Outcome.TIE
    return HeadToHead(alpha_score=alpha, beta_score=beta, outcome=outcome)


def rank_teams(model: EmbeddingModel, teams: Sequence[int]) -> list[RankingEntry]:
    """Single round-robin over ``teams``, ranked by victories.

    Every unordered pair plays once; the winner gains one victory and an
    exact tie awards half a victory to both, so totals always sum to
    ``n * (n - 1) / 2``.  Output order is descending victories, ties broken
    by ascending team name; ranks run 1..n.
    """
    if len(teams) < 2:
        raise ValueError("need at least 2 teams to rank")
    seen = set()
    for t in teams:
        model.registry.check_id(t)
        if t in seen:
            raise ValueError(f"duplicate team in ranking list: {model.registry.name_of(t)!r}")
        seen.add(t)

    victories = {t: 0.0 for t in teams}
    for a, b in combinations(teams, 2):
        result = head_to_head(model, a, b)
        if result.outcome is Outcome.A_WINS:
            victories[a] += 1.0
        elif result.outcome is Outcome.B_WINS:
            victories[b] += 1.0
        else:
            victories[a] += 0.5
            victories[b] += 0.5

    order = sorted(teams, key=lambda t: (-victories[t], model.registry.name_of(t)))
    return [RankingEntry(team=t, victories=victories[t], rank=i) for i, t in enumerate(order, 1)]


def similarity_records(model: EmbeddingModel, neighbors: list[tuple[int, float]]) -> list[dict]:
    """JSON-ready rows for a :func:`most_similar` result."""
    return [
        {"team": model.registry.name_of(t), "distance": dist} for t, dist in neighbors
    ]


def ranking_records(model: EmbeddingModel, entries: list[RankingEntry]) -> list[dict]:
    """JSON-ready rows for a :func:`rank_teams` result."""
    return [
        {"rank": e.rank, "team": model.registry.name_of(e.team), "victories": e.victories}
        for e in entries
    ]


def format_aligned(records: list[dict], columns: Sequence[str]) -> str:
    """Render records as aligned plain-text columns for terminal display."""
    rows = [[_cell(r[c]) for c in columns] for r in records]
    widths = [max(len(c), *(len(row[i]) for row in rows)) if rows else len(c)
              for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines)


def _cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)
