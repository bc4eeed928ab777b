"""Shared synthetic-league builders and small statistics for the tests."""

from __future__ import annotations

import numpy as np

from steve.match_data import Dataset, MatchQuad, TeamRegistry


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def spearman(x, y) -> float:
    """Spearman rank correlation with average ranks for ties."""

    def ranks(values):
        v = np.asarray(values, dtype=np.float64)
        order = np.argsort(v, kind="stable")
        pos = np.empty(len(v))
        pos[order] = np.arange(1, len(v) + 1)
        out = np.empty(len(v))
        for val in np.unique(v):
            mask = v == val
            out[mask] = pos[mask].mean()
        return out

    rx, ry = ranks(x), ranks(y)
    rx -= rx.mean()
    ry -= ry.mean()
    return float((rx * ry).sum() / np.sqrt((rx**2).sum() * (ry**2).sum()))


def placeholder_registry(n_teams: int) -> TeamRegistry:
    width = len(str(n_teams))
    return TeamRegistry(f"team_{i:0{width}d}" for i in range(1, n_teams + 1))


def strength_league(
    n_teams: int,
    seasons: int,
    rounds: int,
    seed: int,
    steep: float = 4.0,
    draw_amp: float = 0.10,
    draw_width: float = np.inf,
    strengths=None,
):
    """Quadruple dataset from latent strengths with logistic outcomes.

    Every unordered pair meets ``rounds`` times per season.  A match is a
    draw with probability ``draw_amp * exp(-(gap / draw_width)^2)`` (just
    ``draw_amp`` when ``draw_width`` is inf); otherwise the winner is drawn
    from a logistic in the strength gap.  Returns (dataset, strengths) with
    team ``i`` having strength ``strengths[i - 1]``.
    """
    rng = np.random.default_rng(seed)
    if strengths is None:
        strengths = np.sort(rng.uniform(-2.0, 2.0, n_teams))[::-1]
    strengths = np.asarray(strengths, dtype=np.float64)
    quads = []
    for s in range(1, seasons + 1):
        for _ in range(rounds):
            for i in range(1, n_teams + 1):
                for j in range(i + 1, n_teams + 1):
                    gap = strengths[i - 1] - strengths[j - 1]
                    p_draw = draw_amp if np.isinf(draw_width) else draw_amp * np.exp(-((gap / draw_width) ** 2))
                    if rng.random() < p_draw:
                        quads.append(MatchQuad(i, j, s, 1))
                    else:
                        win_i = rng.random() < sigmoid(steep * gap)
                        w, l = (i, j) if win_i else (j, i)
                        quads.append(MatchQuad(w, l, s, 0))
    ds = Dataset(quads=quads, x_max=seasons, registry=placeholder_registry(n_teams), raw=[])
    return ds, strengths


def circulant_wins(team_ids: list[int], beats: int) -> list[tuple[int, int]]:
    """Balanced sub-tournament: each team beats the next ``beats`` around a circle."""
    n = len(team_ids)
    return [
        (team_ids[i], team_ids[(i + step) % n])
        for i in range(n)
        for step in range(1, beats + 1)
    ]


def hierarchy_dataset(n_teams: int = 4, n_rounds: int = 20) -> Dataset:
    """Strict transitive hierarchy: lower team id always beats higher."""
    quads = [
        MatchQuad(i, j, 1, 0)
        for _ in range(n_rounds)
        for i in range(1, n_teams + 1)
        for j in range(i + 1, n_teams + 1)
    ]
    return Dataset(quads=quads, x_max=1, registry=placeholder_registry(n_teams), raw=[])


def draw_pair_dataset(seed: int, n_others: int = 8, seasons: int = 3, rounds: int = 3) -> Dataset:
    """Teams 1 and 2 always draw each other and share results against others."""
    rng = np.random.default_rng(seed)
    p, q = 1, 2
    others = list(range(3, 3 + n_others))
    quads = []
    for s in range(1, seasons + 1):
        for _ in range(rounds):
            quads.append(MatchQuad(p, q, s, 1))
            for o in others:
                if rng.random() < 0.5:
                    quads.append(MatchQuad(p, o, s, 0))
                    quads.append(MatchQuad(q, o, s, 0))
                else:
                    quads.append(MatchQuad(o, p, s, 0))
                    quads.append(MatchQuad(o, q, s, 0))
        for a, b in circulant_wins(others, n_others // 2 - 1):
            quads.append(MatchQuad(a, b, s, 0))
    return Dataset(quads=quads, x_max=seasons, registry=placeholder_registry(2 + n_others), raw=[])


def common_victims_dataset(n_others: int = 8, seasons: int = 3, rounds: int = 2) -> Dataset:
    """Teams 1 and 2 beat every other team but never meet each other."""
    p, q = 1, 2
    others = list(range(3, 3 + n_others))
    quads = []
    for s in range(1, seasons + 1):
        for _ in range(rounds):
            for o in others:
                quads.append(MatchQuad(p, o, s, 0))
                quads.append(MatchQuad(q, o, s, 0))
        for a, b in circulant_wins(others, n_others // 2 - 1):
            quads.append(MatchQuad(a, b, s, 0))
    return Dataset(quads=quads, x_max=seasons, registry=placeholder_registry(2 + n_others), raw=[])


def league_csv(n_teams: int = 8, seasons: int = 2, seed: int = 0, rounds: int = 2) -> str:
    """Matches CSV text: national round-robins plus a few international rows."""
    rng = np.random.default_rng(seed)
    names = [f"Club {chr(ord('A') + i)}" for i in range(n_teams)]
    lines = ["season_label,competition,home,away,home_goals,away_goals"]
    for s in range(seasons):
        label = f"{2010 + s}/{2011 + s}"
        for _ in range(rounds):
            for i in range(n_teams):
                for j in range(n_teams):
                    if i == j:
                        continue
                    hg, ag = rng.integers(0, 5), rng.integers(0, 5)
                    lines.append(f"{label},NationalLeague,{names[i]},{names[j]},{hg},{ag}")
        # top teams also meet in Europe
        for comp, (i, j) in (("ChampionsLeague", (0, 1)), ("EuropaLeague", (2, 3))):
            hg, ag = rng.integers(0, 5), rng.integers(0, 5)
            lines.append(f"{label},{comp},{names[i]},{names[j]},{hg},{ag}")
    return "\n".join(lines) + "\n"


def values_csv(names: list[str], seed: int = 0) -> str:
    rng = np.random.default_rng(seed)
    lines = ["team,value_millions"]
    for name in names:
        lines.append(f"{name},{rng.uniform(10, 1200):.2f}")
    return "\n".join(lines) + "\n"
