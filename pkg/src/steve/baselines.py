"""Count-based baseline feature vectors built from raw match results.

The per-season vector has 18 entries: five counts (wins, draws, defeats,
goals for, goals against) for each of the three competition groups, then
three goals-per-match ratios (overall, national, international).  Windowed
variants either concatenate (CAT) or sum (SUM) the per-season vectors of
the most recent ``x`` seasons.
"""

from __future__ import annotations

import numpy as np

from .match_data import Competition, RawMatch, TeamRegistry

#: Competition blocks in vector order.
COMPETITION_ORDER = (
    Competition.NATIONAL_LEAGUE,
    Competition.CHAMPIONS_LEAGUE,
    Competition.EUROPA_LEAGUE,
)

_BLOCK_PREFIXES = ("national", "champions_league", "europa_league")
_BLOCK_STATS = ("wins", "draws", "defeats", "goals_for", "goals_against")

#: Names of the 18 entries of a season-stats vector, in order.
SEASON_STATS_COLUMNS = tuple(
    f"{prefix}_{stat}" for prefix in _BLOCK_PREFIXES for stat in _BLOCK_STATS
) + (
    "goals_per_match",
    "goals_per_national_match",
    "goals_per_international_match",
)


def cat_feature_columns(x: int) -> tuple[str, ...]:
    """Column names for a CAT-x vector; ``s0`` is the newest season."""
    return tuple(f"s{i}_{name}" for i in range(x) for name in SEASON_STATS_COLUMNS)


def _tally_matches(
    raw: list[RawMatch], team: int, seasons: set[int]
) -> dict[int, np.ndarray]:
    """Per-season 3x5 count blocks (comp x [w, d, l, gf, ga]) for one team."""
    comp_row = {comp: i for i, comp in enumerate(COMPETITION_ORDER)}
    tallies = {season: np.zeros((3, 5)) for season in seasons}
    for match in raw:
        if match.season_index not in tallies:
            continue
        if match.home == team:
            gf, ga = match.home_goals, match.away_goals
        elif match.away == team:
            gf, ga = match.away_goals, match.home_goals
        else:
            continue
        block = tallies[match.season_index][comp_row[match.competition]]
        if gf > ga:
            block[0] += 1
        elif gf == ga:
            block[1] += 1
        else:
            block[2] += 1
        block[3] += gf
        block[4] += ga
    return tallies


def _vector_from_tally(tally: np.ndarray) -> np.ndarray:
    """Assemble the 18-entry vector from a 3x5 count block."""
    counts = tally.reshape(15)
    matches_per_comp = tally[:, :3].sum(axis=1)
    goals_per_comp = tally[:, 3]
    total_matches = matches_per_comp.sum()
    national_matches = matches_per_comp[0]
    intl_matches = matches_per_comp[1] + matches_per_comp[2]
    total_goals = goals_per_comp.sum()
    national_goals = goals_per_comp[0]
    intl_goals = goals_per_comp[1] + goals_per_comp[2]
    ratios = np.array(
        [
            total_goals / total_matches if total_matches else 0.0,
            national_goals / national_matches if national_matches else 0.0,
            intl_goals / intl_matches if intl_matches else 0.0,
        ]
    )
    return np.concatenate([counts, ratios])


def season_stats(
    raw: list[RawMatch], registry: TeamRegistry, team: int, season: int
) -> np.ndarray:
    """18-entry count vector for one team and season.

    Counts cover all of the team's matches (home or away) in the season;
    goals mean goals scored by this team.  Ratio entries are 0 whenever the
    corresponding match count is 0.
    """
    registry.check_id(team)
    if season < 1:
        raise ValueError("season index must be >= 1")
    tally = _tally_matches(raw, team, {season})[season]
    return _vector_from_tally(tally)


def _season_window(newest_season: int, x: int) -> list[int]:
    if x < 1:
        raise ValueError("x must be >= 1")
    if newest_season - x + 1 < 1:
        raise ValueError(
            f"window of {x} seasons ending at {newest_season} reaches below season 1"
        )
    return [newest_season - i for i in range(x)]


def cat_features(
    raw: list[RawMatch], registry: TeamRegistry, team: int, newest_season: int, x: int
) -> np.ndarray:
    """Concatenated season-stats of the last ``x`` seasons, newest first."""
    registry.check_id(team)
    seasons = _season_window(newest_season, x)
    tallies = _tally_matches(raw, team, set(seasons))
    return np.concatenate([_vector_from_tally(tallies[s]) for s in seasons])


def sum_features(
    raw: list[RawMatch],
    registry: TeamRegistry,
    team: int,
    newest_season: int,
    x: int,
    recompute_ratios: bool = False,
) -> np.ndarray:
    """Elementwise sum of the last ``x`` season-stats vectors.

    By default the three ratio entries are summed along with the counts
    (literal reading).  With ``recompute_ratios=True`` they are instead
    recomputed from the summed goal and match totals.
    """
    registry.check_id(team)
    seasons = _season_window(newest_season, x)
    tallies = _tally_matches(raw, team, set(seasons))
    if recompute_ratios:
        return _vector_from_tally(sum(tallies[s] for s in seasons))
    vectors = [_vector_from_tally(tallies[s]) for s in seasons]
    return np.sum(vectors, axis=0)
