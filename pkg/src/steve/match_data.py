"""Match-result ingestion: team registry, raw results and training quadruples.

The training data format is a quadruple per match, ``(a, b, s, d)``: the two
team ids, the season index and a draw flag.  Decided matches are stored
winner-first (``a`` won iff ``d == 0``); draws keep home-team-first order.
Raw results (goals, competition) are retained alongside the quadruples
because the count-based baseline features need them.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable


class Competition(Enum):
    """The three competition groups distinguished by the baseline features."""

    NATIONAL_LEAGUE = "NationalLeague"
    CHAMPIONS_LEAGUE = "ChampionsLeague"
    EUROPA_LEAGUE = "EuropaLeague"


#: Required CSV columns, in canonical order.
CSV_FIELDS = ("season_label", "competition", "home", "away", "home_goals", "away_goals")


class TeamRegistry:
    """Bidirectional map between team names and dense integer ids.

    Ids are 1-based (``1..m``), assigned in first-appearance order, so
    re-parsing the same input always yields the same ids.
    """

    def __init__(self, names: Iterable[str] = ()):
        self._names: list[str] = []
        self._ids: dict[str, int] = {}
        for name in names:
            self.add(name)

    def add(self, name: str) -> int:
        """Register ``name`` if new and return its id."""
        if not name:
            raise ValueError("team name must be non-empty")
        existing = self._ids.get(name)
        if existing is not None:
            return existing
        team_id = len(self._names) + 1
        self._names.append(name)
        self._ids[name] = team_id
        return team_id

    def id_of(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise ValueError(f"unknown team name: {name!r}") from None

    def name_of(self, team_id: int) -> str:
        self.check_id(team_id)
        return self._names[team_id - 1]

    def check_id(self, team_id: int) -> None:
        if not isinstance(team_id, int) or isinstance(team_id, bool):
            raise ValueError(f"team id must be an integer, got {team_id!r}")
        if not 1 <= team_id <= len(self._names):
            raise ValueError(f"team id {team_id} out of range 1..{len(self._names)}")

    @property
    def names(self) -> list[str]:
        return list(self._names)

    @property
    def m(self) -> int:
        """Number of registered teams."""
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._ids

    def __len__(self) -> int:
        return len(self._names)


@dataclass(frozen=True)
class RawMatch:
    """One match result, including the goal counts the quadruples drop."""

    home: int
    away: int
    home_goals: int
    away_goals: int
    season_label: str
    season_index: int
    competition: Competition

    def __post_init__(self):
        if self.home == self.away:
            raise ValueError("home and away team must differ")
        if self.home_goals < 0 or self.away_goals < 0:
            raise ValueError("goal counts must be non-negative")
        if self.season_index < 1:
            raise ValueError("season_index must be >= 1")


@dataclass(frozen=True)
class MatchQuad:
    """Canonical training record ``(a, b, s, d)``; ``a`` won iff ``d == 0``."""

    a: int
    b: int
    s: int
    d: int

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("a and b must differ")
        if self.d not in (0, 1):
            raise ValueError("d must be 0 or 1")
        if self.s < 1:
            raise ValueError("s must be >= 1")


@dataclass
class Dataset:
    """Training quadruples plus the raw matches and registry behind them."""

    quads: list[MatchQuad]
    x_max: int
    registry: TeamRegistry
    raw: list[RawMatch] = field(default_factory=list)

    def __post_init__(self):
        m = self.registry.m
        for q in self.quads:
            if not (1 <= q.a <= m and 1 <= q.b <= m):
                raise ValueError(f"quad references unknown team id: {q}")
            if q.s > self.x_max:
                raise ValueError(f"quad season {q.s} exceeds x_max={self.x_max}")


def ingest_csv(stream: Iterable[str]) -> tuple[TeamRegistry, list[RawMatch]]:
    """Parse match rows from ``stream`` (an iterable of CSV lines).

    The header row is mandatory and must name exactly the columns in
    :data:`CSV_FIELDS` (any order).  Season indices are assigned by sorting
    the distinct season labels lexicographically ascending, so labels must
    be zero-padded (e.g. ``"2018/2019"``) for lexical order to match
    chronology.  Malformed rows abort the parse with their row number.
    """
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty input: missing header row") from None
    header = [h.strip() for h in header]
    if sorted(header) != sorted(CSV_FIELDS):
        raise ValueError(
            f"row 1: header must name columns {', '.join(CSV_FIELDS)}; got {header}"
        )
    col = {name: header.index(name) for name in CSV_FIELDS}

    competitions = {c.value: c for c in Competition}
    registry = TeamRegistry()
    staged = []  # (row_no, home_id, away_id, hg, ag, label, competition)
    for row_no, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue  # ignore blank lines
        if len(row) != len(CSV_FIELDS):
            raise ValueError(f"row {row_no}: expected {len(CSV_FIELDS)} fields, got {len(row)}")
        label = row[col["season_label"]].strip()
        comp_tag = row[col["competition"]].strip()
        home = row[col["home"]].strip()
        away = row[col["away"]].strip()
        if not label:
            raise ValueError(f"row {row_no}: empty season_label")
        if comp_tag not in competitions:
            raise ValueError(
                f"row {row_no}: unknown competition tag {comp_tag!r} "
                f"(expected one of {sorted(competitions)})"
            )
        if not home or not away:
            raise ValueError(f"row {row_no}: empty team name")
        if home == away:
            raise ValueError(f"row {row_no}: home and away team are both {home!r}")
        try:
            hg = int(row[col["home_goals"]])
            ag = int(row[col["away_goals"]])
        except ValueError:
            raise ValueError(f"row {row_no}: goals must be integers") from None
        if hg < 0 or ag < 0:
            raise ValueError(f"row {row_no}: goals must be non-negative")
        staged.append((registry.add(home), registry.add(away), hg, ag, label, competitions[comp_tag]))

    if not staged:
        raise ValueError("empty input: no match rows")

    season_index = {label: i for i, label in enumerate(sorted({s[4] for s in staged}), start=1)}
    raw = [
        RawMatch(
            home=home,
            away=away,
            home_goals=hg,
            away_goals=ag,
            season_label=label,
            season_index=season_index[label],
            competition=comp,
        )
        for home, away, hg, ag, label, comp in staged
    ]
    return registry, raw


def to_quads(raw: list[RawMatch], registry: TeamRegistry) -> Dataset:
    """Turn raw results into the winner-first quadruple dataset.

    Decided matches emit ``(winner, loser, s, 0)``; draws emit
    ``(home, away, s, 1)``.  The raw list is kept on the dataset for the
    baseline feature extractors.
    """
    if not raw:
        raise ValueError("raw match list is empty")
    quads = []
    for match in raw:
        if match.home_goals > match.away_goals:
            quads.append(MatchQuad(match.home, match.away, match.season_index, 0))
        elif match.away_goals > match.home_goals:
            quads.append(MatchQuad(match.away, match.home, match.season_index, 0))
        else:
            quads.append(MatchQuad(match.home, match.away, match.season_index, 1))
    x_max = max(m.season_index for m in raw)
    return Dataset(quads=quads, x_max=x_max, registry=registry, raw=raw)


def dataset_summary(ds: Dataset) -> dict:
    """Summarize a dataset: match/team counts, draw fraction, per-season counts.

    The result is a plain dict ready for JSON serialization.  Seasons
    ``1..x_max`` all appear in ``per_season``, with count 0 where the
    dataset holds no matches (possible for sliced datasets).
    """
    matches = len(ds.quads)
    draws = sum(q.d for q in ds.quads)
    labels: dict[int, str] = {}
    for match in ds.raw:
        labels.setdefault(match.season_index, match.season_label)
    counts = {s: 0 for s in range(1, ds.x_max + 1)}
    for q in ds.quads:
        counts[q.s] += 1
    return {
        "matches": matches,
        "teams": ds.registry.m,
        "draw_fraction": draws / matches if matches else 0.0,
        "per_season": [
            {"season_index": s, "season_label": labels.get(s), "matches": counts[s]}
            for s in range(1, ds.x_max + 1)
        ],
    }
