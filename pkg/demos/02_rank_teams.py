"""Rank a hand-picked list of teams through a simulated round-robin.

Every pair plays one hypothetical match decided by cross distances: team a
beats team b when a's winner vector is closer to b's loser vector than the
other way around.  Victory counts are the relative strengths.  The league
below plants a strength ladder, so the recovered ranking should follow it.

Run:  python demos/02_rank_teams.py
"""

import numpy as np

from steve import (
    Dataset,
    MatchQuad,
    TeamRegistry,
    TrainConfig,
    head_to_head,
    rank_teams,
    train,
)

NAMES = [
    "Real Madrid", "Bayern", "Liverpool", "Inter", "Porto", "Ajax",
    "Brugge", "Bremen", "Nuremberg", "Toulouse", "Cardiff", "Parma",
]


def ladder_league(seed=0, seasons=4, rounds=2):
    """Matches between ladder positions: the higher club usually wins."""
    rng = np.random.default_rng(seed)
    registry = TeamRegistry(NAMES)
    n = registry.m
    quads = []
    for s in range(1, seasons + 1):
        for _ in range(rounds):
            for i in range(1, n + 1):
                for j in range(i + 1, n + 1):
                    gap = (j - i) / n  # ladder distance in [0, 1)
                    if rng.random() < 0.25 * np.exp(-((gap * 6) ** 2)):
                        quads.append(MatchQuad(i, j, s, 1))  # close clubs may draw
                    elif rng.random() < 1.0 / (1.0 + np.exp(-8 * gap)):
                        quads.append(MatchQuad(i, j, s, 0))
                    else:
                        quads.append(MatchQuad(j, i, s, 0))
    return Dataset(quads=quads, x_max=seasons, registry=registry, raw=[])


def main():
    dataset = ladder_league()
    model = train(dataset, TrainConfig(delta=16, batch_size=32, learning_rate=0.01, epochs=80, seed=2))
    registry = dataset.registry

    print("round-robin over all twelve clubs (strongest first):")
    entries = rank_teams(model, list(range(1, registry.m + 1)))
    for e in entries:
        print(f"  {e.rank:>2}. {registry.name_of(e.team):<12} {e.victories:g} victories")
    total = sum(e.victories for e in entries)
    print(f"victories sum to {total:g} = 12*11/2, as they must\n")

    a, b = registry.id_of("Real Madrid"), registry.id_of("Parma")
    duel = head_to_head(model, a, b)
    print(f"head-to-head Real Madrid vs Parma: alpha {duel.alpha_score:.3f}, "
          f"beta {duel.beta_score:.3f} -> {duel.outcome.value}")

    print("\nranking a smaller custom list:")
    subset = [registry.id_of(n) for n in ("Ajax", "Cardiff", "Bayern", "Bremen")]
    for e in rank_teams(model, subset):
        print(f"  {e.rank}. {registry.name_of(e.team):<8} {e.victories:g}")


if __name__ == "__main__":
    main()
