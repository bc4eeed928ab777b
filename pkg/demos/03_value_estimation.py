"""Market-value estimation: learned vectors versus count-based features.

A synthetic league ties each club's market value to its latent strength
(plus 10% noise).  Clubs close in strength often draw; otherwise the
stronger side usually wins, and goals are painted on afterwards.  Under
the same 5-fold cross-validated MLP we compare:

  * steve-32       - winner and loser vector concatenated; learned from
                     nothing but results (who played, who won or drew)
  * shuffled-32    - the same vectors assigned to the wrong clubs, a
                     no-information control
  * season-stats   - 18 count features per club (needs the goal counts)
  * cat-3 / sum-3  - count features over the last three seasons

On a clean synthetic league the count features are close to sufficient
statistics, so they set a very strong bar; the learned vectors recover a
large part of that signal without ever seeing a goal count.

Run:  python demos/03_value_estimation.py  (takes ~half a minute)
"""

import io

import numpy as np

from steve import (
    Task,
    TrainConfig,
    cat_features,
    cross_validate,
    ingest_csv,
    quartile_labels,
    season_stats,
    steve_features,
    sum_features,
    to_quads,
    train,
)

N_TEAMS = 60
SEASONS = 3


def synth_league(seed=0, rounds=2):
    """League CSV plus a market value table keyed by team name."""
    rng = np.random.default_rng(seed)
    names = [f"Club {i:02d}" for i in range(1, N_TEAMS + 1)]
    strengths = np.linspace(1.6, -1.6, N_TEAMS)
    lines = ["season_label,competition,home,away,home_goals,away_goals"]
    for s in range(SEASONS):
        label = f"{2015 + s}/{2016 + s}"
        for _ in range(rounds):
            for i in range(N_TEAMS):
                for j in range(i + 1, N_TEAMS):
                    gap = strengths[i] - strengths[j]
                    if rng.random() < 0.5 * np.exp(-((gap / 0.4) ** 2)):
                        hg = ag = rng.poisson(1.1)  # near-equals often draw
                    else:
                        win_i = rng.random() < 1.0 / (1.0 + np.exp(-5 * gap))
                        lose_goals = rng.poisson(0.8)
                        win_goals = lose_goals + 1 + rng.poisson(0.7)
                        hg, ag = (win_goals, lose_goals) if win_i else (lose_goals, win_goals)
                    lines.append(f"{label},NationalLeague,{names[i]},{names[j]},{hg},{ag}")
    values = (140.0 + 70.0 * strengths) * (1 + 0.1 * rng.standard_normal(N_TEAMS))
    return "\n".join(lines) + "\n", dict(zip(names, np.maximum(values, 5.0)))


def main():
    csv_text, value_table = synth_league()
    registry, raw = ingest_csv(io.StringIO(csv_text))
    dataset = to_quads(raw, registry)
    teams = list(range(1, registry.m + 1))
    values = np.array([value_table[registry.name_of(t)] for t in teams])
    labels = quartile_labels(values)

    model = train(dataset, TrainConfig(delta=16, learning_rate=3e-4, epochs=40, seed=1))
    vectors = steve_features(model, teams)
    newest = dataset.x_max
    representations = {
        "steve-32": (vectors, False),
        "shuffled-32": (vectors[np.random.default_rng(99).permutation(len(vectors))], False),
        "season-stats": (np.array([season_stats(raw, registry, t, newest) for t in teams]), True),
        "cat-3": (np.array([cat_features(raw, registry, t, newest, 3) for t in teams]), True),
        "sum-3": (np.array([sum_features(raw, registry, t, newest, 3) for t in teams]), True),
    }

    print(f"regression: market value in million EUR, {N_TEAMS} clubs, 5-fold CV")
    print(f"{'representation':<14} {'RMSE':>16} {'MAE':>16} {'MMAE':>16}")
    for name, (feats, standardize) in representations.items():
        report = cross_validate(feats, values, Task.REGRESSION, seed=7,
                                standardize_features=standardize)
        cells = [f"{report.mean[m]:.1f} ± {report.std[m]:.1f}"
                 for m in ("rmse", "mae", "median_ae")]
        print(f"{name:<14} {cells[0]:>16} {cells[1]:>16} {cells[2]:>16}")

    print("\nclassification: which value quartile does a club belong to?")
    print(f"{'representation':<14} {'micro F1':>14} {'macro F1':>14}")
    for name, (feats, standardize) in representations.items():
        report = cross_validate(feats, labels, Task.CLASSIFICATION, seed=7,
                                standardize_features=standardize)
        cells = [f"{report.mean[m]:.2f} ± {report.std[m]:.2f}"
                 for m in ("micro_f1", "macro_f1")]
        print(f"{name:<14} {cells[0]:>14} {cells[1]:>14}")

    print("\nthe shuffled control marks the no-information floor; the learned "
          "vectors close much of the gap to the goal-aware count features "
          "using match results alone")


if __name__ == "__main__":
    main()
