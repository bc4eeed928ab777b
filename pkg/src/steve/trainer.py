"""Learning winner/loser team vectors with mini-batch Adam.

Each team owns two unit-norm rows: a winner representation (``phi``) and a
loser representation (``psi``).  A draw pulls the two winner rows together;
a decided match pulls the winner's ``phi`` row toward the loser's ``psi``
row.  Losses are weighted ``s / x_max`` so old seasons matter less.  Updates
are sparse: only rows touched by a batch move, and exactly those rows are
renormalized to unit length after every Adam step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .match_data import Dataset, MatchQuad, TeamRegistry

ProgressSink = Callable[[int, float], None]


@dataclass
class TrainConfig:
    """Hyperparameters for :func:`train`.

    ``x_max`` is normally left ``None`` and taken from the dataset; setting
    it explicitly re-bases the season weighting (it must cover every season
    index present).
    """

    delta: int = 16
    batch_size: int = 128
    learning_rate: float = 0.0001
    epochs: int = 40
    weight_decay: float = 1e-6
    seed: int = 7
    x_max: int | None = None

    def __post_init__(self):
        if self.delta < 1:
            raise ValueError("delta must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if self.weight_decay < 0:
            raise ValueError("weight_decay must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.x_max is not None and self.x_max < 1:
            raise ValueError("x_max must be >= 1")


@dataclass
class EmbeddingModel:
    """Winner matrix ``phi`` and loser matrix ``psi``, one row per team.

    Rows are kept at unit L2 norm.  Row ``i`` of either matrix belongs to
    the team with id ``i + 1`` (registry ids are 1-based).
    """

    phi: np.ndarray
    psi: np.ndarray
    delta: int
    registry: TeamRegistry
    x_max: int

    def __post_init__(self):
        self.phi = np.ascontiguousarray(self.phi, dtype=np.float64)
        self.psi = np.ascontiguousarray(self.psi, dtype=np.float64)
        expected = (self.registry.m, self.delta)
        if self.phi.shape != expected or self.psi.shape != expected:
            raise ValueError(
                f"phi/psi must have shape {expected}, got {self.phi.shape} and {self.psi.shape}"
            )
        if self.x_max < 1:
            raise ValueError("x_max must be >= 1")

    @property
    def m(self) -> int:
        return self.registry.m

    def winner_vec(self, team_id: int) -> np.ndarray:
        self.registry.check_id(team_id)
        return self.phi[team_id - 1]

    def loser_vec(self, team_id: int) -> np.ndarray:
        self.registry.check_id(team_id)
        return self.psi[team_id - 1]


@dataclass
class AdamState:
    """First/second moment accumulators for both matrices.

    The timestep advances once per batch; bias correction uses the global
    timestep even though only touched rows are updated.
    """

    m_phi: np.ndarray
    v_phi: np.ndarray
    m_psi: np.ndarray
    v_psi: np.ndarray
    t: int = 0

    BETA1 = 0.9
    BETA2 = 0.999
    EPS = 1e-8

    @classmethod
    def zeros(cls, m: int, delta: int) -> "AdamState":
        shape = (m, delta)
        return cls(
            m_phi=np.zeros(shape),
            v_phi=np.zeros(shape),
            m_psi=np.zeros(shape),
            v_psi=np.zeros(shape),
        )


@dataclass
class GradientUpdate:
    """Sparse per-batch gradients: only rows touched by the batch appear.

    Row indices are 0-based matrix rows (team id minus 1), sorted ascending.
    ``phi_grads[i]`` is the accumulated gradient for matrix row
    ``phi_rows[i]``; likewise for ``psi``.
    """

    phi_rows: np.ndarray
    phi_grads: np.ndarray
    psi_rows: np.ndarray
    psi_grads: np.ndarray

    def as_dict(self) -> dict[tuple[str, int], np.ndarray]:
        out: dict[tuple[str, int], np.ndarray] = {}
        for row, grad in zip(self.phi_rows, self.phi_grads):
            out[("phi", int(row))] = grad
        for row, grad in zip(self.psi_rows, self.psi_grads):
            out[("psi", int(row))] = grad
        return out


def init_model(
    m: int,
    delta: int,
    seed: int | np.random.SeedSequence,
    registry: TeamRegistry | None = None,
    x_max: int = 1,
) -> EmbeddingModel:
    """Create a model with rows drawn i.i.d. N(0, 1), then unit-normalized.

    The draw order is fixed (phi first, then psi) so a given seed always
    produces the bit-identical model.  When no registry is supplied, one is
    generated with zero-padded placeholder names ``team_01 .. team_m``.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if delta < 1:
        raise ValueError("delta must be >= 1")
    if registry is None:
        width = len(str(m))
        registry = TeamRegistry(f"team_{i:0{width}d}" for i in range(1, m + 1))
    elif registry.m != m:
        raise ValueError(f"registry holds {registry.m} teams, expected {m}")
    rng = np.random.default_rng(seed)
    phi = rng.standard_normal((m, delta))
    psi = rng.standard_normal((m, delta))
    phi /= np.linalg.norm(phi, axis=1, keepdims=True)
    psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    return EmbeddingModel(phi=phi, psi=psi, delta=delta, registry=registry, x_max=x_max)


def sample_loss(model: EmbeddingModel, q: MatchQuad) -> float:
    """Season-weighted squared-distance loss of a single quadruple.

    ``(s / x_max) * (d * |phi_a - phi_b|^2 + (1 - d) * |phi_a - psi_b|^2)``
    """
    model.registry.check_id(q.a)
    model.registry.check_id(q.b)
    if not 1 <= q.s <= model.x_max:
        raise ValueError(f"season index {q.s} out of range 1..{model.x_max}")
    other = model.phi[q.b - 1] if q.d == 1 else model.psi[q.b - 1]
    diff = model.phi[q.a - 1] - other
    return (q.s / model.x_max) * float(diff @ diff)


def _batch_arrays(
    model: EmbeddingModel, a: np.ndarray, b: np.ndarray, s: np.ndarray, d: np.ndarray,
    weight_decay: float,
) -> tuple[float, GradientUpdate]:
    """Vectorized loss + sparse gradients over pre-validated index arrays."""
    phi, psi = model.phi, model.psi
    w = s / model.x_max
    draws = d == 1

    other = psi[b].copy()
    other[draws] = phi[b[draws]]
    diff = phi[a] - other
    data_loss = float(np.sum(w * np.einsum("ij,ij->i", diff, diff)))

    # d(loss)/d(phi_a) per sample; the opposing row gets the negation.
    g = (2.0 * w)[:, None] * diff
    phi_target = np.concatenate([a, b[draws]])
    phi_contrib = np.concatenate([g, -g[draws]])
    psi_target = b[~draws]
    psi_contrib = -g[~draws]

    phi_rows, inv = np.unique(phi_target, return_inverse=True)
    phi_grads = np.zeros((phi_rows.size, model.delta))
    np.add.at(phi_grads, inv, phi_contrib)
    if psi_target.size:
        psi_rows, inv = np.unique(psi_target, return_inverse=True)
        psi_grads = np.zeros((psi_rows.size, model.delta))
        np.add.at(psi_grads, inv, psi_contrib)
    else:
        psi_rows = np.empty(0, dtype=np.int64)
        psi_grads = np.empty((0, model.delta))

    loss = data_loss
    if weight_decay:
        # Coupled L2 on exactly the touched rows, evaluated pre-update.
        loss += weight_decay * (
            float(np.sum(phi[phi_rows] ** 2)) + float(np.sum(psi[psi_rows] ** 2))
        )
        phi_grads += 2.0 * weight_decay * phi[phi_rows]
        psi_grads += 2.0 * weight_decay * psi[psi_rows]

    return loss, GradientUpdate(phi_rows, phi_grads, psi_rows, psi_grads)


def batch_gradients(
    model: EmbeddingModel, batch: Sequence[MatchQuad], weight_decay: float = 0.0
) -> tuple[float, GradientUpdate]:
    """Batch loss and accumulated analytic gradients.

    The loss is the sum of :func:`sample_loss` over the batch plus
    ``weight_decay * sum(|row|^2)`` over the touched rows.  A row touched by
    several samples has its gradients summed; weight decay contributes
    ``2 * weight_decay * row`` once per touched row.
    """
    if not batch:
        raise ValueError("batch must be non-empty")
    n = len(batch)
    a = np.fromiter((q.a for q in batch), dtype=np.int64, count=n)
    b = np.fromiter((q.b for q in batch), dtype=np.int64, count=n)
    s = np.fromiter((q.s for q in batch), dtype=np.float64, count=n)
    d = np.fromiter((q.d for q in batch), dtype=np.int64, count=n)
    m = model.m
    if (a < 1).any() or (a > m).any() or (b < 1).any() or (b > m).any():
        raise ValueError("batch contains team ids outside the registry")
    if (s < 1).any() or (s > model.x_max).any():
        raise ValueError(f"batch contains season indices outside 1..{model.x_max}")
    return _batch_arrays(model, a - 1, b - 1, s, d, weight_decay)


def _adam_step(
    model: EmbeddingModel, opt: AdamState, update: GradientUpdate, learning_rate: float
) -> None:
    """One Adam step on the touched rows, followed by their renormalization."""
    opt.t += 1
    bc1 = 1.0 - AdamState.BETA1 ** opt.t
    bc2 = 1.0 - AdamState.BETA2 ** opt.t
    for rows, grads, mat, mom, vel in (
        (update.phi_rows, update.phi_grads, model.phi, opt.m_phi, opt.v_phi),
        (update.psi_rows, update.psi_grads, model.psi, opt.m_psi, opt.v_psi),
    ):
        if rows.size == 0:
            continue
        mom[rows] = AdamState.BETA1 * mom[rows] + (1.0 - AdamState.BETA1) * grads
        vel[rows] = AdamState.BETA2 * vel[rows] + (1.0 - AdamState.BETA2) * grads**2
        step = learning_rate * (mom[rows] / bc1) / (np.sqrt(vel[rows] / bc2) + AdamState.EPS)
        moved = mat[rows] - step
        mat[rows] = moved / np.linalg.norm(moved, axis=1, keepdims=True)


def train(
    ds: Dataset,
    cfg: TrainConfig,
    progress: ProgressSink | None = None,
    on_batch: Callable[[EmbeddingModel, GradientUpdate], None] | None = None,
) -> EmbeddingModel:
    """Train a model on ``ds``: seeded shuffling, mini-batches, sparse Adam.

    Every epoch reshuffles the quadruples with one generator advanced across
    epochs, so identical inputs and seed give a bit-identical model.  The
    optional ``progress`` sink receives ``(epoch, mean_loss)`` where
    ``mean_loss`` is the summed batch loss (weight decay included) divided
    by the number of quadruples.  ``on_batch`` runs after each completed
    batch update and is meant for instrumentation.
    """
    if not ds.quads:
        raise ValueError("dataset is empty")
    x_max = ds.x_max if cfg.x_max is None else cfg.x_max
    if x_max < ds.x_max:
        raise ValueError(f"cfg.x_max={cfg.x_max} is below the dataset's newest season {ds.x_max}")

    init_ss, shuffle_ss = np.random.SeedSequence(cfg.seed).spawn(2)
    model = init_model(ds.registry.m, cfg.delta, init_ss, registry=ds.registry, x_max=x_max)
    opt = AdamState.zeros(model.m, cfg.delta)

    n = len(ds.quads)
    a = np.fromiter((q.a for q in ds.quads), dtype=np.int64, count=n) - 1
    b = np.fromiter((q.b for q in ds.quads), dtype=np.int64, count=n) - 1
    s = np.fromiter((q.s for q in ds.quads), dtype=np.float64, count=n)
    d = np.fromiter((q.d for q in ds.quads), dtype=np.int64, count=n)

    shuffle_rng = np.random.default_rng(shuffle_ss)
    for epoch in range(1, cfg.epochs + 1):
        perm = shuffle_rng.permutation(n)
        total = 0.0
        for start in range(0, n, cfg.batch_size):
            idx = perm[start : start + cfg.batch_size]
            loss, update = _batch_arrays(model, a[idx], b[idx], s[idx], d[idx], cfg.weight_decay)
            _adam_step(model, opt, update, cfg.learning_rate)
            total += loss
            if on_batch is not None:
                on_batch(model, update)
        if progress is not None:
            progress(epoch, total / n)
    return model
