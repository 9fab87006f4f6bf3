"""Self-supervised MLP autoencoder trained with plain SGD.

The network learns the latent space in which sample-to-sample distances are
measured. Architecture: mirror-symmetric affine stack with tanh on hidden
layers; the bottleneck and the output layer are affine with no activation.
Weights live in float32, all arithmetic runs in float64, and every random
draw comes from SplitMix64, so training is bit-reproducible and independent
of thread count.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, DimensionError, FormatError
from .formats import atomic_write_bytes
from .linalg import as_matrix
from .rng import MASK64, SplitMix64, permutation

MLP1_MAGIC = b"MLP1"
DEFAULT_HIDDEN = 32


@dataclass(eq=False)
class MlpParams:
    """Per-layer weights and biases plus the input min-max scaler.

    weights[l] has shape (fan_in, fan_out) = (layer_sizes[l], layer_sizes[l+1]);
    biases[l] has shape (fan_out,). col_min/col_max are the per-column scaler
    fitted by train(); init_params sets the identity scaler (-1, +1).
    """

    layer_sizes: tuple[int, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    col_min: np.ndarray
    col_max: np.ndarray

    def __eq__(self, other) -> bool:
        if not isinstance(other, MlpParams):
            return NotImplemented
        return (
            self.layer_sizes == other.layer_sizes
            and all(np.array_equal(a, b) for a, b in zip(self.weights, other.weights))
            and all(np.array_equal(a, b) for a, b in zip(self.biases, other.biases))
            and np.array_equal(self.col_min, other.col_min)
            and np.array_equal(self.col_max, other.col_max)
        )

    @property
    def input_dim(self) -> int:
        return self.layer_sizes[0]

    @property
    def latent_dim(self) -> int:
        return self.layer_sizes[len(self.layer_sizes) // 2]


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float
    epochs: int
    batch_size: int
    seed: int
    latent_dim: int


@dataclass(frozen=True)
class LatentSpace:
    """Encoded samples plus a fingerprint of the encoder that produced them."""

    embeddings: np.ndarray
    encoder_fingerprint: str


def validate_layer_sizes(layer_sizes) -> tuple[int, ...]:
    sizes = tuple(int(s) for s in layer_sizes)
    if len(sizes) < 3 or len(sizes) % 2 == 0:
        raise ConfigError(
            f"layer_sizes must have an odd length >= 3 (unique bottleneck), got {sizes}"
        )
    if sizes != sizes[::-1]:
        raise ConfigError(f"layer_sizes must be mirror-symmetric, got {sizes}")
    if any(s < 1 for s in sizes):
        raise ConfigError(f"layer sizes must be positive, got {sizes}")
    return sizes


def init_params(layer_sizes, seed: int) -> MlpParams:
    """Glorot-uniform weights from the SplitMix64 stream, zero biases.

    Each weight matrix is filled row-major; the bound for a layer is
    sqrt(6 / (fan_in + fan_out)). Biases consume no draws.
    """
    sizes = validate_layer_sizes(layer_sizes)
    rng = SplitMix64(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = math.sqrt(6.0 / (fan_in + fan_out))
        w = np.empty((fan_in, fan_out), dtype=np.float32)
        flat = w.reshape(-1)
        for i in range(flat.shape[0]):
            flat[i] = np.float32((2.0 * rng.unit() - 1.0) * bound)
        weights.append(w)
        biases.append(np.zeros(fan_out, dtype=np.float32))
    d = sizes[0]
    return MlpParams(
        layer_sizes=sizes,
        weights=weights,
        biases=biases,
        col_min=np.full(d, -1.0, dtype=np.float32),
        col_max=np.full(d, 1.0, dtype=np.float32),
    )


def apply_scaler(params: MlpParams, data) -> np.ndarray:
    """Min-max scale to [-1, 1] per column; constant columns map to 0."""
    data = as_matrix(data)
    if data.shape[1] != params.input_dim:
        raise DimensionError(
            f"data has {data.shape[1]} columns, encoder expects {params.input_dim}"
        )
    lo = params.col_min.astype(np.float64)
    hi = params.col_max.astype(np.float64)
    span = hi - lo
    x = data.astype(np.float64)
    scaled = np.where(span > 0, (2.0 * x - (lo + hi)) / np.where(span > 0, span, 1.0), 0.0)
    return scaled.astype(np.float32)


def _activations(params: MlpParams, batch64: np.ndarray) -> list[np.ndarray]:
    # acts[0] is the input; acts[l+1] is the output of layer l. tanh applies
    # to hidden layers only, never at the bottleneck or the final layer.
    sizes = params.layer_sizes
    mid = len(sizes) // 2
    last = len(sizes) - 1
    acts = [batch64]
    h = batch64
    for l, (w, b) in enumerate(zip(params.weights, params.biases)):
        y = h @ w.astype(np.float64) + b.astype(np.float64)
        if l + 1 != mid and l + 1 != last:
            y = np.tanh(y)
        acts.append(y)
        h = y
    return acts


def forward(params: MlpParams, batch) -> tuple[np.ndarray, np.ndarray]:
    """Run the network; returns (latent, reconstruction) as float32 matrices."""
    batch = as_matrix(batch)
    if batch.shape[1] != params.input_dim:
        raise DimensionError(
            f"batch has {batch.shape[1]} columns, network expects {params.input_dim}"
        )
    acts = _activations(params, batch.astype(np.float64))
    mid = len(params.layer_sizes) // 2
    return acts[mid].astype(np.float32), acts[-1].astype(np.float32)


def mse_loss(reconstruction, target) -> float:
    """Mean over all entries of the squared error, float64 accumulation."""
    reconstruction = as_matrix(reconstruction)
    target = as_matrix(target)
    if reconstruction.shape != target.shape:
        raise DimensionError(
            f"shape mismatch: {reconstruction.shape} vs {target.shape}"
        )
    diff = reconstruction.astype(np.float64) - target.astype(np.float64)
    return float(np.mean(diff * diff))


def backward(params: MlpParams, batch) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Exact reverse-mode gradients of mse_loss(reconstruction, batch).

    Returns (weight_grads, bias_grads) mirroring the shapes in params,
    as float64 arrays.
    """
    batch = as_matrix(batch)
    if batch.shape[1] != params.input_dim:
        raise DimensionError(
            f"batch has {batch.shape[1]} columns, network expects {params.input_dim}"
        )
    x = batch.astype(np.float64)
    acts = _activations(params, x)
    sizes = params.layer_sizes
    mid = len(sizes) // 2
    last = len(sizes) - 1
    n_entries = x.shape[0] * x.shape[1]

    grads_w = [np.zeros_like(w, dtype=np.float64) for w in params.weights]
    grads_b = [np.zeros_like(b, dtype=np.float64) for b in params.biases]
    d_act = 2.0 * (acts[-1] - x) / n_entries
    for l in range(len(params.weights) - 1, -1, -1):
        out = acts[l + 1]
        if l + 1 != mid and l + 1 != last:
            d_pre = d_act * (1.0 - out * out)
        else:
            d_pre = d_act
        grads_w[l] = acts[l].T @ d_pre
        grads_b[l] = d_pre.sum(axis=0)
        d_act = d_pre @ params.weights[l].astype(np.float64).T
    return grads_w, grads_b


def train(data, config: TrainConfig) -> tuple[MlpParams, list[float]]:
    """Mini-batch SGD on the reconstruction objective.

    The scaler is fitted on the raw data; batches follow a Fisher-Yates
    shuffle seeded with config.seed + epoch; the ragged final batch is kept.
    loss_history holds the full-dataset MSE (in scaled space) after each
    epoch. Deterministic for a fixed config.

    Args:
        data: (n, d) sample matrix, n >= batch_size.
        config: hyperparameters; latent_dim must be in [1, d).

    Returns:
        (params, loss_history)
    """
    data = as_matrix(data)
    n, d = data.shape
    if config.learning_rate <= 0:
        raise ConfigError(f"learning_rate must be > 0, got {config.learning_rate}")
    if config.batch_size < 1:
        raise ConfigError(f"batch_size must be >= 1, got {config.batch_size}")
    if config.epochs < 0:
        raise ConfigError(f"epochs must be >= 0, got {config.epochs}")
    if not 1 <= config.latent_dim < d:
        raise ConfigError(
            f"latent_dim must be in [1, {d}), got {config.latent_dim}"
        )
    if n < config.batch_size:
        raise ConfigError(f"need rows >= batch_size, got {n} < {config.batch_size}")

    sizes = (d, DEFAULT_HIDDEN, config.latent_dim, DEFAULT_HIDDEN, d)
    params = init_params(sizes, config.seed)
    if config.epochs == 0:
        return params, []

    params = replace(
        params, col_min=data.min(axis=0).copy(), col_max=data.max(axis=0).copy()
    )
    scaled = apply_scaler(params, data)
    lr = float(config.learning_rate)
    history: list[float] = []
    for epoch in range(config.epochs):
        order = permutation(n, (config.seed + epoch) & MASK64)
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            grads_w, grads_b = backward(params, scaled[idx])
            for l in range(len(params.weights)):
                w64 = params.weights[l].astype(np.float64) - lr * grads_w[l]
                b64 = params.biases[l].astype(np.float64) - lr * grads_b[l]
                params.weights[l] = w64.astype(np.float32)
                params.biases[l] = b64.astype(np.float32)
        _, recon = forward(params, scaled)
        history.append(mse_loss(recon, scaled))

    if not all(np.all(np.isfinite(w)) for w in params.weights) or not all(
        np.all(np.isfinite(b)) for b in params.biases
    ):
        raise ConfigError(
            "training diverged to non-finite parameters; lower learning_rate"
        )
    return params, history


def encode(params: MlpParams, data) -> LatentSpace:
    """Scale the data with the stored scaler and return bottleneck activations."""
    scaled = apply_scaler(params, data)
    latent, _ = forward(params, scaled)
    return LatentSpace(embeddings=latent, encoder_fingerprint=fingerprint(params))


def fingerprint(params: MlpParams) -> str:
    h = hashlib.sha256()
    h.update(struct.pack("<I", len(params.layer_sizes)))
    h.update(struct.pack(f"<{len(params.layer_sizes)}I", *params.layer_sizes))
    for w, b in zip(params.weights, params.biases):
        h.update(w.astype("<f4").tobytes(order="C"))
        h.update(b.astype("<f4").tobytes())
    h.update(params.col_min.astype("<f4").tobytes())
    h.update(params.col_max.astype("<f4").tobytes())
    return h.hexdigest()


def mlp1_bytes(params: MlpParams) -> bytes:
    out = [MLP1_MAGIC, struct.pack("<I", len(params.layer_sizes))]
    out.append(struct.pack(f"<{len(params.layer_sizes)}I", *params.layer_sizes))
    for w, b in zip(params.weights, params.biases):
        out.append(w.astype("<f4").tobytes(order="C"))
        out.append(b.astype("<f4").tobytes())
    out.append(params.col_min.astype("<f4").tobytes())
    out.append(params.col_max.astype("<f4").tobytes())
    return b"".join(out)


def save_model(path, params: MlpParams) -> None:
    atomic_write_bytes(path, mlp1_bytes(params))


def load_model(path) -> MlpParams:
    raw = Path(path).read_bytes()
    if len(raw) < 8 or raw[:4] != MLP1_MAGIC:
        raise FormatError(f"{path}: not an MLP1 file (bad magic or truncated header)")
    (count,) = struct.unpack("<I", raw[4:8])
    offset = 8
    if len(raw) < offset + 4 * count:
        raise FormatError(f"{path}: truncated layer_sizes block")
    sizes = struct.unpack(f"<{count}I", raw[offset : offset + 4 * count])
    offset += 4 * count
    try:
        sizes = validate_layer_sizes(sizes)
    except ConfigError as exc:
        raise FormatError(f"{path}: {exc}") from exc

    def take(n_floats: int) -> np.ndarray:
        nonlocal offset
        end = offset + 4 * n_floats
        if end > len(raw):
            raise FormatError(f"{path}: truncated parameter block")
        arr = np.frombuffer(raw, dtype="<f4", count=n_floats, offset=offset).copy()
        offset = end
        return arr

    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        weights.append(take(fan_in * fan_out).reshape(fan_in, fan_out))
        biases.append(take(fan_out))
    col_min = take(sizes[0])
    col_max = take(sizes[0])
    if offset != len(raw):
        raise FormatError(f"{path}: {len(raw) - offset} trailing bytes")
    return MlpParams(sizes, weights, biases, col_min, col_max)
