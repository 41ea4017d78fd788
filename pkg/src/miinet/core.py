"""Time-series container, standardization and covariance estimation.

All containers are immutable after construction; every operation here is a
pure function, safe to call from any number of concurrent workers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DuplicateChannel, NonFinite, SingularCovariance, ZeroVariance


class Axis(str, enum.Enum):
    LATERAL = "lateral"
    VERTICAL = "vertical"

    @classmethod
    def from_token(cls, token: str) -> "Axis":
        token = token.lower()
        if token in ("lat", "lateral"):
            return cls.LATERAL
        if token in ("vert", "vertical"):
            return cls.VERTICAL
        raise ValueError(f"unknown axis token {token!r}")

    @property
    def token(self) -> str:
        return "lat" if self is Axis.LATERAL else "vert"


@dataclass(frozen=True, order=True)
class ChannelId:
    """One recorded component: a sensor index plus its acceleration axis."""

    sensor_index: int
    axis: Axis

    def __post_init__(self):
        if self.sensor_index < 1:
            raise ValueError("sensor_index must be >= 1")

    @property
    def name(self) -> str:
        return f"s{self.sensor_index}_{self.axis.token}"

    @classmethod
    def from_name(cls, name: str) -> "ChannelId":
        if not name.startswith("s") or "_" not in name:
            raise ValueError(f"channel name {name!r} not of form s<index>_<lat|vert>")
        idx_part, axis_part = name[1:].split("_", 1)
        if not idx_part.isdigit():
            raise ValueError(f"channel name {name!r} has non-numeric sensor index")
        return cls(int(idx_part), Axis.from_token(axis_part))


@dataclass(frozen=True)
class TimeSeriesMatrix:
    """T x N matrix of channel samples with channel metadata.

    Rows are time samples, columns are channels. Data must be finite;
    construction validates and freezes the array.
    """

    data: np.ndarray
    channels: tuple[ChannelId, ...]
    sample_rate_hz: float = 128.0

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise ValueError("data must be 2-D (T x N)")
        t, n = data.shape
        if t < 2:
            raise ValueError("need at least 2 time samples")
        if n < 1:
            raise ValueError("need at least 1 channel")
        channels = tuple(self.channels)
        if len(channels) != n:
            raise ValueError(f"{len(channels)} channel ids for {n} columns")
        if len(set(channels)) != n:
            raise DuplicateChannel("channel ids must be unique")
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")
        bad = ~np.isfinite(data)
        if bad.any():
            t_bad, c_bad = np.argwhere(bad)[0]
            raise NonFinite(channels[c_bad].name, int(t_bad))
        data = data.copy()
        data.flags.writeable = False
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "channels", channels)

    @property
    def n_samples(self) -> int:
        return self.data.shape[0]

    @property
    def n_channels(self) -> int:
        return self.data.shape[1]

    def index_of(self, channel: ChannelId) -> int:
        try:
            return self.channels.index(channel)
        except ValueError:
            raise KeyError(f"channel {channel.name} not in matrix") from None

    def axis_channel_indices(self, axis: Axis) -> dict[int, int]:
        """sensor_index -> column index, restricted to one axis."""
        return {
            ch.sensor_index: k
            for k, ch in enumerate(self.channels)
            if ch.axis is axis
        }

    def select(self, indices: Sequence[int]) -> "TimeSeriesMatrix":
        """New matrix restricted to the given columns, order preserved."""
        idx = list(indices)
        return TimeSeriesMatrix(
            self.data[:, idx],
            tuple(self.channels[k] for k in idx),
            self.sample_rate_hz,
        )


@dataclass(frozen=True)
class SampleStats:
    """Empirical mean and (regularized) covariance of a channel subset."""

    mean: np.ndarray
    covariance: np.ndarray
    ridge: float = 0.0

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        cov = np.asarray(self.covariance, dtype=np.float64)
        if mean.ndim != 1 or cov.shape != (mean.size, mean.size):
            raise ValueError("mean must be length-N, covariance N x N")
        if not np.allclose(cov, cov.T, atol=1e-12, rtol=0.0):
            raise ValueError("covariance must be symmetric to 1e-12")
        if np.any(np.diag(cov) < 0):
            raise ValueError("covariance diagonal must be nonnegative")
        mean = mean.copy()
        cov = cov.copy()
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    @property
    def dim(self) -> int:
        return self.mean.size

    def restrict(self, indices: Sequence[int]) -> "SampleStats":
        idx = list(indices)
        return SampleStats(self.mean[idx], self.covariance[np.ix_(idx, idx)], self.ridge)


def standardize(raw: TimeSeriesMatrix) -> TimeSeriesMatrix:
    """Map every column to zero mean and unit variance (T-1 denominator)."""
    data = raw.data
    mu = data.mean(axis=0)
    sd = data.std(axis=0, ddof=1)
    zero = np.flatnonzero(sd == 0.0)
    if zero.size:
        raise ZeroVariance(raw.channels[zero[0]].name)
    out = (data - mu) / sd
    return TimeSeriesMatrix(out, raw.channels, raw.sample_rate_hz)


def regularize_covariance(cov: np.ndarray) -> tuple[np.ndarray, float]:
    """Return a positive-definite covariance and the ridge that was added.

    Cholesky is tried with no ridge first; the exact input passes through
    untouched when it is already positive definite. Otherwise an escalating
    ridge eps*I with eps from 1e-10*tr/N up to 1e-4*tr/N (steps of 10x) is
    added before giving up with SingularCovariance.
    """
    cov = np.asarray(cov, dtype=np.float64)
    n = cov.shape[0]
    scale = float(np.trace(cov)) / n
    eps = 0.0
    while True:
        candidate = cov if eps == 0.0 else cov + eps * np.eye(n)
        try:
            np.linalg.cholesky(candidate)
            return candidate, eps
        except np.linalg.LinAlgError:
            if scale <= 0.0:
                raise SingularCovariance("covariance trace is zero") from None
            if eps == 0.0:
                eps = 1e-10 * scale
            elif eps < 1e-4 * scale:
                eps = min(eps * 10.0, 1e-4 * scale)
            else:
                raise SingularCovariance(
                    f"not positive definite even with ridge {eps:.3e}; "
                    "duplicated channels?"
                ) from None


def estimate_stats(x: TimeSeriesMatrix, subset: Sequence[int]) -> SampleStats:
    """Empirical mean and unbiased covariance of a channel subset, regularized."""
    idx = list(subset)
    if not idx:
        raise ValueError("subset must be non-empty")
    if any(i < 0 or i >= x.n_channels for i in idx):
        raise ValueError(f"subset {idx} outside 0..{x.n_channels - 1}")
    if len(set(idx)) != len(idx):
        raise ValueError("subset indices must be unique")
    if x.n_samples <= len(idx):
        raise ValueError("need more samples than subset dimensions")
    sub = x.data[:, idx]
    mean = sub.mean(axis=0)
    centered = sub - mean
    cov = centered.T @ centered / (x.n_samples - 1)
    cov = (cov + cov.T) / 2.0
    cov, ridge = regularize_covariance(cov)
    return SampleStats(mean, cov, ridge)
