"""Test signals and CSV I/O."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "Signal",
    "doppler",
    "doppler_function",
    "fbm",
    "fgn",
    "add_noise",
    "noise_sigma_for_snr",
    "read_csv",
    "write_csv",
    "write_table_csv",
    "read_table_csv",
]


@dataclass(frozen=True)
class Signal:
    samples: np.ndarray
    name: str = ""
    rate: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.ndim != 1:
            raise ValueError("signal samples must be one-dimensional")
        if not np.all(np.isfinite(s)):
            raise ValueError("signal contains non-finite values")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.samples, dtype=dtype)

    def __len__(self) -> int:
        return len(self.samples)


def doppler_function(t):
    t = np.asarray(t, dtype=float)
    return np.sqrt(t * (1 - t)) * np.sin(2 * np.pi * 1.05 / (t + 0.05))


def doppler(N: int) -> Signal:
    """Doppler benchmark on the midpoint grid ``t = (i + 0.5) / N``."""
    if N < 2:
        raise ValueError("Doppler signal needs N >= 2")
    t = (np.arange(N) + 0.5) / N
    return Signal(doppler_function(t), "doppler")


def fgn(N: int, H: float, seed=None) -> np.ndarray:
    """Fractional Gaussian noise (unit variance) by circulant embedding."""
    if not 0 < H < 1:
        raise ValueError(f"Hurst exponent must lie in (0, 1), got {H}")
    k = np.arange(N + 1, dtype=float)
    acov = 0.5 * (np.abs(k + 1) ** (2 * H) - 2 * k ** (2 * H) + np.abs(k - 1) ** (2 * H))
    row = np.concatenate([acov, acov[-2:0:-1]])
    lam = np.fft.fft(row).real
    if lam.min() < -1e-10 * lam.max():
        raise RuntimeError("circulant embedding is not nonnegative definite")
    lam = np.clip(lam, 0.0, None)
    M = len(row)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(M) + 1j * rng.standard_normal(M)
    w = np.fft.fft(np.sqrt(lam / M) * z)
    return w.real[:N]


def fbm(N: int, H: float, seed=None) -> Signal:
    """Fractional Brownian motion: cumulative sum of exact fGn increments."""
    return Signal(np.cumsum(fgn(N, H, seed)), "fbm", meta={"hurst": H, "seed": seed})


def noise_sigma_for_snr(s, snr: float) -> float:
    """Noise level giving ``||s||^2 / (N sigma^2) = snr``."""
    s = np.asarray(s, dtype=float)
    if snr <= 0:
        raise ValueError("SNR must be positive")
    return float(np.sqrt(np.mean(s ** 2) / snr))


def add_noise(s, sigma: float, seed=None) -> Signal:
    if sigma < 0:
        raise ValueError("noise level must be nonnegative")
    x = np.asarray(s, dtype=float)
    rng = np.random.default_rng(seed)
    name = s.name if isinstance(s, Signal) else ""
    return Signal(x + sigma * rng.standard_normal(len(x)), name, meta={"sigma": sigma, "seed": seed})


def read_csv(path) -> Signal:
    """One value per line; an optional non-numeric header and '#' comments are skipped."""
    path = Path(path)
    values = []
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read signal file {path}: {exc}") from exc
    first = True
    for lineno, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        token = text.split(",")[0].strip()
        try:
            values.append(float(token))
        except ValueError:
            if not first:
                raise ValueError(f"{path}:{lineno}: non-numeric value {token!r}") from None
        first = False
    if not values:
        raise ValueError(f"{path}: no samples found")
    return Signal(np.array(values), path.stem)


def write_csv(path, s) -> None:
    x = np.asarray(s, dtype=float)
    path = Path(path)
    try:
        with path.open("w") as fh:
            for v in x:
                fh.write(f"{v:.17g}\n")
    except OSError as exc:
        raise OSError(f"cannot write signal file {path}: {exc}") from exc


def write_table_csv(fh, table) -> None:
    """NdwtTable rows labelled d1..dL, aL."""
    w = csv.writer(fh, lineterminator="\n")
    for label, row in zip(table.labels(), table.as_array()):
        w.writerow([label, *(f"{v:.17g}" for v in row)])


def read_table_csv(path):
    from .wavelets import NdwtTable

    rows = {}
    with Path(path).open() as fh:
        for rec in csv.reader(fh):
            if rec and not rec[0].startswith("#"):
                rows[rec[0].strip()] = np.array([float(v) for v in rec[1:]])
    details = sorted((k for k in rows if k.startswith("d")), key=lambda k: int(k[1:]))
    scaling = [k for k in rows if k.startswith("a")]
    if len(scaling) != 1:
        raise ValueError(f"{path}: expected exactly one scaling row")
    return NdwtTable([rows[k] for k in details], rows[scaling[0]])
