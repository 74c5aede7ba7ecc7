"""Waveform-to-feature extraction: mel spectrograms, normalization, F0.

Framing is the same everywhere: frame i covers samples
``[i*hop, i*hop + window)`` and the frame count is
``floor((len - window) / hop) + 1`` with no padding, so feature lengths
are bit-exact and easy to reason about downstream.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .errors import SchemaError
from .score import FrameClock

MEL_DIMS = 80
MEL_FMIN = 0.0
MEL_FMAX = 12000.0
LOG_FLOOR = 1e-10

F0_MIN = 60.0
F0_MAX = 1000.0
VOICING_THRESHOLD = 0.45

DUMP_MAGIC = b"PHFX"
DUMP_VERSION = 1


@dataclass(frozen=True)
class FeatureMatrix:
    """Time-major feature matrix (frames x dims) tied to a frame clock."""

    data: np.ndarray
    clock: FrameClock

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise ValueError(f"feature matrix must be 2-D, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("feature matrix contains non-finite values")
        object.__setattr__(self, "data", data)

    @property
    def frames(self) -> int:
        return self.data.shape[0]

    @property
    def dims(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class NormStats:
    """Per-dimension mean and (floored) standard deviation."""

    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mean", np.asarray(self.mean, dtype=np.float64))
        object.__setattr__(self, "std", np.asarray(self.std, dtype=np.float64))
        if self.mean.shape != self.std.shape:
            raise ValueError("mean/std shape mismatch")
        if np.any(self.std <= 0):
            raise ValueError("std must be strictly positive")


@dataclass(frozen=True)
class PitchTrack:
    """Per-frame F0 in Hz (0 where unvoiced) and voicing decisions."""

    f0: np.ndarray
    voiced: np.ndarray

    def __post_init__(self):
        f0 = np.asarray(self.f0, dtype=np.float64)
        voiced = np.asarray(self.voiced, dtype=bool)
        if f0.shape != voiced.shape:
            raise ValueError("f0/voiced length mismatch")
        if np.any((f0 > 0) != voiced):
            raise ValueError("f0 must be positive exactly on voiced frames")
        object.__setattr__(self, "f0", f0)
        object.__setattr__(self, "voiced", voiced)

    def __len__(self):
        return len(self.f0)


def frame_count(n_samples: int, clock: FrameClock) -> int:
    if n_samples < clock.window:
        raise ValueError(
            f"waveform of {n_samples} samples is shorter than the "
            f"{clock.window}-sample analysis window"
        )
    return (n_samples - clock.window) // clock.hop + 1


def _frame_signal(waveform: np.ndarray, clock: FrameClock) -> np.ndarray:
    n = frame_count(len(waveform), clock)
    idx = np.arange(clock.window)[None, :] + clock.hop * np.arange(n)[:, None]
    return waveform[idx]


def hz_to_mel(hz):
    return 2595.0 * np.log10(1.0 + np.asarray(hz, dtype=np.float64) / 700.0)


def mel_to_hz(mel):
    return 700.0 * (10.0 ** (np.asarray(mel, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(
    n_filters: int, n_fft: int, sample_rate: int,
    fmin: float = MEL_FMIN, fmax: float = MEL_FMAX,
) -> np.ndarray:
    """Triangular mel filters (HTK mel scale), rows = filters, cols = bins."""
    mel_points = np.linspace(hz_to_mel(fmin), hz_to_mel(fmax), n_filters + 2)
    hz_points = mel_to_hz(mel_points)
    bin_freqs = np.arange(n_fft // 2 + 1) * sample_rate / n_fft
    bank = np.zeros((n_filters, len(bin_freqs)))
    for i in range(n_filters):
        left, center, right = hz_points[i], hz_points[i + 1], hz_points[i + 2]
        up = (bin_freqs - left) / (center - left)
        down = (right - bin_freqs) / (right - center)
        bank[i] = np.maximum(0.0, np.minimum(up, down))
    return bank


def mel_spectrogram(waveform: np.ndarray, clock: FrameClock) -> FeatureMatrix:
    """80-dim log-mel features: Hann magnitude STFT through a mel bank.

    Natural log with a 1e-10 floor; pure silence therefore comes out as
    ``ln(1e-10)`` everywhere.
    """
    waveform = np.asarray(waveform, dtype=np.float64)
    frames = _frame_signal(waveform, clock)
    n_fft = 1 << (clock.window - 1).bit_length()
    window = np.hanning(clock.window)
    spectrum = np.abs(np.fft.rfft(frames * window, n=n_fft, axis=1))
    bank = mel_filterbank(MEL_DIMS, n_fft, clock.sample_rate)
    mel = spectrum @ bank.T
    return FeatureMatrix(np.log(np.maximum(mel, LOG_FLOOR)), clock)


def fit_normalization(features: list[FeatureMatrix]) -> NormStats:
    """Global per-dimension mean/std over all frames of all matrices."""
    if not features:
        raise ValueError("cannot fit normalization on an empty feature list")
    dims = features[0].dims
    if any(f.dims != dims for f in features):
        raise ValueError("feature matrices have mismatched dims")
    stacked = np.concatenate([f.data for f in features], axis=0)
    mean = stacked.mean(axis=0)
    std = np.maximum(stacked.std(axis=0), 1e-8)
    return NormStats(mean, std)


def apply_normalization(m: FeatureMatrix, stats: NormStats) -> FeatureMatrix:
    if m.dims != len(stats.mean):
        raise ValueError(f"stats have {len(stats.mean)} dims, matrix has {m.dims}")
    return FeatureMatrix((m.data - stats.mean) / stats.std, m.clock)


def estimate_f0(
    waveform: np.ndarray,
    clock: FrameClock,
    voicing_threshold: float = VOICING_THRESHOLD,
) -> PitchTrack:
    """Autocorrelation pitch tracker over the 60-1000 Hz range.

    A frame is voiced when its peak normalized autocorrelation in the lag
    search range reaches the threshold; the peak lag is refined by
    parabolic interpolation before conversion to Hz.
    """
    waveform = np.asarray(waveform, dtype=np.float64)
    frames = _frame_signal(waveform, clock)
    frames = frames - frames.mean(axis=1, keepdims=True)

    lag_min = int(round(clock.sample_rate / F0_MAX))
    lag_max = min(int(round(clock.sample_rate / F0_MIN)), clock.window - 2)

    n_fft = 1 << (2 * clock.window - 1).bit_length()
    spectrum = np.fft.rfft(frames, n=n_fft, axis=1)
    acf = np.fft.irfft(spectrum.real**2 + spectrum.imag**2, axis=1)[:, : lag_max + 2]

    f0 = np.zeros(len(frames))
    voiced = np.zeros(len(frames), dtype=bool)
    lags = np.arange(lag_min, lag_max + 1)
    for i, r in enumerate(acf):
        if r[0] < 1e-12:
            continue
        r = r / r[0]
        # true local maxima only: an edge of the search range is not a peak
        seg = r[lag_min : lag_max + 1]
        is_peak = (seg > r[lag_min - 1 : lag_max]) & (seg > r[lag_min + 1 : lag_max + 2])
        peak_lags = lags[is_peak]
        if len(peak_lags) == 0:
            continue
        lag = int(peak_lags[np.argmax(r[peak_lags])])
        if r[lag] < voicing_threshold:
            continue
        # parabolic refinement; a local max guarantees concavity
        denom = r[lag - 1] - 2 * r[lag] + r[lag + 1]
        refined = lag + 0.5 * (r[lag - 1] - r[lag + 1]) / denom if denom < -1e-12 else lag
        voiced[i] = True
        f0[i] = clock.sample_rate / refined
    return PitchTrack(f0, voiced)


def read_wav(path: str | Path, clock: FrameClock) -> np.ndarray:
    """Load a mono 16-bit or float PCM WAV at the clock's sample rate."""
    rate, data = wavfile.read(str(path))
    if rate != clock.sample_rate:
        raise SchemaError(
            f"{path}: sample rate {rate} != required {clock.sample_rate} "
            "(resampling is not supported)"
        )
    if data.ndim != 1:
        raise SchemaError(f"{path}: only mono WAV is supported")
    if data.dtype == np.int16:
        return data.astype(np.float64) / 32768.0
    if data.dtype in (np.float32, np.float64):
        return data.astype(np.float64)
    raise SchemaError(f"{path}: unsupported sample format {data.dtype}")


def write_wav(path: str | Path, waveform: np.ndarray, clock: FrameClock):
    clipped = np.clip(np.asarray(waveform, dtype=np.float64), -1.0, 1.0)
    wavfile.write(str(path), clock.sample_rate, (clipped * 32767).astype(np.int16))


def save_features(m: FeatureMatrix, path: str | Path):
    """Write the 16-byte-header PHFX dump (row-major float32, little-endian)."""
    header = DUMP_MAGIC + struct.pack("<III", DUMP_VERSION, m.frames, m.dims)
    data = m.data.astype("<f4").tobytes(order="C")
    Path(path).write_bytes(header + data)


def load_features(path: str | Path, clock: FrameClock) -> FeatureMatrix:
    raw = Path(path).read_bytes()
    if len(raw) < 16 or raw[:4] != DUMP_MAGIC:
        raise SchemaError(f"{path}: not a PHFX feature dump")
    version, frames, dims = struct.unpack("<III", raw[4:16])
    if version != DUMP_VERSION:
        raise SchemaError(f"{path}: unsupported PHFX version {version}")
    expected = 16 + 4 * frames * dims
    if len(raw) != expected:
        raise SchemaError(f"{path}: expected {expected} bytes, found {len(raw)}")
    data = np.frombuffer(raw, dtype="<f4", offset=16).reshape(frames, dims)
    return FeatureMatrix(data.astype(np.float64), clock)
