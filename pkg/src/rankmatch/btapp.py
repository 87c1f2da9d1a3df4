"""Expected share ratios for bandwidth-ranked tit-for-tat peers.

Peers rank each other by upload bandwidth; the stable b0-matching of
that ranking says who exchanges with whom.  Combining the choice
distribution on a random acceptance graph with a measured upload-
bandwidth distribution yields the download each rank can expect, hence
its expected download/upload (share) ratio.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import IO

import numpy as np

from .analytic import independent_b0matching

DEFAULT_RESOLUTION = 2000


@dataclass(frozen=True)
class BandwidthProfile:
    """Cumulative upload-bandwidth distribution, low bandwidth first.

    `fractions[k]` is the fraction of peers with upload <= `bandwidths[k]`;
    repeated bandwidths with rising fractions encode atoms (density
    peaks).  Rank 1 maps to the highest bandwidth.  `n` is the default
    number of rank buckets used when discretizing.
    """

    bandwidths: np.ndarray
    fractions: np.ndarray
    n: int = DEFAULT_RESOLUTION

    def __post_init__(self):
        bw = np.asarray(self.bandwidths, dtype=np.float64)
        fr = np.asarray(self.fractions, dtype=np.float64)
        object.__setattr__(self, "bandwidths", bw)
        object.__setattr__(self, "fractions", fr)
        if bw.size == 0:
            raise ValueError("empty bandwidth profile")
        if bw.size != fr.size:
            raise ValueError("bandwidth/fraction column length mismatch")
        if np.any(bw <= 0):
            raise ValueError("bandwidths must be strictly positive")
        if np.any(np.diff(bw) < 0):
            raise ValueError("bandwidth column must be non-decreasing")
        if np.any(np.diff(fr) < 0):
            raise ValueError("fraction column must be non-decreasing")
        if np.any(fr <= 0) or np.any(fr > 1):
            raise ValueError("cumulative fractions must lie in (0, 1]")
        if abs(fr[-1] - 1.0) > 1e-9:
            raise ValueError("cumulative fractions must reach 1")
        if self.n < 1:
            raise ValueError(f"resolution must be >= 1, got {self.n}")

    def quantile_bandwidth(self, q) -> np.ndarray:
        """Inverse CDF with linear interpolation, anchored at (0, 0)."""
        fr = np.concatenate([[0.0], self.fractions])
        bw = np.concatenate([[0.0], self.bandwidths])
        return np.interp(q, fr, bw)


def load_bandwidth_cdf(fh: IO[str], n: int = DEFAULT_RESOLUTION
                       ) -> BandwidthProfile:
    """Parse `bandwidth_kbps cumulative_fraction` lines (sorted, '#' comments)."""
    bws, frs = [], []
    for line in fh:
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"expected two columns, got {line!r}")
        bws.append(float(parts[0]))
        frs.append(float(parts[1]))
    if not bws:
        raise ValueError("empty bandwidth CDF file")
    return BandwidthProfile(np.asarray(bws), np.asarray(frs), n=n)


def load_sample_cdf(n: int = DEFAULT_RESOLUTION) -> BandwidthProfile:
    """The synthetic wide upload distribution shipped with the package."""
    ref = resources.files("rankmatch.data").joinpath("uplink_cdf_sample.txt")
    with ref.open("r") as fh:
        return load_bandwidth_cdf(fh, n=n)


def rank_to_bandwidth(profile: BandwidthProfile, i: int, n: int) -> float:
    """Upload of the rank-i peer among n: inverse CDF at 1 - (i-0.5)/n."""
    if not 1 <= i <= n:
        raise ValueError(f"rank {i} outside 1..{n}")
    return float(profile.quantile_bandwidth(1.0 - (i - 0.5) / n))


def ranks_to_bandwidths(profile: BandwidthProfile, n: int) -> np.ndarray:
    ranks = np.arange(1, n + 1)
    return profile.quantile_bandwidth(1.0 - (ranks - 0.5) / n)


@dataclass(frozen=True)
class ShareRatioCurve:
    """Per-rank upload, expected download, their ratio, and matching mass."""

    rank: np.ndarray
    quantile: np.ndarray      # CDF position the upload was read from
    upload: np.ndarray        # kb/s
    expected_download: np.ndarray
    ratio: np.ndarray         # expected_download / upload
    mass: np.ndarray          # expected number of filled slots, <= b0

    def rows(self):
        return zip(self.rank, self.quantile, self.upload,
                   self.expected_download, self.ratio, self.mass)


def share_ratio_curve(profile: BandwidthProfile, b0: int, d: float,
                      n: int | None = None,
                      upload_slots: int | None = None) -> ShareRatioCurve:
    """Expected download/upload ratio per rank for b0 exchange slots.

    Ranks accept each other with probability d/(n-1); each partner's
    upload is split evenly over `upload_slots` slots (default b0, the
    reciprocal-exchange slots only; pass b0+1 to count a generous slot's
    share instead).  Unfilled slots download nothing.
    """
    n = profile.n if n is None else n
    if b0 < 1:
        raise ValueError(f"slot count must be >= 1, got {b0}")
    if not 0 < d <= n - 1:
        raise ValueError(f"expected degree {d} outside (0, {n - 1}]")
    slots = b0 if upload_slots is None else upload_slots
    if slots < 1:
        raise ValueError(f"upload slot count must be >= 1, got {slots}")
    dist = independent_b0matching(n, d / (n - 1), b0)
    total = dist.total()  # (n, n) matching mass per pair
    u = ranks_to_bandwidths(profile, n)
    e = total @ u / slots
    mass = total.sum(axis=1)
    ranks = np.arange(1, n + 1)
    return ShareRatioCurve(
        rank=ranks,
        quantile=1.0 - (ranks - 0.5) / n,
        upload=u,
        expected_download=e,
        ratio=e / u,
        mass=mass,
    )
