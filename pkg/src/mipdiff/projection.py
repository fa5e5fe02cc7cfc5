"""Intensity projection and susceptibility phase-mask weighting."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diffusion import AdaptiveParams, run_filter
from .fields import as_field, as_volume

__all__ = [
    "PhaseMaskParams",
    "project",
    "project_min_argmin",
    "phase_mask",
    "apply_mask",
    "swi_pipeline",
]


@dataclass(frozen=True)
class PhaseMaskParams:
    """Exponent of the negative-phase suppression mask."""

    exponent: int = 4

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError("mask exponent must be >= 1")


def project(volume, kind: str = "min") -> np.ndarray:
    """Pixelwise extreme across slices: ``min`` or ``max``."""
    vol = as_volume(volume)
    if kind == "min":
        return vol.min(axis=0)
    if kind == "max":
        return vol.max(axis=0)
    raise ValueError(f"unknown projection kind {kind!r}")


def project_min_argmin(volume):
    """Minimum projection plus the slice index attaining it (lowest on ties)."""
    vol = as_volume(volume)
    idx = vol.argmin(axis=0)
    return vol.min(axis=0), idx


def phase_mask(phase, params: PhaseMaskParams = PhaseMaskParams()) -> np.ndarray:
    """Negative-phase suppression weights ((pi + phi)/pi)^m for phi < 0, 1 else.

    Phase values must lie in [-pi, pi]. Output lies in [0, 1] and is
    monotone non-decreasing in phi.
    """
    phi = np.asarray(phase, dtype=np.float64)
    if not np.isfinite(phi).all():
        raise ValueError("phase contains NaN or Inf values")
    if phi.min() < -math.pi or phi.max() > math.pi:
        raise ValueError("phase values must lie in [-pi, pi]")
    w = np.where(phi < 0.0, ((math.pi + phi) / math.pi) ** params.exponent, 1.0)
    return w


def apply_mask(magnitude, weights) -> np.ndarray:
    """Pixelwise product of a magnitude image and mask weights."""
    m = as_field(magnitude)
    w = as_field(weights)
    if m.shape != w.shape:
        raise ValueError(f"shape mismatch {m.shape} vs {w.shape}")
    return m * w


def swi_pipeline(
    magnitude,
    phase,
    params: AdaptiveParams,
    mask_params: PhaseMaskParams = PhaseMaskParams(),
    mask_before_projection: bool = False,
) -> np.ndarray:
    """Filtered, phase-weighted minimum intensity projection.

    Each magnitude slice is filtered (``mip_min`` mode), the stack is
    minimum-projected, and each projected pixel is multiplied by the phase
    mask weight of the slice that produced the minimum (lowest slice index
    on ties). With ``mask_before_projection`` the per-slice product is
    projected instead.
    """
    mag = as_volume(magnitude)
    phi = as_volume(phase)
    if mag.shape != phi.shape:
        raise ValueError(f"magnitude {mag.shape} and phase {phi.shape} differ")
    filtered = np.stack([run_filter(sl, params)[0] for sl in mag])
    weights = phase_mask(phi, mask_params)
    if mask_before_projection:
        return project(filtered * weights, "min")
    mip, idx = project_min_argmin(filtered)
    w_at = np.take_along_axis(weights, idx[None, :, :], axis=0)[0]
    return mip * w_at
