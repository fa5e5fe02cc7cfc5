"""Multi-channel combination for phased-array flow imaging.

Channels are combined as the root of the noise-weighted sum of squares.
When per-channel noise calibration is unavailable, the filter-synthesized
scaling reweights each filtered channel by the ratio of its final filter
update map to that of the combined image, standing in for the missing
sigma_k calibration.
"""
from __future__ import annotations

import numpy as np

from .diffusion import AdaptiveParams, FilterTrace, run_filter
from .fields import as_field

__all__ = [
    "combine_flow",
    "pa_combine",
    "filter_synthesized_scale",
    "pc_pipeline",
]


def combine_flow(x_components, y_components, z_components, mode: str = "sum"):
    """Merge per-channel directional flow projections into one image each.

    ``sum`` adds the three components; ``magnitude`` takes the root sum of
    squares. Returns a list of per-channel fields.
    """
    if mode not in ("sum", "magnitude"):
        raise ValueError(f"unknown flow combination mode {mode!r}")
    if not len(x_components) == len(y_components) == len(z_components):
        raise ValueError("flow component lists must have equal channel counts")
    if not x_components:
        raise ValueError("need at least one channel")
    out = []
    for fx, fy, fz in zip(x_components, y_components, z_components):
        ax, ay, az = as_field(fx), as_field(fy), as_field(fz)
        if ax.shape != ay.shape or ax.shape != az.shape:
            raise ValueError("flow components of one channel differ in shape")
        if mode == "sum":
            out.append(ax + ay + az)
        else:
            out.append(np.sqrt(ax * ax + ay * ay + az * az))
    return out


def pa_combine(channels, sigma=None) -> np.ndarray:
    """Noise-weighted root-sum-of-squares combination sqrt(sum (M_k/s_k)^2).

    With ``sigma`` absent every channel weight is 1 (uncalibrated
    combination). Sigma entries must be positive and match the channel
    count.
    """
    fields = [as_field(ch) for ch in channels]
    if not fields:
        raise ValueError("need at least one channel")
    shape = fields[0].shape
    if any(f.shape != shape for f in fields):
        raise ValueError("channels must share one shape")
    if sigma is None:
        weights = [1.0] * len(fields)
    else:
        weights = [float(s) for s in sigma]
        if len(weights) != len(fields):
            raise ValueError(
                f"got {len(weights)} sigma values for {len(fields)} channels"
            )
        if any(not s > 0 for s in weights):
            raise ValueError("sigma values must be positive")
    acc = np.zeros(shape, dtype=np.float64)
    for f, s in zip(fields, weights):
        scaled = f / s
        acc += scaled * scaled
    return np.sqrt(acc)


def filter_synthesized_scale(filtered_channels, combined_trace: FilterTrace, eps: float = 1e-12):
    """Rescale filtered channels by their filter-update ratio maps.

    Each entry of ``filtered_channels`` is a (field, trace) pair from the
    per-channel filter runs; the scale map is trace.basis_sum divided by the
    combined image's basis_sum. Pixels where the denominator magnitude falls
    below ``eps`` pass the channel through unscaled.
    """
    if not filtered_channels:
        raise ValueError("need at least one channel")
    denom = np.asarray(combined_trace.basis_sum, dtype=np.float64)
    small = np.abs(denom) < eps
    safe = np.where(small, 1.0, denom)
    out = []
    for field, trace in filtered_channels:
        f = as_field(field)
        num = np.asarray(trace.basis_sum, dtype=np.float64)
        if num.shape != denom.shape or f.shape != denom.shape:
            raise ValueError("channel maps must match the combined map shape")
        ratio = np.where(small, 1.0, num / safe)
        out.append(f * ratio)
    return out


def pc_pipeline(
    x_components,
    y_components,
    z_components,
    params: AdaptiveParams,
    flow_mode: str = "sum",
    sigma=None,
):
    """Flow combination, per-channel filtering, synthesized scaling, final merge.

    Steps: per-channel flow merge; directional filtering of each merged
    channel (keeping traces); filtering of the plain combination for the
    denominator trace; filter-synthesized rescaling; final combination of
    the rescaled channels. Returns (scaled_channels, combined_field).
    """
    merged = combine_flow(x_components, y_components, z_components, flow_mode)
    filtered = [run_filter(m, params) for m in merged]
    reference = pa_combine(merged, sigma)
    _, combined_trace = run_filter(reference, params)
    scaled = filter_synthesized_scale(filtered, combined_trace)
    return scaled, pa_combine(scaled, sigma)
