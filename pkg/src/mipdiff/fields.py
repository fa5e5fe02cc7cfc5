"""Grid containers and finite-difference machinery for 2-D intensity fields.

A field is a plain ``float64`` array of shape ``(height, width)`` with x the
fast (column) axis; a volume is a stack of fields with shape
``(depth, height, width)``. All stencils are central differences on a unit
grid with reflective borders, u(-1, y) = u(1, y).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "as_field",
    "as_volume",
    "DerivativeBundle",
    "DiffusionBasis",
    "derivatives",
    "hessian_eigen",
    "directional_second_derivative",
    "structureness",
    "diffusion_basis",
]


def as_field(data) -> np.ndarray:
    """Coerce ``data`` to a finite float64 2-D field, validating shape."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"expected a 2-D field, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("field contains NaN or Inf values")
    return arr


def as_volume(data) -> np.ndarray:
    """Coerce ``data`` to a finite float64 volume of shape (depth, height, width)."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 3 or min(arr.shape) < 1:
        raise ValueError(f"expected a 3-D volume, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("volume contains NaN or Inf values")
    return arr


@dataclass(frozen=True)
class DerivativeBundle:
    """First and second central-difference derivatives of a field."""

    ux: np.ndarray
    uy: np.ndarray
    uxx: np.ndarray
    uyy: np.ndarray
    uxy: np.ndarray


@dataclass(frozen=True)
class DiffusionBasis:
    """Per-pixel local frame for directional diffusion.

    eta is the unit gradient direction, e1/e2 the unit eigenvectors of the
    2x2 Hessian sorted by eigenvalue (e1 max, e2 min). d_* are the second
    directional derivatives along each direction and c is the structureness
    sqrt(uxx^2 + uyy^2). Degenerate pixels carry (0, 0) directions and zero
    derivatives.
    """

    eta_x: np.ndarray
    eta_y: np.ndarray
    e1_x: np.ndarray
    e1_y: np.ndarray
    e2_x: np.ndarray
    e2_y: np.ndarray
    d_eta: np.ndarray
    d_e1: np.ndarray
    d_e2: np.ndarray
    c: np.ndarray


def derivatives(field) -> DerivativeBundle:
    """Central-difference derivative bundle with reflective borders.

    The reflective extension mirrors about the border pixel, so first
    derivatives vanish at the border and second derivatives stay consistent
    with the interior stencil. Requires at least a 3x3 field.
    """
    u = as_field(field)
    ny, nx = u.shape
    if ny < 3 or nx < 3:
        raise ValueError(f"derivative stencils need at least 3x3, got {ny}x{nx}")
    p = np.pad(u, 1, mode="reflect")
    e = p[1:-1, 2:]
    w = p[1:-1, :-2]
    s = p[2:, 1:-1]
    n = p[:-2, 1:-1]
    se = p[2:, 2:]
    sw = p[2:, :-2]
    ne = p[:-2, 2:]
    nw = p[:-2, :-2]
    ux = 0.5 * (e - w)
    uy = 0.5 * (s - n)
    uxx = e - 2.0 * u + w
    uyy = s - 2.0 * u + n
    uxy = 0.25 * ((se - ne) - (sw - nw))
    return DerivativeBundle(ux=ux, uy=uy, uxx=uxx, uyy=uyy, uxy=uxy)


def _fix_sign(vx, vy):
    # orient so the larger-magnitude component is non-negative; ties toward
    # non-negative x. Adding 0.0 clears negative zeros.
    dominant = np.where(np.abs(vx) >= np.abs(vy), vx, vy)
    flip = dominant < 0.0
    sign = np.where(flip, -1.0, 1.0)
    return vx * sign + 0.0, vy * sign + 0.0


def hessian_eigen(bundle: DerivativeBundle):
    """Closed-form eigen decomposition of the per-pixel 2x2 Hessian.

    Returns ``(lam_max, lam_min, e1x, e1y, e2x, e2y)``. Eigenvectors are unit
    length with the larger-magnitude component non-negative. A zero Hessian
    yields (0, 0) directions; an isotropic (tied) Hessian yields the axis
    pair e1 = (1, 0), e2 = (0, 1).
    """
    a, b, c = bundle.uxx, bundle.uxy, bundle.uyy
    half = 0.5 * (a + c)
    disc = np.sqrt(0.25 * (a - c) ** 2 + b * b)
    lam_max = half + disc
    lam_min = half - disc

    # candidate eigenvectors for lam_max: the columns of (H - lam_min I).
    # Both have non-negative leading entries; pick the better conditioned one.
    ca_x, ca_y = a - lam_min, b
    cb_x, cb_y = b, c - lam_min
    use_a = ca_x * ca_x + ca_y * ca_y >= cb_x * cb_x + cb_y * cb_y
    vx = np.where(use_a, ca_x, cb_x)
    vy = np.where(use_a, ca_y, cb_y)
    norm = np.sqrt(vx * vx + vy * vy)
    safe = np.where(norm > 0.0, norm, 1.0)
    e1x = vx / safe
    e1y = vy / safe
    # rotate by 90 degrees for the orthogonal eigenvector of lam_min
    e2x = -e1y
    e2y = e1x

    zero = (a == 0.0) & (b == 0.0) & (c == 0.0)
    tie = (disc == 0.0) & ~zero
    e1x = np.where(tie, 1.0, e1x)
    e1y = np.where(tie, 0.0, e1y)
    e2x = np.where(tie, 0.0, e2x)
    e2y = np.where(tie, 1.0, e2y)
    for arr in (e1x, e1y, e2x, e2y):
        arr[zero] = 0.0

    e1x, e1y = _fix_sign(e1x, e1y)
    e2x, e2y = _fix_sign(e2x, e2y)
    return lam_max, lam_min, e1x, e1y, e2x, e2y


def directional_second_derivative(bundle: DerivativeBundle, direction):
    """Second derivative v^T H v along per-pixel (or constant) direction v.

    ``direction`` is a pair (vx, vy) of scalars or arrays broadcastable to the
    field shape. Zero directions give zero by construction.
    """
    vx, vy = direction
    vx = np.asarray(vx, dtype=np.float64)
    vy = np.asarray(vy, dtype=np.float64)
    return (
        vx * vx * bundle.uxx
        + 2.0 * vx * vy * bundle.uxy
        + vy * vy * bundle.uyy
    )


def structureness(bundle: DerivativeBundle) -> np.ndarray:
    """Pointwise structure strength sqrt(uxx^2 + uyy^2)."""
    return np.sqrt(bundle.uxx**2 + bundle.uyy**2)


def diffusion_basis(bundle: DerivativeBundle) -> DiffusionBasis:
    """Assemble the full directional frame from a derivative bundle."""
    lam_max, lam_min, e1x, e1y, e2x, e2y = hessian_eigen(bundle)
    del lam_max, lam_min
    gnorm = np.sqrt(bundle.ux**2 + bundle.uy**2)
    safe = np.where(gnorm > 0.0, gnorm, 1.0)
    eta_x = np.where(gnorm > 0.0, bundle.ux / safe, 0.0)
    eta_y = np.where(gnorm > 0.0, bundle.uy / safe, 0.0)
    return DiffusionBasis(
        eta_x=eta_x,
        eta_y=eta_y,
        e1_x=e1x,
        e1_y=e1y,
        e2_x=e2x,
        e2_y=e2y,
        d_eta=directional_second_derivative(bundle, (eta_x, eta_y)),
        d_e1=directional_second_derivative(bundle, (e1x, e1y)),
        d_e2=directional_second_derivative(bundle, (e2x, e2y)),
        c=structureness(bundle),
    )
