"""Spherical Gaussian lobes: evaluation, products, sphere integrals, cosine lobe.

A lobe is mu * exp(lambda * (v.p - 1)) on the unit sphere. Lobes are closed
under pointwise products, and their full-sphere integral has a closed form;
those two facts carry the whole shading path.

Conventions: float64 torch tensors everywhere, axis shape (..., 3), sharpness
(...,), amplitude (..., 3). Batched helpers operate on raw tensors; the
SphericalGaussian dataclass wraps a single lobe for the scalar API.
"""

from dataclasses import dataclass

import torch

# Below this axis norm a product lobe has no usable direction (antipodal
# equal-sharpness parents); the result is near-constant over the sphere.
DEGENERATE_AXIS_NORM = 1e-8
SHARPNESS_FLOOR = 1e-6

# Signed-cosine lobe: w.n ~ amp * exp(sharp * (w.n - 1)) - offset.
COSINE_SG_SHARPNESS = 0.0315
COSINE_SG_AMPLITUDE = 32.7080
COSINE_SG_OFFSET = 31.7003

TINY = 1e-12


def as_tensor(x):
    return torch.as_tensor(x, dtype=torch.float64)


def normalize(v, eps=TINY):
    return v / (torch.linalg.vector_norm(v, dim=-1, keepdim=True) + eps)


@dataclass(frozen=True)
class SphericalGaussian:
    """One lobe: unit axis, positive sharpness, non-negative RGB amplitude."""

    axis: torch.Tensor
    sharpness: torch.Tensor
    amplitude: torch.Tensor

    def __post_init__(self):
        axis = as_tensor(self.axis).reshape(3)
        sharpness = as_tensor(self.sharpness).reshape(())
        amplitude = as_tensor(self.amplitude)
        if amplitude.ndim == 0:
            amplitude = amplitude.expand(3)
        amplitude = amplitude.reshape(3)
        norm = torch.linalg.vector_norm(axis)
        if not torch.isfinite(norm) or abs(float(norm) - 1.0) > 1e-6:
            raise ValueError(f"lobe axis must be unit length, got |axis|={float(norm)}")
        if float(sharpness) <= 0.0:
            raise ValueError(f"lobe sharpness must be positive, got {float(sharpness)}")
        if float(amplitude.min()) < 0.0:
            raise ValueError("lobe amplitude components must be non-negative")
        object.__setattr__(self, "axis", axis / norm)
        object.__setattr__(self, "sharpness", sharpness)
        object.__setattr__(self, "amplitude", amplitude)

    def scaled(self, k):
        return SphericalGaussian(self.axis, self.sharpness, self.amplitude * k)


def eval_sg_batch(axes, sharpness, amplitudes, dirs):
    """mu * exp(lambda (v.p - 1)), broadcasting over leading dims."""
    dot = (axes * dirs).sum(-1)
    return amplitudes * torch.exp(sharpness * (dot - 1.0)).unsqueeze(-1)


def sg_product_batch(axes1, sharp1, amps1, axes2, sharp2, amps2):
    """Pointwise product of two lobe sets; returns (axes, sharpness, amplitudes).

    Combined axis is the lambda-weighted axis sum; its norm is the combined
    sharpness; the amplitude absorbs exp(l3 - l1 - l2) <= 1. Antipodal
    equal-sharpness parents leave no direction: keep the first axis and floor
    the sharpness (the true product is then a constant, which the floored
    lobe approximates to ~1e-6).
    """
    v = sharp1.unsqueeze(-1) * axes1 + sharp2.unsqueeze(-1) * axes2
    raw_norm = torch.linalg.vector_norm(v, dim=-1)
    degenerate = raw_norm < DEGENERATE_AXIS_NORM
    safe_norm = torch.where(degenerate, torch.ones_like(raw_norm), raw_norm)
    axes = torch.where(degenerate.unsqueeze(-1), axes1, v / safe_norm.unsqueeze(-1))
    sharp = torch.clamp(raw_norm, min=SHARPNESS_FLOOR)
    amps = amps1 * amps2 * torch.exp(raw_norm - sharp1 - sharp2).unsqueeze(-1)
    return axes, sharp, amps


def sg_integral_batch(sharpness, amplitudes):
    """Full-sphere integral: 2 pi mu / lambda * (1 - exp(-2 lambda))."""
    factor = 2.0 * torch.pi / sharpness * (1.0 - torch.exp(-2.0 * sharpness))
    return amplitudes * factor.unsqueeze(-1)


def sg_inner_product_batch(axes1, sharp1, amps1, axes2, sharp2, amps2):
    axes, sharp, amps = sg_product_batch(axes1, sharp1, amps1, axes2, sharp2, amps2)
    return sg_integral_batch(sharp, amps)


def stack_lobes(lobes):
    """Stack a lobe list into (axes [N,3], sharpness [N], amplitudes [N,3])."""
    axes = torch.stack([g.axis for g in lobes])
    sharp = torch.stack([g.sharpness for g in lobes])
    amps = torch.stack([g.amplitude for g in lobes])
    return axes, sharp, amps


def eval_sg(g: SphericalGaussian, v) -> torch.Tensor:
    """Evaluate one lobe at a unit direction; returns RGB (3,)."""
    v = as_tensor(v).reshape(3)
    return eval_sg_batch(g.axis, g.sharpness, g.amplitude, v)


def sg_product(g1: SphericalGaussian, g2: SphericalGaussian) -> SphericalGaussian:
    axes, sharp, amps = sg_product_batch(
        g1.axis, g1.sharpness, g1.amplitude, g2.axis, g2.sharpness, g2.amplitude
    )
    return SphericalGaussian(axes, sharp, amps)


def sg_integral(g: SphericalGaussian) -> torch.Tensor:
    return sg_integral_batch(g.sharpness, g.amplitude)


def sg_inner_product(g1: SphericalGaussian, g2: SphericalGaussian) -> torch.Tensor:
    """Integral of the pointwise product; the shading hot path in one call."""
    return sg_integral(sg_product(g1, g2))


def cosine_sg(n):
    """Signed-cosine lobe about n plus the constant offset to subtract."""
    lobe = SphericalGaussian(
        as_tensor(n),
        as_tensor(COSINE_SG_SHARPNESS),
        as_tensor(COSINE_SG_AMPLITUDE).expand(3),
    )
    return lobe, COSINE_SG_OFFSET
