"""Deterministic numerical-integration oracles.

Three geometries: 1D line integrals over q (Gauss-Hermite with affine
recentering, or adaptive), 2D integrals over the complex u0-plane with
measure du0 dubar0 / pi = dx dy / pi (tensor Gauss-Hermite or Monte Carlo),
and Gaussian-weighted integrals over the z-plane.

Error estimates come from order doubling: the rule is evaluated at the
requested order and at twice that order, and the difference is the quoted
estimate.  Identical specs (and seeds) produce bit-identical reports:
node ordering is fixed and accumulation uses exact (fsum) or
extended-precision summation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_MAX_ORDER = 512


class QuadratureNotConverged(RuntimeError):
    """Order-doubled estimates disagree beyond the requested tolerance."""

    def __init__(self, message: str, report: "QuadratureReport"):
        super().__init__(message)
        self.report = report


NotConverged = QuadratureNotConverged


class BadMeasure(ValueError):
    """The z-plane measure fails its own normalization check."""


class QuadKind(enum.Enum):
    GAUSS_HERMITE = "gauss-hermite"
    TENSOR_GAUSS_HERMITE_2D = "tensor-gauss-hermite-2d"
    ADAPTIVE_1D = "adaptive-1d"
    MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class QuadratureSpec:
    """Rule selection: kind, base order (or node count), affine frame.

    center/scale recenter the rule on the integrand's Gaussian peak; for 1D
    rules only the first component of each pair is used.  seed matters only
    for MONTE_CARLO.
    """

    kind: QuadKind
    order_or_nodes: int = 40
    center: tuple[float, float] = (0.0, 0.0)
    scale: tuple[float, float] = (1.0, 1.0)
    rel_tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.order_or_nodes < 2:
            raise ValueError(f"order_or_nodes must be >= 2, got {self.order_or_nodes}")
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")


@dataclass(frozen=True)
class QuadratureReport:
    value: complex
    est_error: float
    nodes_used: int
    converged: bool


@lru_cache(maxsize=64)
def _gh_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Hermite nodes and total weights w_i e^{x_i^2} for plain integrals."""
    if order > _MAX_ORDER:
        raise ValueError(f"Gauss-Hermite order {order} exceeds limit {_MAX_ORDER}")
    x, w = np.polynomial.hermite.hermgauss(order)
    return x, w * np.exp(x * x)


def _fsum_complex(vals: np.ndarray) -> complex:
    return complex(math.fsum(vals.real), math.fsum(vals.imag))


def _sum_nodes(contribs: np.ndarray) -> np.ndarray | complex:
    """Deterministic compensated reduction over the leading (node) axis."""
    if contribs.ndim == 1:
        return _fsum_complex(contribs)
    acc = np.add.reduce(contribs.astype(np.clongdouble), axis=0)
    return np.asarray(acc, dtype=complex)


def _finish(value, est_error: float, nodes: int, rel_tol: float,
            check: bool, what: str) -> QuadratureReport:
    mag = abs(value) if np.isscalar(value) or isinstance(value, complex) \
        else float(np.max(np.abs(value)))
    converged = bool(est_error <= rel_tol * max(mag, 1e-300))
    report = QuadratureReport(value=value, est_error=est_error,
                              nodes_used=nodes, converged=converged)
    if check and not converged:
        raise QuadratureNotConverged(
            f"{what}: error estimate {est_error:.3e} exceeds "
            f"rel_tol {rel_tol:.1e} * |value| {mag:.3e}", report)
    return report


def _line_gh(f, order: int, center: float, scale: float) -> complex:
    x, tw = _gh_rule(order)
    q = center + scale * x
    vals = np.asarray(f(q), dtype=complex)
    return scale * _fsum_complex(vals * tw)


def integrate_line(f, spec: QuadratureSpec, check: bool = True) -> QuadratureReport:
    """Integral of f over the real line; f must accept an array of q values.

    Gauss-Hermite with affine recentering, or scipy adaptive quadrature for
    the ADAPTIVE_1D kind.  The caller asserts that f has Gaussian tails.
    """
    if spec.kind == QuadKind.ADAPTIVE_1D:
        from scipy.integrate import quad

        re, re_err = quad(lambda q: f(np.array([q]))[0].real, -np.inf, np.inf,
                          limit=200)
        im, im_err = quad(lambda q: f(np.array([q]))[0].imag, -np.inf, np.inf,
                          limit=200)
        return _finish(complex(re, im), re_err + im_err, 0, spec.rel_tol,
                       check, "adaptive line integral")
    if spec.kind != QuadKind.GAUSS_HERMITE:
        raise ValueError(f"unsupported line-integral kind {spec.kind}")
    n = spec.order_or_nodes
    coarse = _line_gh(f, n, spec.center[0], spec.scale[0])
    fine = _line_gh(f, 2 * n, spec.center[0], spec.scale[0])
    return _finish(fine, abs(fine - coarse), 3 * n, spec.rel_tol,
                   check, "line integral")


def _plane_nodes(order: int, spec: QuadratureSpec):
    x, twx = _gh_rule(order)
    y, twy = _gh_rule(order)
    sx, sy = spec.scale
    cx, cy = spec.center
    u = ((cx + sx * x)[:, None] + 1j * (cy + sy * y)[None, :]).ravel()
    tw = (twx[:, None] * twy[None, :]).ravel() * (sx * sy / math.pi)
    return u, tw


def _plane_gh(f, f_batch, order: int, spec: QuadratureSpec):
    u, tw = _plane_nodes(order, spec)
    if f_batch is not None:
        vals = np.asarray(f_batch(u), dtype=complex)
    else:
        vals = np.asarray([f(ui) for ui in u], dtype=complex)
    shape = (tw.size,) + (1,) * (vals.ndim - 1)
    return _sum_nodes(vals * tw.reshape(shape))


def _plane_mc(f, f_batch, spec: QuadratureSpec):
    """Counter-based (Philox) importance-sampled cross-check of the 2D rule."""
    rng = np.random.Generator(np.random.Philox(spec.seed))
    n = spec.order_or_nodes
    sx, sy = spec.scale
    cx, cy = spec.center
    xs = rng.normal(cx, sx / math.sqrt(2.0), size=n)
    ys = rng.normal(cy, sy / math.sqrt(2.0), size=n)
    u = xs + 1j * ys
    if f_batch is not None:
        vals = np.asarray(f_batch(u), dtype=complex)
    else:
        vals = np.asarray([f(ui) for ui in u], dtype=complex)
    # 1/(pi * sampling density) = sx sy e^{g}
    g = (xs - cx) ** 2 / sx**2 + (ys - cy) ** 2 / sy**2
    w = sx * sy * np.exp(g)
    samples = vals * w.reshape((n,) + (1,) * (vals.ndim - 1))
    mean = _sum_nodes(samples) / n
    var = np.sum(np.abs(samples - mean) ** 2, axis=0) / (n - 1)
    spread = math.sqrt(float(np.max(var)) / n)
    return mean, spread


def integrate_plane(f=None, spec: QuadratureSpec | None = None,
                    f_batch=None, check: bool = True) -> QuadratureReport:
    """Integral of f(u0) with measure du0 dubar0 / pi over the complex plane.

    f maps one complex point to a complex value or ndarray; f_batch, when
    given, maps a flat array of points to the stacked values and is
    preferred for speed.  Matrix-valued integrands converge elementwise.
    """
    if spec is None:
        raise ValueError("spec is required")
    if spec.kind == QuadKind.MONTE_CARLO:
        mean, spread = _plane_mc(f, f_batch, spec)
        return _finish(mean, spread, spec.order_or_nodes, spec.rel_tol,
                       check, "Monte Carlo plane integral")
    if spec.kind != QuadKind.TENSOR_GAUSS_HERMITE_2D:
        raise ValueError(f"unsupported plane-integral kind {spec.kind}")
    n = spec.order_or_nodes
    coarse = _plane_gh(f, f_batch, n, spec)
    fine = _plane_gh(f, f_batch, 2 * n, spec)
    diff = fine - coarse
    est = abs(diff) if isinstance(diff, complex) else float(np.max(np.abs(diff)))
    return _finish(fine, est, n * n + 4 * n * n, spec.rel_tol,
                   check, "plane integral")


def mu_gaussian(z: np.ndarray | complex, sigma: float) -> np.ndarray | complex:
    """Normalized z-plane measure density mu(z) = e^{-|z|^2/sigma^2}/sigma^2."""
    return np.exp(-np.abs(z) ** 2 / sigma**2) / sigma**2


def integrate_z(f=None, sigma: float = 0.5, spec: QuadratureSpec | None = None,
                f_batch=None, check: bool = True) -> QuadratureReport:
    """Integral of mu(z) f(z) with measure dz dzbar / pi.

    mu is the Gaussian mu_gaussian(z, sigma), normalized so that f = 1
    integrates to 1; that normalization is verified with the same rule
    first and BadMeasure is raised if it fails.
    """
    if spec is None:
        raise ValueError("spec is required")
    if spec.kind != QuadKind.TENSOR_GAUSS_HERMITE_2D:
        raise ValueError(f"unsupported z-integral kind {spec.kind}")
    norm = _plane_gh(lambda z: mu_gaussian(z, sigma), None,
                     spec.order_or_nodes, spec)
    if abs(norm - 1.0) > max(1e-8, 10 * spec.rel_tol):
        raise BadMeasure(
            f"measure normalization integrates to {norm}, expected 1; "
            f"widen the rule (scale {spec.scale}, order {spec.order_or_nodes})")

    def weighted(z):
        return mu_gaussian(z, sigma) * f(z)

    weighted_batch = None
    if f_batch is not None:
        def weighted_batch(zs):
            vals = np.asarray(f_batch(zs), dtype=complex)
            mu = mu_gaussian(zs, sigma)
            return vals * mu.reshape((zs.size,) + (1,) * (vals.ndim - 1))

    return integrate_plane(weighted if f_batch is None else None, spec,
                           f_batch=weighted_batch, check=check)
