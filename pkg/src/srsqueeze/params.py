"""Bidirectional parametrization between physical moments and (u0, z) labels.

A state saturating the Schrodinger-Robertson bound for (Q, P) is fixed by two
complex labels: a displacement ``u0`` and a squeeze ``z = r e^{i theta}``.
This module maps labels to the physical expectation data (centers,
uncertainties, correlation), inverts that map, and exposes the angular
quantities (phi, rho_pm, theta_pm, thetabar_pm) that the closed-form
wavefunctions and overlap kernels are written in.

Conventions: theta always lives in (-pi, pi]; at r = 0 it is stored as 0
(the squeeze phase is physically irrelevant there).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi

SQRT2 = math.sqrt(2.0)


class NotSaturated(ValueError):
    """Moments violate dq^2 dp^2 = (hbar^2 + corr^2)/4 beyond tolerance.

    Such moments do not label any state that saturates the
    Schrodinger-Robertson uncertainty relation.
    """


def wrap_angle(theta: float) -> float:
    """Reduce an angle to the canonical interval (-pi, pi]."""
    t = math.fmod(theta, TWO_PI)
    if t <= -math.pi:
        t += TWO_PI
    elif t > math.pi:
        t -= TWO_PI
    return t


@dataclass(frozen=True)
class Constants:
    """Physical constants: the action scale hbar and the intrinsic scale ell0.

    ell0 carries the units of Q, so P carries units of hbar/ell0.  The
    dimensionless defaults hbar = ell0 = 1 are what the test suite uses.
    """

    hbar: float = 1.0
    ell0: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if not self.ell0 > 0:
            raise ValueError(f"ell0 must be positive, got {self.ell0}")


@dataclass(frozen=True)
class Labels:
    """State labels (u0, z) with z stored in polar form (r, theta).

    theta is normalized into (-pi, pi] on construction, and forced to 0
    when r vanishes so that equal states compare equal.
    """

    u0: complex = 0j
    r: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if not self.r >= 0:
            raise ValueError(f"squeeze magnitude r must be >= 0, got {self.r}")
        theta = wrap_angle(self.theta) if self.r > 0 else 0.0
        object.__setattr__(self, "u0", complex(self.u0))
        object.__setattr__(self, "theta", theta)

    @classmethod
    def from_z(cls, u0: complex, z: complex) -> "Labels":
        return cls(u0=u0, r=abs(z), theta=cmath.phase(z) if z != 0 else 0.0)

    @property
    def z(self) -> complex:
        return self.r * cmath.exp(1j * self.theta)

    @property
    def zeta(self) -> complex:
        """zeta = e^{i theta} tanh r, always inside the unit disk."""
        return cmath.exp(1j * self.theta) * math.tanh(self.r)


@dataclass(frozen=True)
class Moments:
    """Expectation data of a state: centers, spreads and (Q,P) correlation.

    corr is the anticommutator expectation <{Q - q0, P - p0}> and carries
    action units.  For a saturating state dq^2 dp^2 = (hbar^2 + corr^2)/4.
    """

    q0: float
    p0: float
    dq: float
    dp: float
    corr: float

    def __post_init__(self):
        if not self.dq > 0:
            raise ValueError(f"dq must be positive, got {self.dq}")
        if not self.dp > 0:
            raise ValueError(f"dp must be positive, got {self.dp}")


@dataclass(frozen=True)
class DerivedAngles:
    """Angular repackaging of the moments used by wavefunctions and kernels.

    rho_plus = cosh r and rho_minus = sinh r; theta = theta_minus -
    theta_plus +- pi resolves the squeeze phase; thetabar_pm fix the phase
    of (cosh r +- e^{i theta} sinh r).
    """

    phi: float
    rho_plus: float
    rho_minus: float
    theta_plus: float
    theta_minus: float
    zeta: complex
    thetabar_plus: float
    thetabar_minus: float


def saturation_defect(m: Moments, c: Constants = Constants()) -> float:
    """Relative defect of dq^2 dp^2 against (hbar^2 + corr^2)/4."""
    target = 0.25 * (c.hbar**2 + m.corr**2)
    return abs(m.dq**2 * m.dp**2 - target) / target


def labels_to_moments(labels: Labels, c: Constants = Constants()) -> Moments:
    """Moments of the saturating state labelled by (u0, z).

    The centers are linear in u0; the spreads and the correlation depend
    only on z = r e^{i theta}:

        (dq/ell0)^2      = (cosh 2r + cos(theta) sinh 2r) / 2
        (ell0 dp/hbar)^2 = (cosh 2r - cos(theta) sinh 2r) / 2
        corr             = hbar sin(theta) sinh 2r
    """
    u0 = labels.u0
    r, theta = labels.r, labels.theta
    q0 = SQRT2 * c.ell0 * u0.real
    p0 = SQRT2 * c.hbar * u0.imag / c.ell0
    ch2, sh2 = math.cosh(2 * r), math.sinh(2 * r)
    dq = c.ell0 * math.sqrt(0.5 * (ch2 + math.cos(theta) * sh2))
    dp = (c.hbar / c.ell0) * math.sqrt(0.5 * (ch2 - math.cos(theta) * sh2))
    corr = c.hbar * math.sin(theta) * sh2
    return Moments(q0=q0, p0=p0, dq=dq, dp=dp, corr=corr)


def moments_to_labels(
    m: Moments,
    c: Constants = Constants(),
    rel_tol: float = 1e-9,
) -> Labels:
    """Invert labels_to_moments.

    Raises NotSaturated when the saturation constraint is violated by more
    than rel_tol (relative), since only saturating moments label a state.
    The squeeze phase is recovered on the canonical branch (-pi, pi]; when
    sinh r is below 1e-14 the state is unsqueezed and theta is set to 0.
    """
    defect = saturation_defect(m, c)
    if defect > rel_tol:
        raise NotSaturated(
            f"dq^2 dp^2 deviates from (hbar^2 + corr^2)/4 by relative {defect:.3e} "
            f"(tolerance {rel_tol:.3e})"
        )
    u0 = (m.q0 / c.ell0 + 1j * c.ell0 * m.p0 / c.hbar) / SQRT2
    x = (m.dq / c.ell0) ** 2
    y = (c.ell0 * m.dp / c.hbar) ** 2
    # cos(theta) sinh 2r = x - y and sin(theta) sinh 2r = corr/hbar fix
    # both the magnitude and the branch of the squeeze phase.
    t = m.corr / c.hbar
    sh2 = math.hypot(x - y, t)
    r = 0.5 * math.asinh(sh2)
    if math.sinh(r) < 1e-14:
        return Labels(u0=u0, r=0.0, theta=0.0)
    theta = math.atan2(t, x - y)
    return Labels(u0=u0, r=r, theta=wrap_angle(theta))


def derived_angles(
    labels: Labels,
    m: Moments,
    c: Constants = Constants(),
) -> DerivedAngles:
    """All angular quantities of a consistent (labels, moments) pair."""
    phi = math.atan(m.corr / c.hbar)
    sx = m.dq / c.ell0
    sy = c.ell0 * m.dp / c.hbar
    rho_plus = math.sqrt(0.5 * (sy**2 + sx**2 + 1.0))
    rho_minus = math.sqrt(max(0.0, 0.5 * (sy**2 + sx**2 - 1.0)))
    cphi, sphi = math.cos(phi), math.sin(phi)
    theta_plus = math.atan2(sphi * sx, sy + cphi * sx)
    if rho_minus > 1e-14:
        theta_minus = math.atan2(-sphi * sx, sy - cphi * sx)
    else:
        theta_minus = 0.0
    r, theta = labels.r, labels.theta
    chr_, shr = math.cosh(r), math.sinh(r)
    ch2, sh2 = math.cosh(2 * r), math.sinh(2 * r)
    den_p = math.sqrt(ch2 + math.cos(theta) * sh2)
    den_m = math.sqrt(ch2 - math.cos(theta) * sh2)
    thetabar_plus = math.atan2(math.sin(theta) * shr / den_p,
                               (chr_ + math.cos(theta) * shr) / den_p)
    thetabar_minus = math.atan2(-math.sin(theta) * shr / den_m,
                                (chr_ - math.cos(theta) * shr) / den_m)
    return DerivedAngles(
        phi=phi,
        rho_plus=rho_plus,
        rho_minus=rho_minus,
        theta_plus=wrap_angle(theta_plus),
        theta_minus=wrap_angle(theta_minus),
        zeta=labels.zeta,
        thetabar_plus=wrap_angle(thetabar_plus),
        thetabar_minus=wrap_angle(thetabar_minus),
    )


def lambda0(m: Moments, c: Constants = Constants()) -> complex:
    """Complex eigenvalue lambda0 of the saturation condition.

    lambda0 = (corr/2 - i hbar/2) / dp^2, equivalently
    -lambda0 = i (dq/dp) e^{i phi} with tan(phi) = corr/hbar.
    """
    return (0.5 * m.corr - 0.5j * c.hbar) / m.dp**2


def squeezed_frame_label(u0: complex, z: complex) -> complex:
    """Displacement label seen from the squeezed frame.

    u0(z) = cosh(r) (u0 - zeta conj(u0)) with zeta = e^{i theta} tanh r;
    it is the eigenvalue of the squeezed annihilator on the state (u0, z).
    """
    r = abs(z)
    if r == 0:
        return complex(u0)
    zeta = (z / r) * math.tanh(r)
    return math.cosh(r) * (u0 - zeta * u0.conjugate())
