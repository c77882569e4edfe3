"""Configuration-space wavefunctions of the saturating states.

The wavefunction is a Gaussian with a complex width set by z and a fully
fixed phase: the squeeze contributes e^{-i thetabar_plus/2} (the phase of
(cosh r + e^{i theta} sinh r)^{-1/2} on its continuous branch) and the
displacement contributes e^{-i q0 p0/(2 hbar)} e^{i q p0/hbar}.

The modulus and the phase of the prefactor are always assembled separately
(from (cosh 2r + cos theta sinh 2r)^{-1/4} and thetabar_plus); the
equivalent closed forms that a principal complex square root would give are
kept in psi_form for the equivalence checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .params import (
    Constants,
    DerivedAngles,
    Labels,
    Moments,
    derived_angles,
    labels_to_moments,
)


@dataclass(frozen=True)
class WavefnParams:
    """Consistent (labels, moments, angles) triple for one state."""

    labels: Labels
    moments: Moments
    angles: DerivedAngles
    constants: Constants

    @classmethod
    def from_labels(cls, labels: Labels, c: Constants = Constants()) -> "WavefnParams":
        m = labels_to_moments(labels, c)
        return cls(labels=labels, moments=m, angles=derived_angles(labels, m, c),
                   constants=c)


def _width_ratio(labels: Labels) -> complex:
    """(cosh r - e^{i theta} sinh r)/(cosh r + e^{i theta} sinh r)."""
    ch, sh = math.cosh(labels.r), math.sinh(labels.r)
    ph = cmath.exp(1j * labels.theta)
    return (ch - ph * sh) / (ch + ph * sh)


def log_psi(q, p: WavefnParams):
    """Log-amplitude log(psi(q)); stable where psi itself underflows.

    Vectorized over q.  exp(log_psi) reproduces psi wherever |psi| is
    representable.
    """
    q = np.asarray(q, dtype=float)
    c, lab, m, ang = p.constants, p.labels, p.moments, p.angles
    ch2 = math.cosh(2 * lab.r)
    sh2 = math.sinh(2 * lab.r)
    x2 = ch2 + math.cos(lab.theta) * sh2
    logpre = (-0.25 * math.log(math.pi * c.ell0**2) - 0.25 * math.log(x2)
              - 0.5j * ang.thetabar_plus - 0.5j * m.q0 * m.p0 / c.hbar)
    dq = (q - m.q0) / c.ell0
    return logpre + 1j * q * m.p0 / c.hbar - 0.5 * _width_ratio(lab) * dq * dq


def psi(q, p: WavefnParams):
    """Wavefunction <q|state> with the fully fixed phase convention."""
    return np.exp(log_psi(q, p))


def psi_form(q, p: WavefnParams, form: str):
    """Equivalent closed forms of psi, for cross-checking only.

    form = "angle":   modulus-phase prefactor, exponent (1 - i sin(theta)
                      sinh 2r)/(cosh 2r + cos(theta) sinh 2r);
    form = "ratio":   same prefactor, exponent from the Bogoliubov
                      coefficient ratio (the production path);
    form = "sqrt":    principal complex square root of
                      (cosh r + e^{i theta} sinh r) as the prefactor.
    """
    q = np.asarray(q, dtype=float)
    c, lab, m, ang = p.constants, p.labels, p.moments, p.angles
    ch, sh = math.cosh(lab.r), math.sinh(lab.r)
    ch2, sh2 = math.cosh(2 * lab.r), math.sinh(2 * lab.r)
    x2 = ch2 + math.cos(lab.theta) * sh2
    common = (cmath.exp(-0.5j * m.q0 * m.p0 / c.hbar)
              * np.exp(1j * q * m.p0 / c.hbar) / (math.pi * c.ell0**2) ** 0.25)
    dq2 = ((q - m.q0) / c.ell0) ** 2
    if form == "angle":
        pre = x2 ** -0.25 * cmath.exp(-0.5j * ang.thetabar_plus)
        expo = -0.5 * (1 - 1j * math.sin(lab.theta) * sh2) / x2 * dq2
    elif form == "ratio":
        pre = x2 ** -0.25 * cmath.exp(-0.5j * ang.thetabar_plus)
        expo = -0.5 * _width_ratio(lab) * dq2
    elif form == "sqrt":
        pre = 1.0 / cmath.sqrt(ch + cmath.exp(1j * lab.theta) * sh)
        expo = -0.5 * _width_ratio(lab) * dq2
    else:
        raise ValueError(f"unknown form {form!r}")
    return common * pre * np.exp(expo)


def phase_factor(z: complex) -> complex:
    """Squeeze part of the wavefunction phase, e^{-i thetabar_plus(z)/2}."""
    z = complex(z)
    r = abs(z)
    if r == 0:
        return 1.0 + 0j
    theta = cmath.phase(z)
    den = math.sqrt(math.cosh(2 * r) + math.cos(theta) * math.sinh(2 * r))
    tb = math.atan2(math.sin(theta) * math.sinh(r) / den,
                    (math.cosh(r) + math.cos(theta) * math.sinh(r)) / den)
    return cmath.exp(-0.5j * tb)


def hermite_functions(nmax: int, x: np.ndarray) -> np.ndarray:
    """Normalized Hermite functions h_0..h_nmax at positions x.

    h_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)), evaluated by the
    renormalized upward recurrence
        h_n = sqrt(2/n) x h_{n-1} - sqrt((n-1)/n) h_{n-2},
    which keeps every intermediate O(1) even for n in the hundreds.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * x * x)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for n in range(2, nmax + 1):
        out[n] = math.sqrt(2.0 / n) * x * out[n - 1] \
            - math.sqrt((n - 1) / n) * out[n - 2]
    return out


def synthesize(q, amps: np.ndarray, c: Constants = Constants()):
    """Position wavefunction from Fock amplitudes: sum_n amps[n] <q|n>.

    <q|n> = h_n(q/ell0)/sqrt(ell0).  This is the truncation-controlled
    oracle for the closed-form psi.
    """
    q = np.asarray(q, dtype=float)
    h = hermite_functions(len(amps) - 1, q / c.ell0)
    return np.tensordot(amps, h, axes=(0, 0)) / math.sqrt(c.ell0)
