import math

import numpy as np
import pytest

from srsqueeze.params import (
    Constants,
    Labels,
    Moments,
    NotSaturated,
    derived_angles,
    labels_to_moments,
    lambda0,
    moments_to_labels,
    saturation_defect,
    squeezed_frame_label,
    wrap_angle,
)

C = Constants()

GRID = [
    Labels(u0=u0, r=r, theta=th)
    for u0 in (0j, 1 + 0j, 1 + 1j, 2j, -1.5 + 0.5j)
    for r in (0.0, 0.25, 0.7, 1.2)
    for th in (0.0, math.pi / 3, math.pi / 2, math.pi)
    if not (r == 0 and th != 0.0)
]


def test_constants_validation():
    with pytest.raises(ValueError):
        Constants(hbar=0.0)
    with pytest.raises(ValueError):
        Constants(ell0=-1.0)


def test_labels_canonicalization():
    lab = Labels(u0=1j, r=0.5, theta=3 * math.pi)
    assert lab.theta == pytest.approx(math.pi)
    assert Labels(u0=0, r=0.0, theta=2.3).theta == 0.0
    with pytest.raises(ValueError):
        Labels(u0=0, r=-0.1)
    assert Labels.from_z(1j, 0.5j).theta == pytest.approx(math.pi / 2)


def test_wrap_angle_interval():
    for t in np.linspace(-9, 9, 61):
        w = wrap_angle(t)
        assert -math.pi < w <= math.pi
        assert abs(np.exp(1j * w) - np.exp(1j * t)) < 1e-12


def test_vacuum_moments():
    m = labels_to_moments(Labels(), C)
    assert m.q0 == 0 and m.p0 == 0
    assert m.dq == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert m.dp == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert m.corr == 0


def test_vacuum_moments_with_units():
    c = Constants(hbar=2.0, ell0=0.5)
    m = labels_to_moments(Labels(), c)
    assert m.dq == pytest.approx(0.5 / math.sqrt(2), rel=1e-15)
    assert m.dp == pytest.approx(2.0 / (0.5 * math.sqrt(2)), rel=1e-15)


def test_centers_from_u0():
    u0 = (1 + 1j) / math.sqrt(2)
    m = labels_to_moments(Labels(u0=u0), C)
    assert m.q0 == pytest.approx(1.0, rel=1e-15)
    assert m.p0 == pytest.approx(1.0, rel=1e-15)
    c = Constants(hbar=3.0, ell0=2.0)
    m = labels_to_moments(Labels(u0=u0), c)
    assert m.q0 == pytest.approx(c.ell0)
    assert m.p0 == pytest.approx(c.hbar / c.ell0)


def test_correlated_point_against_fock_expectations():
    # corr/hbar = sinh(1) at r=0.5, theta=pi/2; dq = dp ell0^2/hbar there
    from srsqueeze import fock

    lab = Labels(u0=0, r=0.5, theta=math.pi / 2)
    m = labels_to_moments(lab, C)
    assert m.corr == pytest.approx(math.sinh(1.0), rel=1e-14)
    assert m.dq == pytest.approx(m.dp, rel=1e-14)
    st = fock.saturating_state(lab, C, 128)
    me = fock.expectations(st, C)
    assert me.corr == pytest.approx(m.corr, abs=1e-12)
    assert me.dq == pytest.approx(m.dq, abs=1e-13)
    assert me.dp == pytest.approx(m.dp, abs=1e-13)


@pytest.mark.parametrize("lab", GRID)
def test_roundtrip(lab):
    m = labels_to_moments(lab, C)
    back = moments_to_labels(m, C)
    assert abs(back.u0 - lab.u0) <= 1e-12
    assert abs(back.r - lab.r) <= 1e-12
    if lab.r > 0:
        assert abs(np.exp(1j * back.theta) - np.exp(1j * lab.theta)) <= 1e-12


def test_roundtrip_random_labels():
    rng = np.random.default_rng(42)
    c = Constants(hbar=0.8, ell0=1.9)
    for _ in range(200):
        lab = Labels(u0=complex(*rng.normal(scale=1.5, size=2)),
                     r=float(rng.uniform(0, 1.5)),
                     theta=float(rng.uniform(-math.pi, math.pi)))
        back = moments_to_labels(labels_to_moments(lab, c), c)
        assert abs(back.u0 - lab.u0) <= 1e-12
        assert abs(back.r - lab.r) <= 1e-12
        if lab.r > 1e-12:
            assert abs(np.exp(1j * back.theta)
                       - np.exp(1j * lab.theta)) <= 1e-11


@pytest.mark.parametrize("lab", GRID)
def test_saturation_identity(lab):
    m = labels_to_moments(lab, C)
    target = 0.25 * (1 + math.sin(lab.theta) ** 2 * math.sinh(2 * lab.r) ** 2)
    assert m.dq**2 * m.dp**2 == pytest.approx(target, rel=1e-12)
    assert saturation_defect(m, C) <= 1e-12


@pytest.mark.parametrize("lab", GRID)
def test_uncertainty_band(lab):
    m = labels_to_moments(lab, C)
    lo, hi = math.exp(-lab.r) / math.sqrt(2), math.exp(lab.r) / math.sqrt(2)
    assert lo - 1e-12 <= m.dq <= hi + 1e-12
    assert lo - 1e-12 <= m.dp <= hi + 1e-12


def test_inverse_map_vacuum():
    lab = moments_to_labels(
        Moments(q0=0, p0=0, dq=1 / math.sqrt(2), dp=1 / math.sqrt(2), corr=0), C)
    assert lab.u0 == 0 and lab.r == 0 and lab.theta == 0


@pytest.mark.parametrize("r", (0.3, 0.9))
def test_inverse_map_squeeze_branches(r):
    er, emr = math.exp(r) / math.sqrt(2), math.exp(-r) / math.sqrt(2)
    lab = moments_to_labels(Moments(q0=0, p0=0, dq=er, dp=emr, corr=0), C)
    assert lab.theta == pytest.approx(0.0, abs=1e-14)
    assert lab.r == pytest.approx(r, rel=1e-13)
    lab = moments_to_labels(Moments(q0=0, p0=0, dq=emr, dp=er, corr=0), C)
    assert lab.theta == pytest.approx(math.pi)
    assert lab.r == pytest.approx(r, rel=1e-13)


def test_not_saturated_raises():
    with pytest.raises(NotSaturated):
        moments_to_labels(Moments(q0=0, p0=0, dq=0.9, dp=0.9, corr=0.5), C)
    # loosening the tolerance lets mildly noisy moments through
    m = labels_to_moments(Labels(u0=1, r=0.4, theta=1.0), C)
    noisy = Moments(q0=m.q0, p0=m.p0, dq=m.dq * (1 + 3e-8), dp=m.dp,
                    corr=m.corr)
    with pytest.raises(NotSaturated):
        moments_to_labels(noisy, C)
    moments_to_labels(noisy, C, rel_tol=1e-6)


def test_moments_validation():
    with pytest.raises(ValueError):
        Moments(q0=0, p0=0, dq=0.0, dp=1.0, corr=0)


def test_derived_angles_unsqueezed():
    lab = Labels(u0=0.3 + 0.1j)
    ang = derived_angles(lab, labels_to_moments(lab, C), C)
    assert ang.rho_plus == pytest.approx(1.0, abs=1e-14)
    # rho_minus is a square root of a cancelling difference; its square is
    # the well-conditioned quantity
    assert ang.rho_minus**2 == pytest.approx(0.0, abs=1e-14)
    assert ang.rho_minus < 1e-7
    assert ang.thetabar_plus == 0.0
    assert ang.thetabar_minus == 0.0
    assert ang.zeta == 0


def test_derived_angles_real_squeeze():
    lab = Labels(u0=0, r=0.8, theta=0.0)
    ang = derived_angles(lab, labels_to_moments(lab, C), C)
    assert math.sin(ang.thetabar_plus) == pytest.approx(0.0, abs=1e-15)
    assert math.sin(ang.thetabar_minus) == pytest.approx(0.0, abs=1e-15)
    assert math.cos(ang.thetabar_plus) == pytest.approx(1.0, rel=1e-15)


def test_derived_angles_frozen_point():
    # independently evaluated at 40 digits for r=1, theta=pi/3
    lab = Labels(u0=0, r=1.0, theta=math.pi / 3)
    m = labels_to_moments(lab, C)
    ang = derived_angles(lab, m, C)
    assert ang.phi == pytest.approx(1.262568419811810039611, abs=1e-14)
    assert ang.rho_plus == pytest.approx(1.543080634815243778478, rel=1e-14)
    assert ang.rho_minus == pytest.approx(1.175201193643801456882, rel=1e-14)
    assert ang.theta_plus == pytest.approx(0.8169470743480000589738, abs=1e-14)
    assert ang.theta_minus == pytest.approx(-1.277448028045195433335, abs=1e-14)
    assert ang.thetabar_plus == pytest.approx(0.4456213454638099806375, abs=1e-14)
    assert ang.thetabar_minus == pytest.approx(-0.8169470743480000589738, abs=1e-14)
    assert m.dq == pytest.approx(1.669674503459752307928, rel=1e-14)
    assert m.dp == pytest.approx(0.9871082734837455701428, rel=1e-14)
    assert m.corr == pytest.approx(3.140953249175508260951, rel=1e-14)


@pytest.mark.parametrize("lab", GRID)
def test_rho_and_angle_identities(lab):
    m = labels_to_moments(lab, C)
    ang = derived_angles(lab, m, C)
    assert ang.rho_plus**2 - ang.rho_minus**2 == pytest.approx(1.0, abs=1e-12)
    assert math.tan(ang.phi) == pytest.approx(m.corr, abs=1e-12)
    assert abs(ang.zeta) == pytest.approx(math.tanh(lab.r), abs=1e-13)
    ch2, sh2 = math.cosh(2 * lab.r), math.sinh(2 * lab.r)
    rhs = 1.0 / math.sqrt(ch2**2 - (math.cos(lab.theta) * sh2) ** 2)
    assert math.cos(ang.thetabar_plus - ang.thetabar_minus) == \
        pytest.approx(rhs, abs=1e-12)


def test_lambda0_uncorrelated():
    m = labels_to_moments(Labels(u0=0, r=0.6, theta=0.0), C)
    lam = lambda0(m, C)
    assert lam.real == 0.0
    assert lam == pytest.approx(-0.5j / m.dp**2, rel=1e-15)


def test_lambda0_vacuum():
    c = Constants(hbar=1.7, ell0=0.8)
    lam = lambda0(labels_to_moments(Labels(), c), c)
    assert lam == pytest.approx(-1j * c.ell0**2 / c.hbar, rel=1e-14)


def test_lambda0_frozen_point_and_forms():
    lab = Labels(u0=0, r=0.5, theta=math.pi / 2)
    m = labels_to_moments(lab, C)
    lam = lambda0(m, C)
    assert lam == pytest.approx(0.7615941559557648881 - 0.6480542736638853996j,
                                rel=1e-14)
    phi = math.atan(m.corr)
    assert lam == pytest.approx(-1j * (m.dq / m.dp) * np.exp(1j * phi),
                                rel=1e-12)


def test_squeezed_frame_label():
    assert squeezed_frame_label(1 + 2j, 0) == 1 + 2j
    z = 0.7 * np.exp(1j * 1.1)
    u0 = 0.5 - 0.25j
    zeta = np.exp(1j * 1.1) * math.tanh(0.7)
    expected = math.cosh(0.7) * (u0 - zeta * np.conj(u0))
    assert squeezed_frame_label(u0, z) == pytest.approx(expected, rel=1e-14)
