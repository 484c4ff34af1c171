import math

import pytest
from hypothesis import given, strategies as st

from trapbose.errors import InvalidInputError
from trapbose.params import ZETA3, TrapParams, regime_report, scaled_scattering_length, scattering_data


def test_scaled_scattering_length_examples():
    assert scaled_scattering_length(0.0, TrapParams(3.0, 1.0, 7)) == 0.0
    assert scaled_scattering_length(1.0, TrapParams(1.0, 1.0, 100)) == pytest.approx(0.01, rel=1e-15)
    assert scaled_scattering_length(2.0, TrapParams(4.0, 1.0, 10)) == pytest.approx(0.1, rel=1e-15)


def test_negative_scattering_length_rejected():
    with pytest.raises(InvalidInputError):
        scaled_scattering_length(-1.0, TrapParams(1.0, 1.0, 10))


@pytest.mark.parametrize("omega,beta,n", [(0.0, 1.0, 1), (1.0, 0.0, 1), (1.0, 1.0, 0), (-1.0, 1.0, 5)])
def test_invalid_params(omega, beta, n):
    with pytest.raises(InvalidInputError):
        TrapParams(omega, beta, n)


def test_regime_report_examples():
    r = regime_report(TrapParams(1.0, 1.0, 1))
    assert r.thermo_parameter == pytest.approx(1.0)
    assert not r.bec_expected
    r = regime_report(TrapParams(1.0, 2.0, 1))
    assert r.thermo_parameter == pytest.approx(8.0)
    assert r.bec_expected
    r = regime_report(TrapParams(1.0, 1e-6, 1))
    assert r.thermo_parameter < 1e-15 and not r.bec_expected


def test_zeta3_full_precision():
    assert ZETA3 == 1.2020569031595942


@given(
    omega=st.floats(1e-3, 1e3),
    beta=st.floats(1e-3, 1e3),
    n=st.integers(1, 10**6),
    a_v=st.floats(0.0, 100.0),
)
def test_scale_identities(omega, beta, n, a_v):
    p = TrapParams(omega, beta, n)
    r = regime_report(p)
    assert r.ell_osc / r.r_th == pytest.approx(math.sqrt(beta * omega), rel=1e-12)
    assert r.density_ratio == pytest.approx((beta * omega) ** 1.5, rel=1e-12)
    d = scattering_data(a_v, p)
    assert d.gp_coupling == pytest.approx(a_v, rel=1e-12, abs=1e-300)


def test_t_over_tc_constructor():
    p = TrapParams.from_t_over_tc(2.0, 1000, 0.5)
    tc = 2.0 * (1000 / ZETA3) ** (1 / 3)
    assert p.temperature == pytest.approx(0.5 * tc, rel=1e-14)
