import math

import pytest

from zrblab.model import (
    DerivedConstants,
    ModelParams,
    ParameterError,
    derive_constants,
    validate_params,
)


def test_valid_params_pass_through():
    p = ModelParams(omega=1.0, alpha=0.0, beta=1.0, gamma=1.0, theta=0.5)
    assert validate_params(p) is p


def test_beta_alpha_constraint_rejected():
    p = ModelParams(omega=1.0, alpha=2.0, beta=1.0, gamma=1.0, theta=0.5)
    with pytest.raises(ParameterError, match="beta - alpha\\^2"):
        validate_params(p)


def test_theta_boundary_excluded():
    p = ModelParams(omega=1.0, alpha=0.0, beta=1.0, gamma=1.0, theta=1.0)
    with pytest.raises(ParameterError, match="theta not in"):
        validate_params(p)


@pytest.mark.parametrize(
    "field,value,msg",
    [
        ("omega", -1.0, "omega"),
        ("beta", 0.0, "beta <= 0"),
        ("gamma", -0.5, "gamma"),
        ("theta", 0.0, "theta"),
    ],
)
def test_sign_constraints_named(field, value, msg):
    base = dict(omega=1.0, alpha=0.0, beta=1.0, gamma=1.0, theta=0.5)
    base[field] = value
    with pytest.raises(ParameterError, match=msg):
        validate_params(ModelParams(**base))


def test_relaxed_theta_mode_for_fixtures():
    # theta = 1 with alpha = 0, beta = 4 gives integer window speeds +-2
    p = ModelParams(omega=1.0, alpha=0.0, beta=4.0, gamma=1.0, theta=1.0)
    validate_params(p, relax_theta=True)
    d = derive_constants(p)
    assert d.upsilon_plus == pytest.approx(2.0)
    assert d.upsilon_minus == pytest.approx(-2.0)


def test_q_correction_annihilates_when_alpha_gamma_is_one():
    p = ModelParams(omega=1.0, alpha=1.0, beta=2.0, gamma=1.0, theta=0.5)
    assert validate_params(p).q == pytest.approx(1.0)


def test_q_equals_gamma_at_alpha_zero():
    for gamma in (0.3, 1.0, 2.5):
        p = ModelParams(omega=1.0, alpha=0.0, beta=1.7, gamma=gamma, theta=0.3)
        assert p.q == gamma


def test_derived_constants_algebra(std_params):
    d = derive_constants(std_params)
    assert isinstance(d, DerivedConstants)
    sb = math.sqrt(std_params.beta)
    assert d.upsilon_minus == pytest.approx(-(sb - std_params.alpha) / std_params.theta)
    assert d.upsilon_plus == pytest.approx((sb + std_params.alpha) / std_params.theta)
    assert d.s_plus == -d.upsilon_minus
    assert d.s_minus == -d.upsilon_plus
    assert d.s_plus > 0 > d.s_minus
    # speed gap identity
    gap = d.upsilon_plus - (-d.upsilon_minus)
    assert gap == pytest.approx(2.0 * std_params.alpha / std_params.theta)


def test_derive_constants_deterministic(std_params):
    assert derive_constants(std_params) == derive_constants(std_params)


def test_near_degenerate_denominator_warns():
    p = ModelParams(omega=1.0, alpha=1.0, beta=1.0 + 1e-13, gamma=1.0, theta=0.5)
    with pytest.warns(UserWarning, match="ill-conditioned"):
        validate_params(p)
