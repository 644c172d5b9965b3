import numpy as np
import pytest

import mcarma


def test_family_catalogue():
    names = mcarma.family_names()
    assert set(names) == {"MCARMA21_biv", "MCAR1_biv", "CARMA21", "CAR3"}
    info = mcarma.family_info("CARMA21")
    assert info["r"] == 3
    assert info["m"] == 1
    np.testing.assert_allclose(info["default_theta0"], [-2.0, -2.0, -1.0])
    assert np.all(info["lower"] < info["upper"])


def test_simulate_shape_and_determinism():
    y = mcarma.simulate("CAR3", n=64, seed=7)
    assert y.shape == (64, 1)
    assert np.all(np.isfinite(y))
    again = mcarma.simulate("CAR3", n=64, seed=7)
    assert np.array_equal(y, again)
    other = mcarma.simulate("CAR3", n=64, seed=8)
    assert not np.array_equal(y, other)

    biv = mcarma.simulate("MCAR1_biv", n=32, sampler="exact", seed=1)
    assert biv.shape == (32, 2)


def test_estimate_returns_intervals():
    y = mcarma.simulate("MCAR1_biv", n=400, sampler="exact", seed=12)
    fit = mcarma.estimate(y, "MCAR1_biv", delta=1.0, estimator="whittle")
    assert fit["converged"]
    assert fit["theta_hat"].shape == (7,)
    assert fit["intervals"].shape == (7, 2)
    assert np.all(fit["intervals"][:, 0] < fit["theta_hat"])
    assert np.all(fit["theta_hat"] < fit["intervals"][:, 1])
    assert fit["covariance"].shape == (7, 7)
    info = mcarma.family_info("MCAR1_biv")
    assert np.max(np.abs(fit["theta_hat"] - info["default_theta0"])) < 1.5


def test_study_rows_and_csv():
    out = mcarma.study("CARMA21", sizes=[64], replicates=2, seed=5)
    assert len(out["rows"]) == 3
    for i, row in enumerate(out["rows"]):
        assert row["estimator"] == "whittle"
        assert row["n"] == 64
        assert row["param_index"] == i + 1
        assert row["failures"] == 0
        assert np.isfinite(row["mean"])
    header = out["csv"].splitlines()[0]
    assert header == "estimator,n,param_index,theta0,mean,bias,std,failures"

    repeat = mcarma.study("CARMA21", sizes=[64], replicates=2, seed=5,
                          threads=4)
    assert repeat["csv"] == out["csv"]


def test_asymptotics_matrices():
    cov = mcarma.asymptotics("CARMA21")
    sw = cov["sigma_W"]
    assert sw.shape == (3, 3)
    np.testing.assert_allclose(sw, sw.T, atol=1e-12)
    assert np.all(np.linalg.eigvalsh(sw) > 0)
    gauss_identity = cov["sigma_score"] - 2.0 * cov["sigma_hessian"]
    assert np.max(np.abs(gauss_identity)) < 1e-12

    adj = mcarma.asymptotics("CAR3", estimator="adjusted_whittle")
    assert adj["sigma_W_adjusted"].shape == (3, 3)


def test_spectral_density_is_hermitian():
    f = mcarma.spectral_density("MCAR1_biv", omega=0.7)
    f_neg = mcarma.spectral_density("MCAR1_biv", omega=-0.7)
    np.testing.assert_allclose(f, f.conj().T, atol=1e-14)
    np.testing.assert_allclose(f_neg, f.conj(), atol=1e-14)


def test_errors_are_mapped():
    with pytest.raises(mcarma.InvalidInputError):
        mcarma.family_info("nope")
    with pytest.raises(mcarma.Error):
        mcarma.simulate("CAR3", n=64, sampler="bogus")
    with pytest.raises(mcarma.NumericalError):
        mcarma.study("CAR3", sizes=[1200], replicates=2, euler_step=1.0,
                     seed=1)
