import math

import numpy as np
import pytest

import minlift


def test_prox_examples():
    np.testing.assert_allclose(minlift.prox_iso([3.0, 4.0], 1.0, 0.0), [2.4, 3.2])
    np.testing.assert_allclose(minlift.prox_iso([3.0, 4.0], 1.0, 1.0), [1.2, 1.6])
    np.testing.assert_allclose(minlift.prox_quadratic_shift([2.0], [0.0]), [1.0])
    np.testing.assert_allclose(minlift.prox_scaled_square([3.0], 2.0), [1.0])


def test_moreau_decomposition():
    rng = np.random.default_rng(0)
    f = minlift.make_iso_norm(3, 0.4, 0.2)
    for _ in range(20):
        w = rng.normal(size=6)
        np.testing.assert_allclose(f.prox(w) + f.prox_conjugate(w), w, atol=1e-14)


def test_mt_step_with_zero_operators():
    problem = minlift.SplitProblem([minlift.zero_operator(1)] * 3, 0.3)
    nxt, shadow = minlift.mt_apply(problem, np.array([[1.0], [0.0]]))
    np.testing.assert_allclose(shadow.ravel(), [1.0, 0.0, 1.0])
    np.testing.assert_allclose(nxt.ravel(), [0.7, 0.3])


def test_n2_step_is_relaxed_douglas_rachford():
    rng = np.random.default_rng(1)
    a = minlift.affine_operator(np.array([[1.0, 2.0], [-2.0, 0.5]]), np.array([0.1, -0.3]))
    b = minlift.scaled_identity(2, 0.7)
    gamma = 0.4
    for _ in range(10):
        z = rng.normal(size=2)
        nxt, _ = minlift.mt_apply(minlift.SplitProblem([a, b], gamma), z[None, :])
        expected = (1 - gamma) * z + gamma * minlift.dr_apply(a, b, z)
        np.testing.assert_allclose(nxt.ravel(), expected, atol=1e-12)


def test_mt_limit_matches_linear_solve():
    ops, mats, offsets, zero = minlift.affine_family(n=4, dim=5, case="b", seed=3)
    # Independent check of the returned zero.
    np.testing.assert_allclose(sum(mats) @ zero + sum(offsets), 0.0, atol=1e-10)
    _, shadow, trace = minlift.mt_solve(minlift.SplitProblem(ops, 0.5), tol=1e-14, max_iter=20000)
    assert trace["status"] == "converged"
    np.testing.assert_allclose(shadow[0], zero, atol=1e-8)


def test_chains_and_beta():
    values, prime = minlift.epsilon_chain(3, 1.5)
    assert values == [1.5]
    assert prime == pytest.approx(1 / 3)
    values, prime = minlift.alpha_chain(2, 0.5, 1.0)
    assert values == [pytest.approx(5.0)]
    assert prime == pytest.approx(0.8)
    bound = minlift.theoretical_beta(3, 0.5, 1.0, 2.0, "b")
    assert 0.0 < bound["beta"] < 1.0
    with pytest.raises(ValueError):
        minlift.theoretical_beta(3, 0.5, 3.0, 2.0, "b")


def test_fit_rate_and_snr():
    report = minlift.fit_rate([0.5**k for k in range(30)])
    assert report["fitted_rate"] == pytest.approx(0.5)
    assert minlift.snr(np.array([3.0, 4.0]), np.array([3.0, 4.5])) == pytest.approx(20.0)


def test_gradient_adjoint():
    rng = np.random.default_rng(2)
    u = rng.normal(size=(7, 7))
    y = rng.normal(size=98)
    lhs = minlift.gradient(u) @ y
    rhs = u.ravel() @ minlift.gradient_adjoint(y, 7)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_denoise_runs_and_is_deterministic():
    clean = minlift.shepp_logan_phantom(24)
    noisy = minlift.add_gaussian_noise(clean, 0.05, 1)
    a, trace = minlift.denoise(noisy)
    b, _ = minlift.denoise(noisy)
    assert a.shape == (24, 24)
    np.testing.assert_array_equal(a, b)
    assert a.min() >= 0.0 and a.max() <= 1.0
    assert trace["status"] == "converged"
    assert all(math.isfinite(g) for g in trace["gap"])
    assert math.isfinite(minlift.snr(clean.ravel(), a.ravel()))


def test_pgm_round_trip(tmp_path):
    img = minlift.shepp_logan_phantom(16)
    path = str(tmp_path / "p.pgm")
    minlift.save_pgm(img, path)
    back = minlift.load_pgm(path)
    np.testing.assert_allclose(back, np.round(img * 255) / 255, atol=1e-12)
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P6\n1 1\n255\n\x00")
    with pytest.raises(RuntimeError):
        minlift.load_pgm(str(bad))


def test_verify_suites():
    results = minlift.verify()
    assert [r[0] for r in results] == minlift.suite_names()
    assert all(r[1] for r in results)
    with pytest.raises(ValueError):
        minlift.verify("no-such-suite")
