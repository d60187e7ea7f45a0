"""Fiber curvature forms, Morse-index bookkeeping, and the fiber sampler."""

import math

import numpy as np
import pytest

from helpers import random_hermitian_tensor, random_unitary
from jetcalc.curvature import MetricParams, validate_tensor
from jetcalc.errors import InputDataError, NumericDomainError
from jetcalc.morse import (DEGENERATE_TOL, draw_eta, fiber_samples, gamma_gg,
                           gamma_inv, hermitian_form, inertia, morse_index,
                           top_power)


def _identity_tensor(n, r, sign=1.0):
    c = np.zeros((n, n, r, r), dtype=np.complex128)
    for i in range(n):
        for a in range(r):
            c[i, i, a, a] = sign
    return validate_tensor(c)


# ---------------------------------------------------------------------------
# Hermitian forms and index counting
# ---------------------------------------------------------------------------

def test_hermitian_form_symmetrizes_and_rejects():
    f = hermitian_form([[1.0, 1e-12j], [0.0, 2.0]])
    assert f.M[0, 1] == np.conj(f.M[1, 0])
    with pytest.raises(InputDataError):
        hermitian_form([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(InputDataError):
        hermitian_form(np.zeros((2, 3)))


def test_index_frozen_values():
    assert morse_index(hermitian_form(np.eye(3))) == 0
    assert inertia(hermitian_form(np.eye(3))) == (0, 0, 3)
    assert morse_index(hermitian_form(-np.eye(3))) == 3
    assert morse_index(hermitian_form(np.diag([1.0, -2.0]))) == 1
    assert inertia(hermitian_form(np.diag([1.0, -2.0]))) == (1, 0, 1)


def test_degenerate_band():
    f = hermitian_form(np.diag([DEGENERATE_TOL / 2, 1.0]))
    assert inertia(f) == (0, 1, 1)
    assert morse_index(f) == 0
    g = hermitian_form(np.diag([-DEGENERATE_TOL / 2, -1.0]))
    assert inertia(g) == (1, 1, 0)


def test_top_power_frozen_values():
    assert top_power(hermitian_form(np.eye(2))) == pytest.approx(1.0)
    assert top_power(hermitian_form(np.diag([2.0, -1.0]))) == pytest.approx(-2.0)


def test_top_power_is_eigenvalue_product():
    rng = np.random.default_rng(5)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        raw = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        f = hermitian_form((raw + raw.conj().T) / 2)
        w = np.linalg.eigvalsh(f.M)
        assert top_power(f) == pytest.approx(float(np.prod(w)), rel=1e-9,
                                             abs=1e-12)


def test_inertia_against_planted_spectrum():
    # independent route: build M = U diag(w) U^H from a KNOWN spectrum and
    # compare the counts; every 5th trial plants an exact zero eigenvalue
    rng = np.random.default_rng(6)
    for trial in range(10000):
        n = int(rng.integers(1, 7))
        w = rng.uniform(-2.0, 2.0, size=n)
        w[np.abs(w) < 1e-6] = 1e-6  # stay clear of the tolerance band
        planted_zero = trial % 5 == 0
        if planted_zero:
            w[0] = 0.0
        U = random_unitary(rng, n)
        f = hermitian_form(U @ np.diag(w) @ U.conj().T)
        neg = int(np.sum(w < -DEGENERATE_TOL))
        zer = int(planted_zero)
        assert inertia(f) == (neg, zer, n - neg - zer), (trial, w)
        assert morse_index(f) == neg


# ---------------------------------------------------------------------------
# curvature forms
# ---------------------------------------------------------------------------

def test_gamma_gg_first_order_matches_direct_contraction():
    rng = np.random.default_rng(8)
    t = validate_tensor(random_hermitian_tensor(rng, 2, 3, 0.7))
    eta = rng.standard_normal((1, 3)) + 1j * rng.standard_normal((1, 3))
    f = gamma_gg(t, eta, MetricParams.default_for(1))
    u = eta[0]
    expected = np.einsum("ijab,a,b->ij", t.c, u, np.conj(u)) / np.vdot(u, u).real
    expected = (expected + expected.conj().T) / 2
    assert np.allclose(f.M, expected, atol=1e-13)


def test_gamma_gg_identity_equal_weights():
    # unit vectors at both levels weigh 1/2 each: M = (1/2 + 1/4) Id
    t = _identity_tensor(3, 2)
    eta = np.array([[1.0, 0.0], [0.0, 1.0]], dtype=np.complex128)
    f = gamma_gg(t, eta, MetricParams.default_for(2))
    assert np.allclose(f.M, 0.75 * np.eye(3), atol=1e-14)


def test_gamma_gg_zero_curvature_and_zero_level():
    t = validate_tensor(np.zeros((2, 2, 2, 2)))
    eta = np.array([[1.0, 2.0]], dtype=np.complex128)
    assert not np.any(gamma_gg(t, eta, MetricParams.default_for(1)).M)
    with pytest.raises(NumericDomainError):
        gamma_gg(t, np.zeros((1, 2)), MetricParams.default_for(1))


def test_gamma_inv_zero_curvature():
    t = validate_tensor(np.zeros((1, 1, 2, 2)))
    eta = np.array([[1.0, 1.0]], dtype=np.complex128)
    assert not np.any(gamma_inv(t, eta, MetricParams.default_for(1)).M)


def test_gamma_inv_rank_one_doubles_the_curvature():
    rng = np.random.default_rng(9)
    t = validate_tensor(random_hermitian_tensor(rng, 2, 1, 0.5))
    eta = np.array([[0.3 + 0.4j]])
    f = gamma_inv(t, eta, MetricParams.default_for(1))
    assert np.allclose(f.M, 2.0 * t.c[:, :, 0, 0], atol=1e-13)


def test_gamma_inv_unitary_frame_covariance():
    rng = np.random.default_rng(10)
    t = validate_tensor(random_hermitian_tensor(rng, 2, 3, 0.5))
    eta = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    params = MetricParams.default_for(2)
    base = gamma_inv(t, eta, params)
    for _ in range(5):
        U = random_unitary(rng, 3)
        rotated_c = validate_tensor(
            np.einsum("ijlm,la,mb->ijab", t.c, U, np.conj(U)))
        rotated_eta = eta @ np.conj(U)
        f = gamma_inv(rotated_c, rotated_eta, params)
        assert np.allclose(f.M, base.M, atol=1e-12)


def test_gamma_inv_params_are_inert():
    rng = np.random.default_rng(12)
    t = validate_tensor(random_hermitian_tensor(rng, 1, 2, 0.5))
    eta = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    a = gamma_inv(t, eta, MetricParams(p=4, eps=(1.0, 0.5)))
    b = gamma_inv(t, eta, MetricParams(p=8, eps=(0.2, 0.04)))
    assert np.array_equal(a.M, b.M)


def test_gamma_accepts_fiber_samples():
    rng = np.random.default_rng(13)
    t = validate_tensor(random_hermitian_tensor(rng, 1, 2, 0.5))
    sample = fiber_samples(17, 3, 2, 2)[1]
    assert sample.provenance == (17, 1)
    params = MetricParams.default_for(2)
    assert np.array_equal(gamma_gg(t, sample, params).M,
                          gamma_gg(t, sample.eta, params).M)


# ---------------------------------------------------------------------------
# the sampler
# ---------------------------------------------------------------------------

def test_draw_eta_shape_and_determinism():
    a = draw_eta(123, 50, 3, 2)
    b = draw_eta(123, 50, 3, 2)
    assert a.shape == (50, 3, 2) and a.dtype == np.complex128
    assert np.array_equal(a, b)
    assert not np.array_equal(a, draw_eta(124, 50, 3, 2))
    ns2 = (a.real ** 2 + a.imag ** 2).sum(axis=2)
    assert ns2.min() > 0.0


def test_draw_eta_rejects_bad_requests():
    with pytest.raises(ValueError):
        draw_eta(1, 0, 1, 1)
    with pytest.raises(ValueError):
        draw_eta(1, 1, 0, 1)


def test_draw_eta_is_standard_complex_gaussian():
    # per complex component: E|eta|^2 = 1, E[eta] = 0
    eta = draw_eta(77, 20000, 1, 2).reshape(-1)
    ns2 = eta.real ** 2 + eta.imag ** 2
    stderr = float(np.std(ns2, ddof=1) / math.sqrt(ns2.size))
    assert abs(float(np.mean(ns2)) - 1.0) <= 3.0 * stderr
    mean_stderr = 1.0 / math.sqrt(2.0 * ns2.size)
    assert abs(float(np.mean(eta.real))) <= 4.0 * mean_stderr
    assert abs(float(np.mean(eta.imag))) <= 4.0 * mean_stderr
