"""Coupled wave-system blocks: eigenpairs, semistability, classification."""

import math

import numpy as np
import pytest

from fdmlab import (
    SpectrumClass,
    WaveDiscretization,
    build_dx,
    build_dxx,
    classify_spectrum,
    grid_eigenpairs,
    mirror,
    sample_grid,
    sample_wave_trajectory,
    wave_bound_check,
    wave_eigs,
    wave_semistable_check,
    wave_symbols,
)
from oracles import assert_multiset_close, dense_wave_matrix

W1 = WaveDiscretization(build_dx(1, 0), build_dx(0, 1), build_dxx(1))


def make_wave(lm, lp, q):
    return WaveDiscretization(build_dx(*lm), build_dx(*lp), build_dxx(q))


def test_discretization_validation():
    with pytest.raises(ValueError):
        WaveDiscretization(build_dx(1, 2), build_dx(0, 1), build_dxx(1))  # minus not upwind
    with pytest.raises(ValueError):
        WaveDiscretization(build_dx(1, 0), build_dx(2, 1), build_dxx(1))  # plus not downwind
    with pytest.raises(ValueError):
        WaveDiscretization(build_dx(1, 0), build_dx(0, 1), build_dx(1, 1))  # not a dxx


def test_symmetry_detection():
    assert W1.symmetric
    assert make_wave((3, 1), (1, 3), 2).symmetric
    assert not make_wave((3, 1), (1, 2), 2).symmetric


def test_symbols_pinned_at_pi():
    am, ap, b = wave_symbols(W1, math.pi)
    assert abs(am - 2.0) < 1e-14
    assert abs(ap + 2.0) < 1e-14
    assert abs(b + 4.0) < 1e-14
    am0, ap0, b0 = wave_symbols(W1, 0.0)
    assert am0 == 0.0 and ap0 == 0.0 and b0 == 0.0


def test_eigenpair_pinned_at_pi():
    # decoupled at pi: s = 0, so the pair is (R b - d)/2 +- |R b|/2
    pair = wave_eigs(W1, 1.0, math.pi)
    assert_multiset_close([pair.lambda1, pair.lambda2], [-2.0, -6.0], tol=1e-13)
    assert not pair.jordan


def test_jordan_point_on_the_matched_angle():
    # tan(theta/2) = 1/R collapses the discriminant; R = 1, theta = pi/2
    pair = wave_eigs(W1, 1.0, math.pi / 2)
    assert pair.jordan
    assert abs(pair.lambda1 - (-2.0)) < 1e-7
    assert abs(pair.lambda2 - (-2.0)) < 1e-7
    # the consistency point is a scalar zero block, never flagged
    assert not wave_eigs(W1, 1.0, 0.0).jordan
    assert wave_eigs(W1, 1.0, 0.0).lambda1 == 0.0


def test_eigs_match_explicit_blocks():
    w = make_wave((3, 1), (1, 2), 2)
    r = 0.7
    for theta in np.linspace(-3.0, 3.0, 25):
        am, ap, b = wave_symbols(w, theta)
        d, s = am - ap, am + ap
        block = np.array([[r * b - d / 2, -s / 2], [-s / 2, -d / 2]])
        pair = wave_eigs(w, r, float(theta))
        assert_multiset_close(
            [pair.lambda1, pair.lambda2], np.linalg.eigvals(block), tol=1e-12
        )


@pytest.mark.parametrize(
    "lm,lp,q,nu,n",
    [
        ((1, 0), (0, 1), 1, 0.3, 12),
        ((3, 1), (1, 3), 2, 0.05, 10),
        ((3, 1), (1, 2), 2, 0.0, 9),
        ((2, 1), (1, 2), 1, 1.0, 6),
    ],
)
def test_grid_pairs_match_dense_oracle(lm, lp, q, nu, n):
    w = make_wave(lm, lp, q)
    pairs = grid_eigenpairs(w, nu * n, n)
    lib = [p.lambda1 for p in pairs] + [p.lambda2 for p in pairs]
    dense = np.linalg.eigvals(dense_wave_matrix(w, n, nu)) / n
    assert_multiset_close(lib, dense, tol=1e-10)


def test_grid_pairs_edges():
    pairs = grid_eigenpairs(W1, 1.0, 2)
    assert len(pairs) == 2
    assert pairs[-1].theta == 0.0
    assert pairs[-1].lambda1 == 0.0 and pairs[-1].lambda2 == 0.0
    with pytest.raises(ValueError):
        grid_eigenpairs(W1, 1.0, 1)
    with pytest.raises(ValueError):
        wave_eigs(W1, -0.5, 1.0)


SEMISTABLE_CONFIGS = [
    ((3, 1), (1, 3), 2),
    ((21, 20), (20, 21), 20),
    ((3, 1), (1, 2), 2),
    ((21, 20), (10, 11), 20),
]


@pytest.mark.parametrize("lm,lp,q", SEMISTABLE_CONFIGS)
@pytest.mark.parametrize("r", [0.0, 0.1, 2.0])
def test_semistability(lm, lp, q, r):
    assert wave_semistable_check(make_wave(lm, lp, q), r, n_samples=1024)


def test_semistable_sign_quantities_by_hand():
    # cross-check the rearranged D2 identity on one angle
    w = make_wave((3, 1), (1, 2), 2)
    th = 1.3
    am, ap, _ = wave_symbols(w, th)
    e1, f1 = am.real, ap.real
    s = am + ap
    d2_direct = abs(s) ** 2 - 8 * e1 * f1
    d2_parts = (e1 + f1) ** 2 + (am.imag + ap.imag) ** 2 - 8 * e1 * f1
    assert d2_direct == pytest.approx(d2_parts, rel=1e-13)
    assert e1 > 0 > f1


def test_semistability_rejects_negative_r():
    with pytest.raises(ValueError):
        wave_semistable_check(W1, -1.0)


def test_classification_with_strong_damping():
    for n in (16, 64):
        assert classify_spectrum(W1, 10.0, n) is SpectrumClass.ALL_REAL
    assert classify_spectrum(W1, 0.1, 1024) is SpectrumClass.HAS_COMPLEX
    with pytest.raises(ValueError):
        classify_spectrum(make_wave((3, 1), (1, 2), 2), 1.0, 16)
    with pytest.raises(ValueError):
        classify_spectrum(W1, -1.0, 16)


def test_classification_crossover_matches_smallest_angle_rule():
    # first-order symmetric pair: complex modes exist exactly when the
    # smallest grid angle satisfies tan(theta/2) < 1/R
    for nu, n in [(10.0, 256), (0.1, 1024), (0.5, 64), (2.0, 32)]:
        r = nu * n
        th1 = 2 * math.pi / n
        want = (
            SpectrumClass.ALL_REAL
            if math.tan(th1 / 2) >= 1.0 / r
            else SpectrumClass.HAS_COMPLEX
        )
        assert classify_spectrum(W1, nu, n) is want


def test_bound_check_first_order_pair():
    L, ok = wave_bound_check(W1, 2.0)
    assert L == pytest.approx(2.0 / math.pi**2, rel=1e-12)
    assert ok
    L, ok = wave_bound_check(W1, 0.1)
    assert ok
    with pytest.raises(ValueError):
        wave_bound_check(make_wave((3, 1), (1, 2), 2), 1.0)


def test_spectrum_height_shrinks_with_damping():
    w = make_wave((3, 1), (1, 3), 2)

    def height(r):
        pairs = sample_wave_trajectory(w, r, 512)
        return max(max(abs(p.lambda1.imag), abs(p.lambda2.imag)) for p in pairs)

    assert height(2.0) < 0.5 * height(0.1)


def test_stable_parts_can_sum_unstable():
    # why the analysis works on the coupled block: two Hurwitz matrices
    # whose sum has a positive eigenvalue
    b1 = np.array([[-1.0, 3.0], [0.0, -1.0]])
    b2 = np.array([[-1.0, 0.0], [3.0, -1.0]])
    assert max(np.linalg.eigvals(b1).real) < 0
    assert max(np.linalg.eigvals(b2).real) < 0
    assert max(np.linalg.eigvals(b1 + b2).real) > 0


def test_trajectory_sampling_shape():
    pairs = sample_wave_trajectory(W1, 0.5, 64)
    assert len(pairs) == 64
    assert pairs[0].theta == -math.pi
    zero = [p for p in pairs if p.theta == 0.0]
    assert len(zero) == 1 and zero[0].lambda1 == 0.0


def test_mirror_pair_agrees_with_sample_grid_symmetry():
    # symmetric pair: eigenvalue set at -theta is the conjugate of theta's
    w = make_wave((3, 1), (1, 3), 2)
    for theta in (0.4, 1.1, 2.9):
        a = wave_eigs(w, 0.8, theta)
        b = wave_eigs(w, 0.8, -theta)
        assert_multiset_close(
            [a.lambda1, a.lambda2],
            [b.lambda1.conjugate(), b.lambda2.conjugate()],
            tol=1e-12,
        )
