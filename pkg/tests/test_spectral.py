import numpy as np
import pytest

from cmvscat import (
    alpha_from_defects,
    change_basis_density,
    converged_defect_pair,
    moment_check,
    sigma_blocks,
    sigma_recursion_check,
    spectral_density,
)
from cmvscat.errors import DomainError
from cmvscat.spectral import (
    PAIR_DIAGONAL,
    PAIR_NEXT,
    _hermitian_min_eig,
    density_moments,
    log_det_diagnostic,
)


def _pair(R, n, m, cfg):
    return converged_defect_pair(
        R, n, m, start=cfg.section_start, cap=cfg.section_cap, tol=cfg.section_tol
    )


def test_sigma_blocks_zero_function(r_zero, small_cfg):
    n = 2
    pair = _pair(r_zero, n, n, small_cfg)
    blocks = sigma_blocks(pair, r_zero, n, n)
    t = r_zero.grid.nodes
    assert np.max(np.abs(blocks.A - 1.0)) < 1e-12
    assert np.max(np.abs(blocks.omega.samples)) < 1e-12
    assert np.max(np.abs(blocks.s21[:, 0, 0] - t**n)) < 1e-12
    assert np.max(np.abs(blocks.s21[:, 1, 1] - t ** (-n))) < 1e-12
    assert np.max(np.abs(blocks.s21[:, 0, 1])) < 1e-12
    eye = np.broadcast_to(np.eye(2), blocks.s11.shape)
    assert np.max(np.abs(blocks.s22 - eye)) < 1e-12
    assert np.max(np.abs(blocks.s11 - eye)) < 1e-12


def test_sigma_blocks_monomial_level_one(r_half, small_cfg):
    pair = _pair(r_half, 1, 0, small_cfg)
    blocks = sigma_blocks(pair, r_half, 1, 0)
    assert np.max(np.abs(blocks.A - 1.0)) < 1e-10
    assert np.max(np.abs(blocks.omega.samples - 0.5)) < 1e-10
    expect = np.empty_like(blocks.s21_prime)
    expect[:, 0, 0] = 1.0
    expect[:, 0, 1] = 0.5
    expect[:, 1, 0] = 0.5
    expect[:, 1, 1] = 1.0
    assert np.max(np.abs(blocks.s21_prime - expect)) < 1e-10


def test_sigma22_determinant(r_smooth, small_cfg):
    pair = _pair(r_smooth, 0, 0, small_cfg)
    blocks = sigma_blocks(pair, r_smooth, 0, 0)
    det = (
        blocks.s22[:, 0, 0] * blocks.s22[:, 1, 1]
        - blocks.s22[:, 0, 1] * blocks.s22[:, 1, 0]
    )
    assert np.max(np.abs(det - (1.0 - np.abs(r_smooth.samples) ** 2))) < 1e-13


def test_sigma12_is_adjoint_of_sigma21(r_smooth, small_cfg):
    pair = _pair(r_smooth, 1, 1, small_cfg)
    blocks = sigma_blocks(pair, r_smooth, 1, 1)
    assert np.max(np.abs(blocks.s12 - np.conj(np.swapaxes(blocks.s21, 1, 2)))) == 0.0


def test_density_zero_function_is_identity(r_zero, small_cfg):
    dens = spectral_density(r_zero, 0, small_cfg)
    eye = np.broadcast_to(np.eye(2), dens.values.shape)
    assert np.max(np.abs(dens.values - eye)) < 1e-10
    moments = density_moments(dens, 3)
    for k, mat in moments.items():
        expect = np.eye(2) if k == 0 else np.zeros((2, 2))
        assert np.max(np.abs(mat - expect)) < 1e-10


def test_density_hermitian_nonnegative(r_smooth, small_cfg):
    dens = spectral_density(r_smooth, 0, small_cfg)
    herm = np.max(np.abs(dens.values - np.conj(np.swapaxes(dens.values, 1, 2))))
    assert herm < 1e-10
    assert float(np.min(_hermitian_min_eig(dens.values))) > -1e-9
    assert dens.pair_tag == PAIR_DIAGONAL


def test_moment_check_monomial(r_half, small_cfg):
    for n in (0, 1):
        dens = spectral_density(r_half, n, small_cfg)
        rep = moment_check(dens, r_half, n, 4, small_cfg)
        assert rep["max_abs_dev"] <= 1e-6
        k0 = np.array(rep["per_k"][0]["gram"])
        assert abs(k0[0, 0] - 1.0) < 1e-10
        assert abs(k0[1, 1] - 1.0) < 1e-10


def test_moment_check_smooth(r_smooth, small_cfg):
    dens = spectral_density(r_smooth, 0, small_cfg)
    rep = moment_check(dens, r_smooth, 0, 4, small_cfg)
    assert rep["max_abs_dev"] <= 1e-6


def test_change_basis_alpha_zero_twists_offdiagonal(r_zero, small_cfg):
    dens = spectral_density(r_zero, 0, small_cfg)
    changed = change_basis_density(dens, 0.0)
    assert changed.pair_tag == PAIR_NEXT
    # identity density stays the identity under the diag(1, t) twist
    eye = np.broadcast_to(np.eye(2), changed.values.shape)
    assert np.max(np.abs(changed.values - eye)) < 1e-10


def test_change_basis_rotates_offdiagonal_entries(r_smooth, small_cfg):
    dens = spectral_density(r_smooth, 0, small_cfg)
    changed = change_basis_density(dens, 0.0)
    t = dens.grid.nodes
    assert np.max(np.abs(changed.values[:, 0, 0] - dens.values[:, 0, 0])) < 1e-12
    assert np.max(np.abs(changed.values[:, 1, 0] - t * dens.values[:, 1, 0])) < 1e-12
    assert np.max(
        np.abs(changed.values[:, 0, 1] - np.conj(t) * dens.values[:, 0, 1])
    ) < 1e-12


def test_change_basis_preserves_trace_integral(r_smooth, small_cfg):
    dens = spectral_density(r_smooth, 1, small_cfg)
    pair = _pair(r_smooth, 1, 1, small_cfg)
    alpha = alpha_from_defects(pair)
    changed = change_basis_density(dens, alpha)
    tr = np.mean(changed.values[:, 0, 0] + changed.values[:, 1, 1]).real
    assert abs(tr - 2.0) < 1e-8


def test_change_basis_moments_against_gram(r_half, small_cfg):
    dens = spectral_density(r_half, 0, small_cfg)
    pair = _pair(r_half, 0, 0, small_cfg)
    changed = change_basis_density(dens, alpha_from_defects(pair))
    rep = moment_check(changed, r_half, 0, 3, small_cfg)
    assert rep["max_abs_dev"] <= 1e-6


def test_change_basis_domain():
    from cmvscat.spectral import SpectralDensity
    from cmvscat import CircleGrid

    g = CircleGrid(8)
    dens = SpectralDensity(g, np.tile(np.eye(2), (8, 1, 1)).astype(complex),
                           PAIR_DIAGONAL, 0)
    with pytest.raises(DomainError):
        change_basis_density(dens, 1.0)


def test_sigma_recursion_zero(r_zero, small_cfg):
    assert sigma_recursion_check(r_zero, 0, small_cfg) < 1e-14


def test_sigma_recursion_monomial(r_half, small_cfg):
    assert sigma_recursion_check(r_half, 0, small_cfg) <= 1e-6
    assert sigma_recursion_check(r_half, 1, small_cfg) <= 1e-6


def test_sigma_recursion_smooth_levels(r_smooth, small_cfg):
    for j in (-1, 0, 1, 2):
        assert sigma_recursion_check(r_smooth, j, small_cfg) <= 1e-6


def test_log_det_diagnostic(r_smooth, small_cfg):
    dens = spectral_density(r_smooth, 0, small_cfg)
    rep = log_det_diagnostic(dens)
    assert rep["min_det"] > 0.0
    assert np.isfinite(rep["log_det_integral"])
