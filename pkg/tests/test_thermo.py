import numpy as np
import pytest

from genus5chain import bethe, refdata, thermo
from genus5chain.thermo import (
    U_CRITICAL,
    bulk_energy,
    gap,
    kernel_F,
    solve_rho,
    solve_sigma,
)

SQRT3 = np.sqrt(3.0)


def test_kernel_basics():
    assert kernel_F(-1, 0.7, 0.7) == 0
    top = np.pi / 6 + np.pi / 2
    assert abs(kernel_F(+1, top, top) - 2.0) < 1e-15
    x, y = 0.3, 1.1
    assert abs(kernel_F(+1, x, y) + kernel_F(-1, x, y) - 2 * np.sin(x - np.pi / 6)) < 1e-15


def test_sigma_solution_values():
    for key in ("5", "4.5", "4"):
        grid = solve_sigma(refdata.u_value(key))
        assert abs(bulk_energy(grid) - refdata.TABLE2_ENERGY[key]["bulk"]) < 1e-10
        assert abs(grid.norm() - 1.0) < 1e-10
        assert np.all(grid.values > 0)


def test_sigma_rejects_subcritical_coupling():
    with pytest.raises(ValueError):
        solve_sigma(1.0)


def test_kernel_singular_when_node_hits_singularity():
    from genus5chain.errors import KernelSingular

    # placing k0 exactly one grid step below 2*pi/3 forces a node onto the
    # singular point of the critical-coupling kernel
    with pytest.raises(KernelSingular):
        solve_sigma(U_CRITICAL, N=256, k0=2 * np.pi / 3 - 2 * np.pi / 256)


def test_sigma_grid_refinement_stable():
    e1 = bulk_energy(solve_sigma(5.0, N=2048))
    e2 = bulk_energy(solve_sigma(5.0, N=4096))
    assert abs(e1 - e2) < 1e-11


def test_sigma_k0_invariance():
    for k0 in (-np.pi, 0.0, 0.37):
        grid = solve_sigma(5.0, k0=k0)
        assert abs(bulk_energy(grid) + 0.200733056598) < 1e-10
        assert abs(grid.norm() - 1.0) < 1e-10


def test_sigma_at_critical_coupling():
    grid = solve_sigma(U_CRITICAL, N=8192)
    assert abs(bulk_energy(grid) - refdata.TABLE2_ENERGY["2sqrt3"]["bulk"]) < 1e-7


def test_bulk_energy_of_uniform_density():
    grid = solve_sigma(5.0, N=512)
    uniform = thermo.DensityGrid(
        grid.k0, grid.N, grid.U, grid.nodes, grid.weights, np.full(grid.N, 1 / (2 * np.pi)),
        "sigma",
    )
    assert abs(bulk_energy(uniform)) < 1e-12


def test_rho_collapses():
    for U in (4.0, 5.0, 10.0):
        grid, radius = solve_rho(U)
        assert np.max(np.abs(grid.values)) < 1e-8
        assert radius < 1e-8


def test_rho_zero_is_fixed_point():
    grid, _ = solve_rho(6.0)
    # applying the homogeneous step to zero returns zero exactly
    assert np.max(np.abs(grid.values)) < 1e-12


def test_gap_values():
    assert abs(gap(5.0).value - refdata.TABLE3_GAP["5"]["conjecture"]) < 1e-10
    assert abs(gap(4.0).value - refdata.TABLE3_GAP["4"]["conjecture"]) < 1e-10
    assert gap(U_CRITICAL).value == 0.0


def test_gap_reports_spectral_radius():
    est = gap(5.0)
    assert est.spectral_radius < 1e-8
    assert est.rho_sup < 1e-8


def test_finite_size_energies_approach_bulk():
    for key in ("5", "4.5", "4"):
        U = refdata.u_value(key)
        rs = bethe.solve_log_form(1024, 0, U)
        e_bulk = bulk_energy(solve_sigma(U))
        assert abs(bethe.energy(rs) / 1024 - e_bulk) < 1e-9


def test_finite_size_gap_approaches_conjecture():
    delta = bethe.finite_size_gap(128, 5.0)
    assert abs(delta - (5.0 / 2 - SQRT3)) < 1e-9
