import numpy as np
import pytest

from genus5chain import bethe, lattice, refdata
from genus5chain.bethe import (
    BetheRootSet,
    U_CRITICAL,
    bethe_defect,
    bethe_defect_z,
    classify_roots,
    energy,
    eigenvalue_lambda,
    finite_size_gap,
    ground_state_quantum_numbers,
    solve_complex,
    solve_log_form,
    string_bound_check,
    track_state,
)
from genus5chain.curve import CurveParams, CurvePoint, sample_points
from genus5chain.errors import NoConvergence, NonRealDrift


def test_quantum_number_rule():
    assert ground_state_quantum_numbers(4, 0) == [1.5, 0.5, -0.5, -1.5]
    assert ground_state_quantum_numbers(5, 1) == [1.5, 0.5, -0.5, -1.5]
    assert ground_state_quantum_numbers(8, 1) == [3, 2, 1, 0, -1, -2, -3]


def test_defect_trivial_cases():
    # single root at a free momentum: the product side is empty
    for m in range(4):
        rs = BetheRootSet(4, 3, 2.5, np.array([2 * np.pi * m / 4], dtype=complex))
        assert np.max(np.abs(bethe_defect(rs))) < 1e-15
    rs = BetheRootSet(4, 2, 2.5, np.array([0.3, 1.1], dtype=complex))
    assert np.max(np.abs(bethe_defect(rs))) > 1e-3


def test_log_form_ground_state_energies():
    cases = [
        ("5", 8), ("5", 12), ("4.5", 16), ("4", 12), ("2sqrt3", 12), ("2sqrt3", 24),
    ]
    for key, L in cases:
        rs = solve_log_form(L, 0, refdata.u_value(key))
        assert rs.residual < 1e-12
        assert abs(energy(rs) / L - refdata.TABLE2_ENERGY[key][L]) < 1e-11


def test_log_form_large_size():
    rs = solve_log_form(1024, 0, 4.0)
    assert abs(energy(rs) / 1024 - refdata.TABLE2_ENERGY["4"][1024]) < 1e-11


def test_log_form_gap_values():
    assert abs(finite_size_gap(8, 5.0) - refdata.TABLE3_GAP["5"][8]) < 1e-10
    assert abs(finite_size_gap(24, 4.0) - refdata.TABLE3_GAP["4"][24]) < 1e-10


def test_log_form_below_range_raises():
    with pytest.raises((NonRealDrift, NoConvergence)):
        solve_log_form(14, 0, 2.8)


def test_energy_trivial_cases():
    assert energy(BetheRootSet(6, 6, 3.0, np.zeros(0, dtype=complex))) == 9.0
    one = BetheRootSet(6, 5, 3.0, np.zeros(1, dtype=complex))
    assert abs(energy(one) - (-np.sqrt(3) + 5 * 1.5)) < 1e-14


def test_defect_pole_hit():
    from genus5chain.errors import PoleHit

    # place the second momentum exactly on the scattering pole of the first
    U = 1.0
    k1 = 0.3
    e3 = np.exp(1j * np.pi / 3)
    s2 = (np.sin(k1 - np.pi / 6) * e3 - 0.5j * U) * e3
    k2 = np.pi / 6 + np.arcsin(complex(s2))
    rs = BetheRootSet(4, 2, U, np.array([k1, k2], dtype=complex))
    with pytest.raises(PoleHit):
        bethe_defect(rs)


def test_eigenvalue_lambda_pole_hit(rng):
    from genus5chain.curve import points_with_Z
    from genus5chain.errors import PoleHit

    par = CurveParams(5.0)
    k = 0.7
    lam = points_with_Z(np.exp(1j * k), par)[0]  # spectator Z coincides with a root
    rs = BetheRootSet(4, 3, 5.0, np.array([k], dtype=complex))
    with pytest.raises(PoleHit):
        eigenvalue_lambda(lam, rs)


def test_momentum_z_form_consistency():
    rs = solve_log_form(8, 0, 5.0)
    fk = bethe_defect(rs)
    fz = bethe_defect_z(rs)
    assert np.max(np.abs(fk - fz)) < 1e-12


def test_conjugation_closure():
    rs = track_state(4, 0, 5.0, 1.0)
    conj = BetheRootSet(4, 0, 1.0, np.conj(rs.roots))
    assert np.max(np.abs(bethe_defect(conj))) < 1e-10


def test_translation_sum_rule():
    for L, n in ((8, 0), (9, 1), (6, 2)):
        rs = solve_log_form(L, n, 4.5)
        total = np.sum(rs.roots.real)
        expected = 2 * np.pi * sum(rs.Q) / L
        assert abs(total - expected) < 1e-10


def test_lowest_per_sector_matches_ed():
    for L in (4, 5):
        for key in ("5", "2sqrt3"):
            U = refdata.u_value(key)
            for n in range(0, L + 1):
                rs = solve_log_form(L, n, U)
                rep = lattice.diagonalize(lattice.build_hamiltonian(U, L, n), mode="full")
                assert abs(energy(rs) - rep.lowest_real) < 1e-9


def test_complex_solver_polishes_log_solution():
    rs = solve_log_form(6, 0, 4.0)
    rs2 = solve_complex(6, 0, 4.0, rs.roots + 1e-6)
    assert rs2.residual < 1e-10
    assert np.max(np.abs(np.sort(rs2.roots.real) - np.sort(rs.roots.real))) < 1e-5


def test_continuation_to_free_coupling_matches_ed():
    rs = track_state(4, 0, 5.0, 0.0)
    rep = lattice.diagonalize(lattice.build_hamiltonian(0.0, 4, 0), mode="full")
    assert abs(energy(rs) - rep.lowest_real) < 1e-9
    cls = classify_roots(rs)
    assert cls.n_strings >= 1
    assert len(cls.reals) == 2
    assert not cls.unpaired


def test_continuation_to_negative_coupling_matches_ed():
    # the tracked ground state at U = -1 carries one two-string plus two
    # real roots; purely two-string patterns exist only as excited states
    rs = track_state(4, 0, 5.0, -1.0)
    rep = lattice.diagonalize(lattice.build_hamiltonian(-1.0, 4, 0), mode="full")
    assert abs(energy(rs) - rep.lowest_real) < 1e-9
    cls = classify_roots(rs)
    assert cls.n_strings >= 1


def test_double_string_solution_exists_at_negative_coupling():
    # excited-state pattern with two two-strings of distinct imaginary
    # parts (seed recorded from a deterministic multi-start survey)
    seed = np.array(
        [-2.19342 + 0.37193j, -2.19342 - 0.37193j, 0.62263 + 0.71749j, 0.62263 - 0.71749j]
    )
    rs = solve_complex(4, 0, -1.0, seed)
    assert rs.residual < 1e-10
    cls = classify_roots(rs)
    assert cls.n_strings == 2 and not cls.reals
    ims = sorted(abs(s[0].imag) for s in cls.strings)
    assert ims[1] - ims[0] > 0.1  # distinct imaginary parts


def test_string_formation_l14_near_critical():
    rs = track_state(14, 0, U_CRITICAL, U_CRITICAL - 0.2, du=0.02)
    assert np.max(np.abs(rs.roots.imag)) > 1e-3
    cls = classify_roots(rs)
    assert cls.n_strings == 1
    # the two fused momenta are the largest by real part
    fused_re = cls.strings[0][0].real
    assert fused_re >= max(r.real for r in cls.reals) - 0.5


def test_classify_trivial_patterns():
    real_set = BetheRootSet(6, 2, 5.0, np.array([0.1, 0.5, -0.3, 1.2], dtype=complex))
    cls = classify_roots(real_set)
    assert len(cls.reals) == 4 and not cls.strings and not cls.unpaired
    pair = BetheRootSet(4, 2, 1.0, np.array([0.4 + 0.2j, 0.4 - 0.2j]))
    cls2 = classify_roots(pair)
    assert cls2.n_strings == 1 and not cls2.reals


def test_string_bound():
    assert string_bound_check(3.0)
    assert not string_bound_check(4.0)
    assert string_bound_check(U_CRITICAL)


def test_eigenvalue_formula_vacuum(rng):
    par = CurveParams(5.0)
    (lam,) = sample_points(par, 1, rng)
    from genus5chain.curve import zw_map

    rs = BetheRootSet(4, 4, 5.0, np.zeros(0, dtype=complex))
    val = eigenvalue_lambda(lam, rs)
    zp = zw_map(lam)
    expected = lam.x**4 * (1 + zp.Z**-4 + (zp.W / zp.Z) ** 4)
    assert abs(val - expected) < 1e-10 * max(1.0, abs(expected))


def test_eigenvalue_formula_against_transfer_matrix(rng):
    par = CurveParams(5.0)
    p0 = CurvePoint(par, 1.0, 0.0)
    (lam,) = sample_points(par, 1, rng)
    L = 4
    for n in (3, 2):
        rs = solve_log_form(L, n, 5.0)
        val = eigenvalue_lambda(lam, rs)
        T = lattice.build_transfer_matrix(lam, p0, L, n).matrix.toarray()
        ev = np.linalg.eigvals(T)
        assert np.min(np.abs(ev - val)) < 1e-8 * max(1.0, abs(val))


def test_serialization_roundtrip():
    rs = solve_log_form(6, 1, 5.0)
    d = rs.to_json_dict()
    back = BetheRootSet.from_json_dict(d)
    assert back.L == rs.L and back.n == rs.n and back.U == rs.U
    assert np.allclose(back.roots, rs.roots)
    assert back.Q == [float(q) for q in rs.Q]
