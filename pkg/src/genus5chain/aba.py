"""Algebraic construction of transfer-matrix eigenvectors at small particle number.

The monodromy matrix is the un-traced ordered product of R-matrices; its
3x3 auxiliary blocks T_ij act on the chain Hilbert space, lower the total
magnetization by the auxiliary spin difference, and act triangularly on
the fully polarized reference state:

    T_11 |0> = a(lam, mu)^L |0>,   T_22 |0> = bbar^L |0>,
    T_33 |0> = f^L |0>,            T_ij |0> = 0  for i > j.

m-particle states follow the two-step recursion

    phi_m(l1..lm) = T_12(l1) phi_{m-1}(l2..lm)
        - T_13(l1) sum_{j>=2} eps d(l1,lj)/f(l1,lj) * a(lj, mu)^L
          * prod_{k>=2, k!=j} a(lk,lj)/bbar(lk,lj) theta_<(lk,lj)
          * phi_{m-2}(.. without lj ..),

with theta_< the ordered phase shift (theta for earlier-listed arguments,
1 otherwise), and are on-shell eigenvectors once the rapidities satisfy
the Bethe equations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bethe import BetheRootSet, curve_points_for_roots, eigenvalue_lambda
from .curve import CurveParams, CurvePoint
from .errors import DegenerateRoots, ZeroVector
from .lattice import build_transfer_matrix, sector_basis
from .rmatrix import phase_shift, r_matrix, weights

_DENSE_SITES = 7  # full 3^L matrices only below this many sites


def _apply_block(i: int, j: int, R4: np.ndarray, L: int, vec: np.ndarray) -> np.ndarray:
    """Apply the auxiliary block T_ij of the monodromy to a state vector."""
    # carrier[b] holds the partial contraction with open auxiliary index b
    carrier = np.zeros((3,) + vec.shape, dtype=complex)
    carrier[j] = vec
    for site in range(L - 1, -1, -1):
        # row-index digits sit above any trailing axes in C order, so the
        # site axis can be exposed without disturbing extra columns
        v = carrier.reshape(3, 3**site, 3, -1)
        carrier = np.einsum("asbt,bxty->axsy", R4, v).reshape((3,) + vec.shape)
    return carrier[i]


@dataclass
class MonodromyElement:
    i: int
    j: int
    lam: CurvePoint
    mu: CurvePoint
    L: int
    matrix: np.ndarray  # (3^L, 3^L) on the full space

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ vec


def monodromy_element(i: int, j: int, lam: CurvePoint, mu: CurvePoint, L: int) -> MonodromyElement:
    """Dense (i, j) auxiliary block of R_01 ... R_0L on the full 3^L space."""
    if not (1 <= i <= 3 and 1 <= j <= 3):
        raise ValueError("auxiliary indices run over 1..3")
    if L > _DENSE_SITES:
        raise ValueError(f"dense monodromy blocks capped at L <= {_DENSE_SITES}")
    R4 = r_matrix(lam, mu).reshape(3, 3, 3, 3)
    dim = 3**L
    mat = _apply_block(i - 1, j - 1, R4, L, np.eye(dim, dtype=complex))
    return MonodromyElement(i, j, lam, mu, L, mat)


def monodromy_apply(i: int, j: int, lam: CurvePoint, mu: CurvePoint, L: int,
                    vec: np.ndarray) -> np.ndarray:
    """Matrix-free action of T_ij; usable beyond the dense-size cap."""
    R4 = r_matrix(lam, mu).reshape(3, 3, 3, 3)
    return _apply_block(i - 1, j - 1, R4, L, vec)


def vacuum_state(L: int) -> np.ndarray:
    v = np.zeros(3**L, dtype=complex)
    v[0] = 1.0
    return v


def vacuum_values(lam: CurvePoint, mu: CurvePoint, L: int) -> tuple[complex, complex, complex]:
    """(a^L, bbar^L, f^L): diagonal monodromy eigenvalues on the vacuum."""
    w = weights(lam, mu)
    return w.a**L, w.b_bar**L, w.f**L


def _check_distinct(points: list[CurvePoint]):
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if (
                abs(points[i].x - points[j].x) + abs(points[i].y - points[j].y) < 1e-10
            ):
                raise DegenerateRoots(f"rapidities {i} and {j} coincide")


def build_phi(points: list[CurvePoint], mu: CurvePoint, L: int) -> np.ndarray:
    """State vector phi_m for the given rapidity points (m = len(points) <= 3)."""
    m = len(points)
    if m > 3:
        raise ValueError("eigenvector recursion implemented for m <= 3")
    _check_distinct(points)
    return _phi_recursive(tuple(points), mu, L)


def _phi_recursive(points: tuple, mu: CurvePoint, L: int) -> np.ndarray:
    m = len(points)
    if m == 0:
        return vacuum_state(L)
    lam1 = points[0]
    rest = points[1:]
    out = monodromy_apply(1, 2, lam1, mu, L, _phi_recursive(rest, mu, L))
    if m < 2:
        return out
    correction = np.zeros_like(out)
    for pos_j in range(len(rest)):  # position j = pos_j + 2 in 1-based labelling
        lam_j = rest[pos_j]
        w1j = weights(lam1, lam_j)
        coeff = lam1.params.eps * w1j.d / w1j.f
        coeff *= weights(lam_j, mu).a ** L
        for pos_k in range(len(rest)):
            if pos_k == pos_j:
                continue
            lam_k = rest[pos_k]
            wkj = weights(lam_k, lam_j)
            coeff *= wkj.a / wkj.b_bar
            if pos_k < pos_j:
                coeff *= phase_shift(lam_k, lam_j)
        remaining = rest[:pos_j] + rest[pos_j + 1:]
        correction += coeff * _phi_recursive(remaining, mu, L)
    return out - monodromy_apply(1, 3, lam1, mu, L, correction)


def state_sector(phi: np.ndarray, L: int, tol: float = 1e-10) -> int:
    """Magnetization sector carrying the state's weight; fails if mixed."""
    amps = np.abs(phi)
    best, best_n = 0.0, None
    for n in range(-L, L + 1):
        basis = sector_basis(L, n)
        idx = [_full_index(s) for s in basis.states]
        w = float(np.linalg.norm(phi[idx]))
        if w > best:
            best, best_n = w, n
    total = float(np.linalg.norm(phi))
    if total < 1e-13:
        raise ZeroVector("state vector vanished")
    if best < (1 - tol) * total:
        raise ValueError("state is not supported on a single sector")
    return best_n


def _full_index(state: tuple[int, ...]) -> int:
    i = 0
    for d in state:
        i = 3 * i + d
    return i


def eigenstate_residual(
    phi: np.ndarray,
    lam_spectator: CurvePoint,
    rs: BetheRootSet,
    mu: CurvePoint | None = None,
) -> float:
    """Relative defect || T(lam) phi - Lambda(lam) phi || / || phi ||."""
    L = rs.L
    if mu is None:
        mu = CurvePoint(lam_spectator.params, 1.0, 0.0)
    norm = np.linalg.norm(phi)
    if norm < 1e-13:
        raise ZeroVector("cannot test a vanishing eigenvector")
    n = state_sector(phi, L)
    basis = sector_basis(L, n)
    idx = [_full_index(s) for s in basis.states]
    T = build_transfer_matrix(lam_spectator, mu, L, n).matrix
    lam_val = eigenvalue_lambda(lam_spectator, rs)
    sub = phi[idx]
    return float(np.linalg.norm(T @ sub - lam_val * sub) / norm)


def exchange_symmetry_check(lam1: CurvePoint, lam2: CurvePoint, mu: CurvePoint, L: int) -> float:
    """Defect of phi_2(l1, l2) = theta(l1, l2) phi_2(l2, l1)."""
    phi_12 = build_phi([lam1, lam2], mu, L)
    phi_21 = build_phi([lam2, lam1], mu, L)
    theta = phase_shift(lam1, lam2)
    denom = np.linalg.norm(phi_12)
    if denom < 1e-13:
        raise ZeroVector("phi_2 vanished")
    return float(np.linalg.norm(phi_12 - theta * phi_21) / denom)


def on_shell_eigenvector(rs: BetheRootSet, mu: CurvePoint | None = None) -> np.ndarray:
    """phi_m built from curve-point representatives of a solved root set."""
    params = CurveParams(rs.U, rs.eps_sign)
    if mu is None:
        mu = CurvePoint(params, 1.0, 0.0)
    return build_phi(curve_points_for_roots(rs), mu, rs.L)
