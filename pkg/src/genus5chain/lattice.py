"""Spin-1 chain and transfer matrix on L periodic sites, per magnetization sector.

The chain Hamiltonian (eps = exp(+i pi/3) branch) is

    H(U) = sum_j { -exp(+i pi/6)/2 S+_j S-_{j+1} - exp(-i pi/6)/2 S-_j S+_{j+1}
                   + i/2 (Sz S+)_j S-_{j+1} - i/2 S-_j (Sz S+)_{j+1}
                   + U/2 (Sz_j)^2 },

with spin-1 ladder operators and (Sz S+) the matrix product applying S+
first.  The operator ordering and chain orientation are pinned by two
facts checked in the tests: H commutes with the transfer matrix built
from the same R-matrix, and on the constructed eigenvectors it takes the
value -sum 2 cos(k_j + pi/6) + n U/2 at the same momenta that enter the
transfer-matrix eigenvalue.  (The site-reflected variant has an identical
spectrum but fails both checks.)

H is not Hermitian: complex eigenvalues appear in conjugate pairs, while
low-lying levels stay real, and above a size-dependent coupling the whole
spectrum is real.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.linalg import eig

from .curve import CurvePoint
from .errors import BracketInvalid, ConvergenceFailure
from .rmatrix import r_matrix

SP = np.sqrt(2.0) * np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)
SM = np.sqrt(2.0) * np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=complex)
SZ = np.diag([1.0, 0.0, -1.0]).astype(complex)
_ID3 = np.eye(3, dtype=complex)

# (Sz S+): apply S+ first, then Sz; raises only on the 0 -> +1 rung
_SZSP = SZ @ SP

_E_PLUS = np.exp(1j * np.pi / 6)
_E_MINUS = np.exp(-1j * np.pi / 6)

DENSE_LIMIT = 20000
_DENSE_EIG_CUTOFF = 900  # dims above this use ARPACK in "lowest" mode


def bond_hamiltonian(U: float) -> np.ndarray:
    """Two-site operator; the on-site U-term is attached to the right site."""
    return (
        (-_E_PLUS / 2) * np.kron(SP, SM)
        + (-_E_MINUS / 2) * np.kron(SM, SP)
        + (1j / 2) * np.kron(_SZSP, SM)
        + (-1j / 2) * np.kron(SM, _SZSP)
        + (U / 2) * np.kron(_ID3, SZ @ SZ)
    )


@dataclass(frozen=True)
class SectorBasis:
    """Ordered basis of {+1, 0, -1}^L configurations with total spin n.

    Site labels 0, 1, 2 carry spins +1, 0, -1; states are listed in
    lexicographic order of their label strings.
    """

    L: int
    n: int
    states: tuple[tuple[int, ...], ...]
    index: dict = field(repr=False, hash=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.states)


@lru_cache(maxsize=None)
def sector_basis(L: int, n: int) -> SectorBasis:
    if not (-L <= n <= L):
        raise ValueError(f"sector n={n} out of range for L={L}")
    states = tuple(s for s in product(range(3), repeat=L) if sum(1 - v for v in s) == n)
    return SectorBasis(L, n, states, {s: i for i, s in enumerate(states)})


def sector_dimension(L: int, n: int) -> int:
    return sector_basis(L, n).dim


@dataclass(frozen=True)
class LatticeOperator:
    sector: SectorBasis
    matrix: sp.csr_matrix

    @property
    def dim(self) -> int:
        return self.sector.dim


def _apply_bond_terms(basis: SectorBasis, bond: np.ndarray) -> sp.csr_matrix:
    L = basis.L
    rows, cols, vals = [], [], []
    nz = {int(c): np.nonzero(np.abs(bond[:, c]) > 1e-15)[0] for c in range(9)}
    for i, s in enumerate(basis.states):
        for j in range(L):
            jp = (j + 1) % L
            col = 3 * s[j] + s[jp]
            for r in nz[col]:
                t = list(s)
                t[j], t[jp] = divmod(int(r), 3)
                rows.append(basis.index[tuple(t)])
                cols.append(i)
                vals.append(bond[r, col])
    return sp.csr_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim), dtype=complex)


def build_hamiltonian(U: float, L: int, n: int) -> LatticeOperator:
    """H(U) restricted to the magnetization-n sector, periodic boundaries."""
    if L < 2:
        raise ValueError("need at least two sites")
    basis = sector_basis(L, n)
    return LatticeOperator(basis, _apply_bond_terms(basis, bond_hamiltonian(U)))


def shift_operator(L: int, n: int) -> sp.csr_matrix:
    """Translation by one site on the sector basis."""
    basis = sector_basis(L, n)
    rows = [basis.index[s[1:] + (s[0],)] for s in basis.states]
    return sp.csr_matrix(
        (np.ones(basis.dim), (rows, np.arange(basis.dim))), shape=(basis.dim, basis.dim)
    )


def build_transfer_matrix(lam: CurvePoint, mu: CurvePoint, L: int, n: int) -> LatticeOperator:
    """Auxiliary-space trace of R_{01} ... R_{0L}, restricted to a sector.

    Matrix elements are traces of length-L products of the 3x3 auxiliary
    blocks R[:, t, :, s]; pairs are processed in chunks so memory stays
    bounded at larger sector dimensions.
    """
    if L < 1:
        raise ValueError("need at least one site")
    basis = sector_basis(L, n)
    R = r_matrix(lam, mu).reshape(3, 3, 3, 3)  # [aux_out, site_out, aux_in, site_in]
    D = basis.dim
    S = np.array(basis.states)  # (D, L)
    T = np.zeros((D, D), dtype=complex)
    chunk = max(1, 200000 // max(D, 1))
    for i0 in range(0, D, chunk):
        i1 = min(i0 + chunk, D)
        B = i1 - i0
        # G[b, p, a, a'] accumulates the aux product for target-row block b, source p
        G = np.broadcast_to(np.eye(3, dtype=complex), (B, D, 3, 3)).copy()
        for site in range(L):
            t_lbl = S[i0:i1, site]  # (B,)
            s_lbl = S[:, site]  # (D,)
            M = R[:, t_lbl[:, None], :, s_lbl[None, :]]  # (B, D, 3, 3)
            G = np.einsum("bpij,bpjk->bpik", G, M)
        T[i0:i1, :] = np.trace(G, axis1=2, axis2=3)
    return LatticeOperator(basis, sp.csr_matrix(T))


@dataclass
class SpectrumReport:
    L: int
    n: int
    eigenvalues: np.ndarray  # sorted by (Re, Im)
    is_real: np.ndarray
    conjugation_defect: float
    method: str
    real_tol: float

    @property
    def lowest(self) -> complex:
        return self.eigenvalues[0]

    @property
    def lowest_real(self) -> float:
        reals = self.eigenvalues[self.is_real]
        if len(reals) == 0:
            raise ValueError("sector has no real eigenvalue within tolerance")
        return float(np.min(reals.real))


def _conjugation_defect(vals: np.ndarray, is_real: np.ndarray) -> float:
    comp = vals[~is_real]
    if len(comp) == 0:
        return 0.0
    return float(max(np.min(np.abs(np.conj(z) - comp)) for z in comp))


def _make_report(basis: SectorBasis, vals: np.ndarray, method: str, real_tol: float) -> SpectrumReport:
    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order]
    is_real = np.abs(vals.imag) <= real_tol * np.maximum(1.0, np.abs(vals.real))
    return SpectrumReport(
        basis.L, basis.n, vals, is_real, _conjugation_defect(vals, is_real), method, real_tol
    )


def diagonalize(
    op: LatticeOperator,
    mode: str = "full",
    k: int = 6,
    real_tol: float = 1e-8,
) -> SpectrumReport:
    """Eigenvalues of a (generally non-Hermitian) sector operator.

    mode="full" returns every eigenvalue via dense LAPACK; mode="lowest"
    returns the k smallest-real-part eigenvalues, using ARPACK on larger
    sectors with a dense fallback.
    """
    basis = op.sector
    D = op.dim
    if mode == "full":
        if D > DENSE_LIMIT:
            raise ValueError(f"full diagonalization capped at dim {DENSE_LIMIT}, got {D}")
        vals = eig(op.matrix.toarray(), right=False)
        return _make_report(basis, vals, "dense", real_tol)
    if mode != "lowest":
        raise ValueError(f"unknown mode {mode!r}")
    if D <= max(_DENSE_EIG_CUTOFF, 3 * k + 2):
        vals = eig(op.matrix.toarray(), right=False)
        vals = vals[np.argsort(vals.real)][: min(k, D)]
        return _make_report(basis, vals, "dense", real_tol)
    return _lowest_arpack(op, k, real_tol)


def _lowest_arpack(op: LatticeOperator, k: int, real_tol: float) -> SpectrumReport:
    D = op.dim
    A = op.matrix
    v0 = np.ones(D) / np.sqrt(D)
    attempts = []
    for ncv in (max(40, 4 * k), max(90, 8 * k)):
        try:
            vals, vecs = spla.eigs(A, k=k, which="SR", ncv=min(ncv, D - 1), tol=1e-12,
                                   maxiter=8000, v0=v0)
        except spla.ArpackNoConvergence as exc:
            attempts.append(f"SR ncv={ncv}: no convergence ({exc})")
            continue
        res = np.linalg.norm(A @ vecs - vecs * vals[None, :], axis=0)
        scale = spla.norm(A, np.inf)
        if np.all(res <= 1e-9 * max(1.0, scale)):
            return _make_report(op.sector, vals, f"arpack-sr(ncv={ncv})", real_tol)
        attempts.append(f"SR ncv={ncv}: residual {np.max(res):.2e}")
    if D <= DENSE_LIMIT:
        vals = eig(A.toarray(), right=False)
        vals = vals[np.argsort(vals.real)][:k]
        return _make_report(op.sector, vals, "dense-fallback", real_tol)
    raise ConvergenceFailure(
        f"lowest-eigenvalue iteration failed for dim {D}", diagnostics={"attempts": attempts}
    )


def sector_range(L: int) -> range:
    return range(-L, L + 1)


def full_spectrum(U: float, L: int, sectors=None, real_tol: float = 1e-8) -> dict[int, SpectrumReport]:
    """Dense spectra of every requested sector (default: all of them)."""
    out = {}
    for n in sector_range(L) if sectors is None else sectors:
        out[n] = diagonalize(build_hamiltonian(U, L, n), mode="full", real_tol=real_tol)
    return out


def lowest_per_sector(U: float, L: int, k: int = 6, sectors=None) -> dict[int, SpectrumReport]:
    """k lowest (by real part) eigenvalues per sector; mirrors n < 0 from n > 0.

    The +-n spectra coincide (checked directly at small L by the test
    suite), so only n >= 0 is diagonalized.
    """
    reports = {}
    for n in range(0, L + 1):
        reports[n] = diagonalize(build_hamiltonian(U, L, n), mode="lowest", k=k)
    for n in range(1, L + 1):
        reports[-n] = reports[n]
    if sectors is not None:
        reports = {n: reports[n] for n in sectors}
    return reports


@lru_cache(maxsize=512)
def ground_state_energy(U: float, L: int, k: int = 6) -> float:
    """Smallest real part over all magnetization sectors."""
    reports = lowest_per_sector(U, L, k=k)
    return min(float(r.eigenvalues.real.min()) for r in reports.values())


@lru_cache(maxsize=512)
def lowest_two_energies(U: float, L: int, k: int = 8, level_tol: float = 1e-9):
    """(E0, E1): ground energy and the next distinct level across sectors."""
    reports = lowest_per_sector(U, L, k=k)
    vals = np.sort(np.concatenate([r.eigenvalues.real for r in reports.values()]))
    e0 = vals[0]
    above = vals[vals > e0 + level_tol * max(1.0, abs(e0))]
    if len(above) == 0:
        raise ConvergenceFailure("no level above the ground state found; increase k")
    return float(e0), float(above[0])


def spectrum_is_real(U: float, L: int, tol: float = 1e-8) -> bool:
    """True when every eigenvalue in every sector is real within tolerance."""
    for n in sector_range(L):
        rep = diagonalize(build_hamiltonian(U, L, n), mode="full", real_tol=tol)
        if not np.all(rep.is_real):
            return False
    return True


def reality_threshold(
    L: int,
    tol: float = 1e-8,
    bracket: tuple[float, float] = (2.5, 3.45),
    u_tol: float = 1e-6,
) -> float:
    """Smallest U with an entirely real spectrum, located by bisection.

    Needs the full spectrum of every sector per probe, so it is practical
    for L <= 9.  The result is rounded to five decimal places.
    """
    lo, hi = bracket
    if not (lo < hi):
        raise BracketInvalid(f"empty bracket {bracket}")
    if spectrum_is_real(lo, L, tol) or not spectrum_is_real(hi, L, tol):
        raise BracketInvalid(f"predicate does not change sign on {bracket} for L={L}")
    while hi - lo > u_tol:
        mid = 0.5 * (lo + hi)
        if spectrum_is_real(mid, L, tol):
            hi = mid
        else:
            lo = mid
    return round(0.5 * (lo + hi), 5)


@dataclass
class SymmetryReport:
    L: int
    U: float
    spectral_distance: float
    e1_relation_defect: float
    f0_per_site: float


def _hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    d1 = max(np.min(np.abs(b - z)) for z in a)
    d2 = max(np.min(np.abs(a - z)) for z in b)
    return float(max(d1, d2))


def symmetry_check_neg_u(L: int, U: float) -> SymmetryReport:
    """Even-L relations between H(U) and H(-U).

    Reports (i) the Hausdorff distance between spec(H(U)) and -spec(H(-U))
    over all sectors, (ii) the defect of E1(U) - E1(-U) - U L / 2 for the
    lowest sector-1 levels, and (iii) the per-site sequence
    F0 = [E0(U) - E0(-U) - U L / 2] / L for the global ground states.
    """
    if L % 2:
        raise ValueError("the spectral reflection holds for even L only")
    spec_p, spec_m = {}, {}
    for n in sector_range(L):
        spec_p[n] = diagonalize(build_hamiltonian(U, L, n), mode="full").eigenvalues
        spec_m[n] = diagonalize(build_hamiltonian(-U, L, n), mode="full").eigenvalues
    all_p = np.concatenate(list(spec_p.values()))
    all_m = np.concatenate(list(spec_m.values()))
    dist = _hausdorff(all_p, -all_m)
    e1p = float(np.min(spec_p[1].real))
    e1m = float(np.min(spec_m[1].real))
    e0p = float(min(np.min(v.real) for v in spec_p.values()))
    e0m = float(min(np.min(v.real) for v in spec_m.values()))
    return SymmetryReport(
        L,
        U,
        spectral_distance=dist,
        e1_relation_defect=e1p - e1m - U * L / 2.0,
        f0_per_site=(e0p - e0m - U * L / 2.0) / L,
    )


@lru_cache(maxsize=512)
def sector_1_lowest(U: float, L: int, k: int = 6) -> float:
    """Lowest energy in the n = 1 sector (iterative for larger sizes)."""
    rep = diagonalize(build_hamiltonian(U, L, 1), mode="lowest", k=k)
    return float(rep.eigenvalues.real.min())


def f0_per_site(U: float, L: int, k: int = 8) -> float:
    """Per-site defect of the ground-state reflection relation."""
    e0p = ground_state_energy(U, L, k=k)
    e0m = ground_state_energy(-U, L, k=k)
    return (e0p - e0m - U * L / 2.0) / L
