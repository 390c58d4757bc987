"""Bethe-equation solvers for the spin-1 chain.

Momentum form, M = L - n roots per sector n:

    exp(i k_j L) = prod_{i != j}
        [sin(k_j - pi/6) e^{-i pi/3} - sin(k_i - pi/6) e^{+i pi/3} + i U/2]
        / [sin(k_j - pi/6) e^{+i pi/3} - sin(k_i - pi/6) e^{-i pi/3} - i U/2]

Logarithmic (real-root) form, stable for U >= 2*sqrt(3):

    L k_j = 2 pi Q_j + 2 sum_{i != j} arctan[ (s_j - s_i)
              / (sqrt(3)(s_j + s_i) - U) ],      s = sin(k - pi/6),

with ground-state branch numbers Q_j = (L - n - 1)/2 - (j - 1).  Energies
are E = -sum_j 2 cos(k_j + pi/6) + n U / 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import curve as curve_mod
from .curve import CurveParams, CurvePoint, zw_map
from .errors import (
    JacobianSingular,
    NoConvergence,
    NonRealDrift,
    PoleHit,
)

_E3 = np.exp(1j * np.pi / 3)
SQRT3 = np.sqrt(3.0)
U_CRITICAL = 2.0 * SQRT3

ACCEPT_RESIDUAL = 1e-10


@dataclass
class BetheRootSet:
    L: int
    n: int
    U: float
    roots: np.ndarray  # complex momenta k_j, length L - n
    Q: list | None = None
    residual: float = np.inf
    eps_sign: str = "plus"
    classification: object = None

    @property
    def z_values(self) -> np.ndarray:
        return np.exp(1j * self.roots)

    def is_real(self, tol: float = 1e-10) -> bool:
        return bool(np.all(np.abs(self.roots.imag) < tol))

    def to_json_dict(self) -> dict:
        return {
            "L": self.L,
            "n": self.n,
            "U": self.U,
            "eps_sign": self.eps_sign,
            "roots": [{"re": float(k.real), "im": float(k.imag)} for k in self.roots],
            "Q": None if self.Q is None else [float(q) for q in self.Q],
            "residual": float(self.residual),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "BetheRootSet":
        roots = np.array([r["re"] + 1j * r["im"] for r in d["roots"]], dtype=complex)
        return cls(d["L"], d["n"], d["U"], roots, d.get("Q"), d.get("residual", np.inf),
                   d.get("eps_sign", "plus"))


def ground_state_quantum_numbers(L: int, n: int) -> list[float]:
    """Branch numbers of the lowest state in sector n: (L-n-1)/2 - (j-1)."""
    if not 0 <= n <= L:
        raise ValueError(f"sector n={n} outside 0..L for L={L}")
    return [(L - n - 1) / 2.0 - j for j in range(L - n)]


def _pair_arrays(k: np.ndarray, U: float):
    s = np.sin(k - np.pi / 6)
    num = s[:, None] / _E3 - s[None, :] * _E3 + 0.5j * U
    den = s[:, None] * _E3 - s[None, :] / _E3 - 0.5j * U
    return s, num, den


def bethe_defect(rs: BetheRootSet, pole_tol: float = 1e-13) -> np.ndarray:
    """Residual of each momentum-form equation; zero on-shell."""
    k = np.asarray(rs.roots, dtype=complex)
    M = len(k)
    if M == 0:
        return np.zeros(0, dtype=complex)
    _, num, den = _pair_arrays(k, rs.U)
    off = ~np.eye(M, dtype=bool)
    if M > 1 and np.min(np.abs(den[off])) < pole_tol:
        raise PoleHit("scattering denominator vanishes for a root pair")
    F = np.empty(M, dtype=complex)
    for j in range(M):
        m = off[j]
        F[j] = np.exp(1j * k[j] * rs.L) - np.prod(num[j, m] / den[j, m])
    return F


def bethe_defect_z(rs: BetheRootSet, pole_tol: float = 1e-13) -> np.ndarray:
    """Same system written in Z_j = exp(i k_j); agrees with the k-form."""
    Z = rs.z_values
    eps = CurveParams(rs.U, rs.eps_sign).eps
    seps = CurveParams(rs.U, rs.eps_sign).sqrt_eps
    M = len(Z)
    t = Z - eps / Z
    num = t[:, None] / eps - t[None, :] * eps - rs.U * seps
    den = t[:, None] * eps - t[None, :] / eps + rs.U * seps
    off = ~np.eye(M, dtype=bool)
    if M > 1 and np.min(np.abs(den[off])) < pole_tol:
        raise PoleHit("Z-form denominator vanishes")
    F = np.empty(M, dtype=complex)
    for j in range(M):
        m = off[j]
        F[j] = Z[j] ** rs.L - np.prod(num[j, m] / den[j, m])
    return F


# ---------------------------------------------------------------------------
# real logarithmic form


def _log_form_residual_and_jacobian(k: np.ndarray, L: int, U: float, Q: np.ndarray):
    M = len(k)
    s = np.sin(k - np.pi / 6)
    c = np.cos(k - np.pi / 6)
    Nm = s[:, None] - s[None, :]
    Dm = SQRT3 * (s[:, None] + s[None, :]) - U
    with np.errstate(divide="ignore", invalid="ignore"):
        at = np.arctan(Nm / Dm)
    np.fill_diagonal(at, 0.0)
    g = L * k - 2 * np.pi * Q - 2 * at.sum(axis=1)
    den = Nm * Nm + Dm * Dm
    np.fill_diagonal(den, 1.0)
    kern_j = (2 * SQRT3 * s[None, :] - U) / den
    np.fill_diagonal(kern_j, 0.0)
    J = np.diag(L - 2 * c * kern_j.sum(axis=1))
    kern_i = (2 * SQRT3 * s[:, None] - U) / den
    np.fill_diagonal(kern_i, 0.0)
    J = J + 2 * c[None, :] * kern_i
    return g, J


def solve_log_form(
    L: int,
    n: int,
    U: float,
    Q: list | None = None,
    x0: np.ndarray | None = None,
    tol: float = 1e-13,
    max_iter: int = 200,
) -> BetheRootSet:
    """Real momenta from the logarithmic equations by damped Newton.

    Reliable for U >= 2*sqrt(3); below that range real roots destabilize
    and the solve raises NonRealDrift when two momenta collide.
    """
    if Q is None:
        Q = ground_state_quantum_numbers(L, n)
    Qa = np.asarray(Q, dtype=float)
    M = L - n
    if len(Qa) != M:
        raise ValueError(f"expected {M} branch numbers, got {len(Qa)}")
    if M == 0:
        return BetheRootSet(L, n, U, np.zeros(0, dtype=complex), [], 0.0)
    k = (2 * np.pi / L) * Qa if x0 is None else np.array(x0, dtype=float)
    last_step = np.inf
    for _ in range(max_iter):
        g, J = _log_form_residual_and_jacobian(k, L, U, Qa)
        try:
            step = np.linalg.solve(J, g)
        except np.linalg.LinAlgError as exc:
            raise JacobianSingular(f"log-form Jacobian singular at U={U}, L={L}") from exc
        scale = 1.0
        gnorm = np.max(np.abs(g))
        for _ in range(40):
            trial = k - scale * step
            gt, _ = _log_form_residual_and_jacobian(trial, L, U, Qa)
            if np.max(np.abs(gt)) < gnorm:
                break
            scale /= 2
        k = k - scale * step
        if M > 1:
            dk = np.abs(k[:, None] - k[None, :]) + np.eye(M)
            if np.min(dk) < 1e-9:
                raise NonRealDrift(
                    f"momenta collided at U={U}, L={L}, n={n}: real roots unstable"
                )
        last_step = scale * np.max(np.abs(step))
        if last_step < tol:
            break
    else:
        raise NoConvergence(f"log form did not converge (last step {last_step:.2e})", last=k)
    rs = BetheRootSet(L, n, U, k.astype(complex), list(Qa))
    rs.residual = float(np.max(np.abs(bethe_defect(rs)))) if M else 0.0
    if rs.residual > ACCEPT_RESIDUAL:
        raise NoConvergence(f"converged iterate has defect {rs.residual:.2e}", last=k,
                            residual=rs.residual)
    return rs


# ---------------------------------------------------------------------------
# complex form


def _wrap(k: np.ndarray) -> np.ndarray:
    return (k.real + np.pi) % (2 * np.pi) - np.pi + 1j * k.imag


def _min_distance(k: np.ndarray) -> float:
    M = len(k)
    if M < 2:
        return np.inf
    dr = np.abs(k.real[:, None] - k.real[None, :])
    dr = np.minimum(dr, 2 * np.pi - dr)
    di = k.imag[:, None] - k.imag[None, :]
    dist = np.hypot(dr, di) + 2 * np.pi * np.eye(M)
    return float(np.min(dist))


def _cleared_defect(k: np.ndarray, L: int, U: float):
    """Pole-free residual exp(i k_j L) prod den - prod num, with row scales.

    Near string formation the scattering denominators pinch zeros, which
    makes the ratio form ill-conditioned; the cleared form stays smooth
    through those couplings.  The returned scale per row is the magnitude
    sum of the two competing terms, for relative convergence tests.
    """
    M = len(k)
    _, num, den = _pair_arrays(k, U)
    off = ~np.eye(M, dtype=bool)
    F = np.empty(M, dtype=complex)
    scale = np.empty(M)
    for j in range(M):
        m = off[j]
        t1 = np.exp(1j * k[j] * L) * np.prod(den[j, m])
        t2 = np.prod(num[j, m])
        F[j] = t1 - t2
        scale[j] = abs(t1) + abs(t2) + 1.0
    return F, scale


def _cleared_jacobian(k: np.ndarray, L: int, U: float) -> np.ndarray:
    M = len(k)
    c = np.cos(k - np.pi / 6)
    _, num, den = _pair_arrays(k, U)
    J = np.zeros((M, M), dtype=complex)
    idx = np.arange(M)
    for j in range(M):
        m = idx[idx != j]
        E = np.exp(1j * k[j] * L)
        dprod = np.prod(den[j, m])
        nprod = np.prod(num[j, m])

        def drop(arr, skip):
            sel = m[m != skip]
            return np.prod(arr[j, sel])

        # d/dk_j: chain through every pair factor plus the exponential
        dd = sum((c[j] * _E3) * drop(den, i) for i in m)
        dn = sum((c[j] / _E3) * drop(num, i) for i in m)
        J[j, j] = 1j * L * E * dprod + E * dd - dn
        for i in m:
            J[j, i] = E * (-c[i] / _E3) * drop(den, i) - (-c[i] * _E3) * drop(num, i)
    return J


def solve_complex(
    L: int,
    n: int,
    U: float,
    init: np.ndarray,
    tol: float = ACCEPT_RESIDUAL,
    max_iter: int = 150,
    classify_tol: float = 1e-6,
) -> BetheRootSet:
    """Newton solve of the momentum-form system in complex variables.

    The iteration runs on the pole-cleared residual, so string patterns
    that pinch a scattering pole remain reachable; the reported residual
    is the plain momentum-form defect.  Momenta are kept wrapped to
    Re k in (-pi, pi]; iterates that collide two roots (distance below
    1e-6 on the cylinder) are rejected, since coincident momenta solve
    the equations only spuriously.
    """
    k = _wrap(np.asarray(init, dtype=complex))
    if len(k) != L - n:
        raise ValueError(f"expected {L - n} initial momenta, got {len(k)}")

    def cleared(kk):
        with np.errstate(over="ignore", invalid="ignore"):
            return _cleared_defect(kk, L, U)

    for _ in range(max_iter):
        F, row_scale = cleared(k)
        r = float(np.max(np.abs(F) / row_scale)) if len(F) else 0.0
        if not np.all(np.isfinite(F)):
            raise NoConvergence("defect overflowed", last=k)
        if r < 1e-13:
            if _min_distance(k) < 1e-6:
                raise NoConvergence("converged to coincident momenta", last=k, residual=r)
            rs = BetheRootSet(L, n, U, k)
            try:
                with np.errstate(over="ignore", invalid="ignore"):
                    plain = bethe_defect(rs)
                rs.residual = float(np.max(np.abs(plain))) if len(plain) else 0.0
            except PoleHit:
                # exactly pole-pinched (isolated couplings during string
                # formation): the ratio form is unevaluable, keep the
                # relative cleared residual instead
                rs.residual = r
            if rs.residual > tol:
                raise NoConvergence(
                    "cleared form converged but the pole-pinched defect stays "
                    f"{rs.residual:.2e}",
                    last=k,
                    residual=rs.residual,
                )
            rs.classification = classify_roots(rs, classify_tol)
            return rs
        J = _cleared_jacobian(k, L, U)
        try:
            step = np.linalg.solve(J, F)
        except np.linalg.LinAlgError as exc:
            raise JacobianSingular("complex-form Jacobian singular") from exc
        scale, improved = 1.0, False
        for _ in range(55):
            trial = _wrap(k - scale * step)
            Ft, st = cleared(trial)
            if np.all(np.isfinite(Ft)) and np.max(np.abs(Ft) / st) < r:
                improved = True
                break
            scale /= 2
        if not improved:
            raise NoConvergence(f"line search stalled at defect {r:.2e}", last=k, residual=r)
        k = trial
    raise NoConvergence("complex Newton exceeded max_iter", last=k)


def track_state(
    L: int,
    n: int,
    u_start: float,
    u_target: float,
    start: BetheRootSet | None = None,
    du: float = 0.05,
    kick: float = 1e-9,
) -> BetheRootSet:
    """Continue a root set in the coupling, growing strings as needed.

    Starts from the real log-form solution at u_start (which must lie in
    the stable range unless `start` is given) and walks toward u_target
    with adaptive steps.  When plain Newton fails, the two closest real
    roots are fused into a trial conjugate pair; among converging trials
    the one of lowest real energy is kept, matching how string patterns
    descend from the real states above the critical coupling.
    """
    rs = solve_log_form(L, n, u_start) if start is None else start
    k = np.asarray(rs.roots, dtype=complex)
    u = u_start
    step = du
    direction = 1.0 if u_target >= u_start else -1.0
    rng = np.random.default_rng(20170601)
    while abs(u - u_target) > 1e-12:
        h = direction * min(step, abs(u_target - u))
        u_next = u + h
        trial_init = k + 1j * kick * rng.standard_normal(len(k))
        try:
            rs_next = solve_complex(L, n, u_next, trial_init)
            if _max_move(k, rs_next.roots) < 0.5:
                k, u = rs_next.roots, u_next
                step = min(du, step * 1.7)
                continue
        except (NoConvergence, JacobianSingular):
            pass
        if step > du / 16:
            step /= 2
            continue
        # only once plain continuation is exhausted, let a close real pair
        # fuse into a conjugate two-string (the physical branch change)
        fused = _fuse_candidates(k, L, n, u_next)
        if fused is not None:
            k, u = fused.roots, u_next
            step = du
            continue
        step /= 2
        if step < 1e-5:
            raise NoConvergence(f"continuation stuck at U={u:.6f}", last=k)
    rs = BetheRootSet(L, n, u_target, k)
    rs.residual = float(np.max(np.abs(bethe_defect(rs)))) if len(k) else 0.0
    rs.classification = classify_roots(rs)
    return rs


def _max_move(old: np.ndarray, new: np.ndarray) -> float:
    """Largest displacement matching each old root to its nearest new one."""
    dr = np.abs(old.real[:, None] - new.real[None, :])
    dr = np.minimum(dr, 2 * np.pi - dr)
    dist = np.hypot(dr, old.imag[:, None] - new.imag[None, :])
    return float(np.max(np.min(dist, axis=1)))


def _fuse_candidates(k: np.ndarray, L: int, n: int, u_next: float):
    real_idx = [i for i in range(len(k)) if abs(k[i].imag) < 1e-8]
    if len(real_idx) < 2:
        return None
    pairs = sorted(
        (abs((k[i] - k[j]).real), i, j) for i in real_idx for j in real_idx if i < j
    )
    best = None
    for _, i, j in pairs[:2]:
        mean = 0.5 * (k[i] + k[j]).real
        for delta in (0.01, 0.03, 0.06, 0.1, 0.2):
            trial = k.copy()
            trial[i] = mean + 1j * delta
            trial[j] = mean - 1j * delta
            try:
                cand = solve_complex(L, n, u_next, trial)
            except (NoConvergence, JacobianSingular):
                continue
            if _max_move(k, cand.roots) > 0.6:
                continue  # jumped to an unrelated branch
            e = energy(cand)
            if isinstance(e, complex):
                continue
            if best is None or e < best[0]:
                best = (e, cand)
    return None if best is None else best[1]


# ---------------------------------------------------------------------------
# observables


def energy(rs: BetheRootSet):
    """E = -sum 2 cos(k_j + pi/6) + n U / 2; real when the imaginary part
    is at rounding level, complex otherwise."""
    e = -np.sum(2 * np.cos(rs.roots + np.pi / 6)) + rs.n * rs.U / 2.0
    if abs(e.imag) < 1e-10 * max(1.0, abs(e.real)):
        return float(e.real)
    return complex(e)


def finite_size_gap(L: int, U: float) -> float:
    """E1 - E0 from the log-form lowest states of sectors 1 and 0."""
    e0 = energy(solve_log_form(L, 0, U))
    e1 = energy(solve_log_form(L, 1, U))
    return float(e1 - e0)


def eigenvalue_lambda(lam: CurvePoint, rs: BetheRootSet, pole_tol: float = 1e-13) -> complex:
    """Transfer-matrix eigenvalue at spectator point lam, inhomogeneity at
    the regular point.

    With (Z, W) the elliptic image of lam and Z_i = exp(i k_i):

        Lambda / x^L = prod_i (y/(eps x)) (eps + Z_i/W) / (1 - Z_i/Z)
          + Z^{-L} prod_i [same factor] * S(Z, Z_i)
          + (W/Z)^L prod_i (y/x) (eps + Z Z_i) / (W Z_i - 1),

    where S is the scattering ratio in the t = Z - eps/Z variables.
    """
    params = lam.params
    eps = params.eps
    seps = params.sqrt_eps
    zp = zw_map(lam)  # raises MapSingular at x = 0 or y = 0
    Z, W = zp.Z, zp.W
    Zi = rs.z_values
    x, y = lam.x, lam.y
    d1 = 1.0 - Zi / Z
    d3 = W * Zi - 1.0
    t = Z - eps / Z
    ti = Zi - eps / Zi
    s_den = eps * t - ti / eps + rs.U * seps
    for name, arr in (("1 - Z_i/Z", d1), ("W Z_i - 1", d3), ("scattering", s_den)):
        if len(arr) and np.min(np.abs(arr)) < pole_tol:
            raise PoleHit(f"eigenvalue denominator {name} vanishes")
    base = (y / (eps * x)) * (eps + Zi / W) / d1
    s_ratio = (t / eps - eps * ti - rs.U * seps) / s_den
    term1 = np.prod(base)
    term2 = Z ** (-rs.L) * np.prod(base * s_ratio)
    term3 = (W / Z) ** rs.L * np.prod((y / x) * (eps + Z * Zi) / d3)
    return complex(x**rs.L * (term1 + term2 + term3))


@dataclass
class RootClassification:
    reals: list
    strings: list  # list of (k, conj partner) pairs
    unpaired: list

    @property
    def n_strings(self) -> int:
        return len(self.strings)


def classify_roots(rs: BetheRootSet, tol: float = 1e-6) -> RootClassification:
    """Split roots into real ones and conjugate two-strings."""
    reals, complexes = [], []
    for k in rs.roots:
        (reals if abs(k.imag) < tol else complexes).append(complex(k))
    strings, unpaired = [], []
    used = [False] * len(complexes)
    for i, k in enumerate(complexes):
        if used[i]:
            continue
        best, best_d = None, np.inf
        for j in range(i + 1, len(complexes)):
            if used[j]:
                continue
            d = abs(np.conj(k) - complexes[j])
            if d < best_d:
                best, best_d = j, d
        if best is not None and best_d < 10 * tol + 1e-3 * abs(k.imag):
            used[i] = used[best] = True
            strings.append((k, complexes[best]))
        else:
            used[i] = True
            unpaired.append(k)
    return RootClassification(reals, strings, unpaired)


def string_bound_check(U: float) -> bool:
    """True iff U lies at or below the string-forming bound 2*sqrt(3)."""
    return U <= U_CRITICAL + 1e-12


def curve_points_for_roots(rs: BetheRootSet) -> list[CurvePoint]:
    """Deterministic curve-point representatives with Z(p) = exp(i k_j)."""
    params = CurveParams(rs.U, rs.eps_sign)
    out = []
    for Z in rs.z_values:
        cands = curve_mod.points_with_Z(Z, params)
        if not cands:
            raise NoConvergence(f"no curve point found for Z={Z}")
        out.append(cands[0])
    return out
