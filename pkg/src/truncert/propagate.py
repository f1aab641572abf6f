"""Sparse numerical engines: Krylov evolution, eigenpairs, norm estimates.

The evolution engine is Lanczos with full reorthogonalization and
adaptive substeps sized by a rigorous a-posteriori tail estimate, so a
single global 2-norm error budget holds for the whole call.  Everything
randomized is seeded by default: same inputs, same outputs.

Engine accuracy targets sit well below the bound tolerances probed by
the verification experiments (default budget 1e-10 against bounds read
at 1e-6 and coarser).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh, eigh_tridiagonal
from scipy.sparse.linalg import eigsh

from .fock_algebra import CompositeBasis, ProjectorSpec, hermiticity_defect, window_mask

__all__ = [
    "EvolveConfig",
    "ConvergenceError",
    "COLUMN_CAP",
    "evolve",
    "DensePropagator",
    "lowest_eigenpairs",
    "ground_state",
    "op_norm",
    "leakage_columns",
    "masked_top_singular",
    "leakage_norm",
]

#: Largest dim * n_columns product for the exact column path in leakage_norm.
COLUMN_CAP = 1 << 22

_HERM_TOL = 1e-10


class ConvergenceError(RuntimeError):
    """An iterative engine failed to meet its accuracy target."""


@dataclass(frozen=True)
class EvolveConfig:
    tolerance: float = 1e-10
    max_krylov: int = 32
    seed: int = 1123
    max_halvings: int = 60
    check_hermitian: bool = True

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be > 0")
        if self.max_krylov < 2:
            raise ValueError("max_krylov must be >= 2")


# ---------------------------------------------------------------------------
# Krylov evolution
# ---------------------------------------------------------------------------

def _diagonal_if_diagonal(h: sp.spmatrix) -> np.ndarray | None:
    coo = sp.coo_matrix(h)
    if coo.nnz and not np.array_equal(coo.row, coo.col):
        return None
    diag = np.zeros(h.shape[0], dtype=complex)
    diag[coo.row] = coo.data
    return diag


def _lanczos(h: sp.csr_matrix, v0: np.ndarray, m: int):
    """Hermitian Lanczos with full reorthogonalization.

    Returns (V, alpha, beta, beta_next) where V has k <= m orthonormal
    columns, T = tridiag(beta, alpha, beta) is the k x k projection, and
    beta_next is the dropped coupling (0 signals an invariant subspace).
    """
    dim = v0.shape[0]
    k_max = min(m, dim)
    v_norm = np.linalg.norm(v0)
    V = np.zeros((dim, k_max), dtype=complex)
    alpha = np.zeros(k_max)
    beta = np.zeros(max(k_max - 1, 0))
    V[:, 0] = v0 / v_norm
    w = None
    beta_next = 0.0
    for j in range(k_max):
        w = h @ V[:, j]
        alpha[j] = float(np.real(np.vdot(V[:, j], w)))
        w = w - alpha[j] * V[:, j]
        if j > 0:
            w = w - beta[j - 1] * V[:, j - 1]
        # two rounds of classical Gram-Schmidt against the whole basis
        for _ in range(2):
            w = w - V[:, : j + 1] @ (V[:, : j + 1].conj().T @ w)
        beta_next = float(np.linalg.norm(w))
        if j + 1 < k_max:
            if beta_next < 1e-13 * max(1.0, abs(alpha[j])):
                return V[:, : j + 1], alpha[: j + 1], beta[:j], 0.0
            beta[j] = beta_next
            V[:, j + 1] = w / beta_next
    return V, alpha, beta, beta_next


def _tridiag_expm_column(alpha, beta, dt):
    """exp(-i dt T) e_1 for the tridiagonal T, plus its eigensystem."""
    if len(alpha) == 1:
        theta = np.array([alpha[0]])
        u = np.ones((1, 1))
    else:
        theta, u = eigh_tridiagonal(alpha, beta)
    col = u @ (np.exp(-1j * dt * theta) * u[0, :])
    return col, theta, u


def _tail_estimate(theta, u, beta_next, dt):
    """Upper estimate of the Krylov truncation error over a step of dt.

    Integrates beta_next * |e_m^T exp(-i s T) e_1| over s in [0, dt] on a
    trapezoid grid resolved against the spectral spread, with a safety
    factor on top.
    """
    if beta_next == 0.0:
        return 0.0
    spread = float(theta[-1] - theta[0]) if len(theta) > 1 else 0.0
    periods = abs(dt) * spread / (2.0 * math.pi)
    n = int(min(4097, max(129, 16 * math.ceil(periods + 1) + 1)))
    s = np.linspace(0.0, abs(dt), n)
    phases = np.exp(-1j * np.outer(s, theta))
    integrand = beta_next * np.abs(phases @ (u[-1, :] * u[0, :]))
    area = float(np.sum((integrand[1:] + integrand[:-1]) * np.diff(s)) / 2.0)
    return 1.2 * area


def evolve(
    h: sp.spmatrix, psi0: np.ndarray, t: float, cfg: EvolveConfig | None = None
) -> np.ndarray:
    """Apply exp(-i t h) to psi0 within the config's global error budget."""
    cfg = cfg or EvolveConfig()
    h = sp.csr_matrix(h)
    if h.shape[0] != h.shape[1] or h.shape[0] != psi0.shape[0]:
        raise ValueError("dimension mismatch")
    if cfg.check_hermitian and hermiticity_defect(h) > _HERM_TOL:
        raise ValueError("hamiltonian is not Hermitian")
    psi = np.asarray(psi0, dtype=complex).copy()
    if t == 0 or np.linalg.norm(psi) == 0:
        return psi
    diag = _diagonal_if_diagonal(h)
    if diag is not None:
        return np.exp(-1j * t * diag) * psi

    direction = 1.0 if t > 0 else -1.0
    remaining = abs(t)
    budget = cfg.tolerance
    for _ in range(1_000_000):
        if remaining <= 0:
            return psi
        norm = np.linalg.norm(psi)
        V, alpha, beta, beta_next = _lanczos(h, psi, cfg.max_krylov)
        dt = remaining
        col = theta = u = None
        accepted = None
        for _ in range(cfg.max_halvings):
            col, theta, u = _tridiag_expm_column(alpha, beta, direction * dt)
            est = _tail_estimate(theta, u, beta_next, dt)
            if est <= 0.9 * budget * (dt / remaining):
                accepted = est
                break
            dt /= 2.0
        if accepted is None:
            raise ConvergenceError(
                "substep halving cap hit; raise tolerance or max_krylov"
            )
        psi = V @ (norm * col)
        budget -= accepted
        remaining -= dt
    raise ConvergenceError("substep count cap hit")


class DensePropagator:
    """Exact propagator from one dense eigendecomposition; reusable across t."""

    def __init__(self, h: sp.spmatrix):
        self.w, self.v = eigh(sp.csr_matrix(h).toarray())

    def apply(self, psi: np.ndarray, t: float) -> np.ndarray:
        coeff = self.v.conj().T @ np.asarray(psi, dtype=complex)
        return self.v @ (np.exp(-1j * t * self.w) * coeff)


# ---------------------------------------------------------------------------
# eigenpairs
# ---------------------------------------------------------------------------

def lowest_eigenpairs(
    h: sp.spmatrix, k: int = 2, tol: float = 1e-9, seed: int = 1123
) -> tuple[np.ndarray, np.ndarray]:
    """The k smallest eigenvalues and eigenvectors, residual-checked."""
    h = sp.csr_matrix(h)
    dim = h.shape[0]
    if k < 1 or k > dim:
        raise ValueError("k out of range")
    if dim <= 400 or k > dim - 2:
        w, v = eigh(h.toarray())
        return w[:k], v[:, :k]
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(dim).astype(h.dtype)
    # Lanczos is dependable at the large-algebraic end, so shift with a
    # Gershgorin upper bound and look for the top of c*I - h instead of
    # asking for "SA" directly (which can skip the true minimum).
    diag = h.diagonal()
    row_abs = np.asarray(abs(h).sum(axis=1)).ravel()
    c = float(np.max(diag.real + row_abs - np.abs(diag))) + 1.0
    shifted = sp.identity(dim, dtype=h.dtype, format="csr") * c - h
    mu, vecs = eigsh(shifted, k=k, which="LA", v0=v0, maxiter=max(2000, 40 * dim))
    vals = c - mu
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    for i in range(k):
        res = np.linalg.norm(h @ vecs[:, i] - vals[i] * vecs[:, i])
        if res > max(tol, tol * abs(vals[i])):
            raise ConvergenceError(f"eigenpair residual {res:.3e} exceeds {tol:.3e}")
    return vals, vecs


def ground_state(h: sp.spmatrix, tol: float = 1e-9) -> tuple[float, np.ndarray]:
    vals, vecs = lowest_eigenpairs(h, k=1, tol=tol)
    return float(vals[0]), vecs[:, 0]


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------

def op_norm(
    a: sp.spmatrix,
    tol: float = 1e-10,
    max_iter: int = 500,
    seed: int = 7,
    restarts: int = 3,
) -> float:
    """Largest singular value by power iteration on a^dagger a.

    Randomized restarts are deterministically seeded; the returned value
    is the best Rayleigh estimate across restarts.
    """
    a = sp.csr_matrix(a)
    if a.nnz == 0:
        return 0.0
    ah = sp.csr_matrix(a.conj().T)
    rng = np.random.default_rng(seed)
    n = a.shape[1]
    best = 0.0
    for _ in range(restarts):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v /= np.linalg.norm(v)
        sigma = 0.0
        for _ in range(max_iter):
            w = a @ v
            s_new = float(np.linalg.norm(w))
            if s_new == 0.0:
                break
            v = ah @ w
            nv = np.linalg.norm(v)
            if nv == 0.0:
                sigma = s_new
                break
            v /= nv
            if abs(s_new - sigma) <= tol * max(s_new, 1e-300):
                sigma = s_new
                break
            sigma = s_new
        best = max(best, sigma)
    return best


# ---------------------------------------------------------------------------
# leakage
# ---------------------------------------------------------------------------

def leakage_columns(
    basis: CompositeBasis,
    h: sp.spmatrix,
    window0: ProjectorSpec,
    t: float,
    cfg: EvolveConfig | None = None,
    dense_dim: int = 1200,
) -> tuple[np.ndarray, np.ndarray]:
    """Evolve every basis column of the initial window for time t.

    Returns (columns, indices): columns[:, j] = exp(-i t h) |indices[j]>.
    Reuse the columns across window1 choices; masking rows and taking the
    top singular value yields the leakage norm for any escape window.
    """
    cfg = cfg or EvolveConfig()
    h = sp.csr_matrix(h)
    dim = basis.dimension
    if h.shape != (dim, dim):
        raise ValueError("operator does not match basis dimension")
    if cfg.check_hermitian and hermiticity_defect(h) > _HERM_TOL:
        raise ValueError("hamiltonian is not Hermitian")
    idx = np.nonzero(window_mask(basis, window0))[0]
    cols = np.zeros((dim, len(idx)), dtype=complex)
    prop = DensePropagator(h) if dim <= dense_dim else None
    quiet = EvolveConfig(
        tolerance=cfg.tolerance,
        max_krylov=cfg.max_krylov,
        seed=cfg.seed,
        max_halvings=cfg.max_halvings,
        check_hermitian=False,
    )
    for j, i in enumerate(idx):
        e = np.zeros(dim, dtype=complex)
        e[i] = 1.0
        cols[:, j] = prop.apply(e, t) if prop else evolve(h, e, t, quiet)
    return cols, idx


def masked_top_singular(cols: np.ndarray, keep_mask: np.ndarray) -> float:
    """Top singular value of the rows of cols outside keep_mask."""
    sub = cols[~keep_mask, :]
    if sub.size == 0:
        return 0.0
    return float(np.linalg.svd(sub, compute_uv=False)[0])


def leakage_norm(
    basis: CompositeBasis,
    h: sp.spmatrix,
    window0: ProjectorSpec,
    window1: ProjectorSpec,
    t: float,
    cfg: EvolveConfig | None = None,
    column_cap: int = COLUMN_CAP,
    n_probe: int = 64,
) -> float:
    """Leakage norm: top singular value of (1 - P_window1) exp(-i t h) P_window0.

    Exact column path (evolve every window0 basis state, SVD) whenever
    dim * |window0| fits the cap; beyond that, seeded random window
    probes followed by power iteration with the evolution as the matvec.
    """
    cfg = cfg or EvolveConfig()
    h = sp.csr_matrix(h)
    dim = basis.dimension
    mask0 = window_mask(basis, window0)
    mask1 = window_mask(basis, window1)
    n0 = int(mask0.sum())
    if n0 == 0:
        return 0.0
    if dim * n0 <= column_cap:
        cols, _ = leakage_columns(basis, h, window0, t, cfg)
        return masked_top_singular(cols, mask1)

    if cfg.check_hermitian and hermiticity_defect(h) > _HERM_TOL:
        raise ValueError("hamiltonian is not Hermitian")
    quiet = EvolveConfig(
        tolerance=cfg.tolerance,
        max_krylov=cfg.max_krylov,
        seed=cfg.seed,
        max_halvings=cfg.max_halvings,
        check_hermitian=False,
    )

    idx0 = np.nonzero(mask0)[0]

    def forward(x):
        # domain coordinates -> full-space escape component
        v = np.zeros(dim, dtype=complex)
        v[idx0] = x
        u = evolve(h, v, t, quiet)
        u[mask1] = 0.0
        return u

    def backward(u):
        w = evolve(h, u, -t, quiet)
        return w[idx0]

    rng = np.random.default_rng(cfg.seed)
    best_x = None
    best_val = -1.0
    for _ in range(n_probe):
        x = rng.standard_normal(n0) + 1j * rng.standard_normal(n0)
        x /= np.linalg.norm(x)
        val = np.linalg.norm(forward(x))
        if val > best_val:
            best_val, best_x = val, x
    if best_val == 0.0:
        return 0.0

    # Block subspace iteration in window-0 coordinates; the block absorbs
    # clustered singular values that stall a single power vector.
    block = min(n0, 4)
    x_block = rng.standard_normal((n0, block)) + 1j * rng.standard_normal((n0, block))
    x_block[:, 0] = best_x
    x_block, _ = np.linalg.qr(x_block)
    sigma = best_val
    stall = 0
    for _ in range(300):
        u_block = np.stack([forward(x_block[:, j]) for j in range(block)], axis=1)
        gram = u_block.conj().T @ u_block
        s_new = float(np.sqrt(max(0.0, np.linalg.eigvalsh(gram)[-1].real)))
        if s_new == 0.0:
            return 0.0
        w_block = np.stack([backward(u_block[:, j]) for j in range(block)], axis=1)
        x_block, _ = np.linalg.qr(w_block)
        if abs(s_new - sigma) <= 1e-10 * max(s_new, 1e-300):
            stall += 1
            if stall >= 2:
                return s_new
        else:
            stall = 0
        sigma = s_new
    return sigma
