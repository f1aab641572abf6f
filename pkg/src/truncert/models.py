"""Concrete model Hamiltonians with named parts and walk profiles.

Each builder returns a ModelInstance carrying the assembled sparse
Hamiltonian, its named parts (the part sum reproduces the Hamiltonian
exactly), the walk profile governing quantum-number growth, and the
per-mode walk parts H_W used by the empirical soundness experiments.

The instances are finite proxies of unbounded Hamiltonians: build them
with cutoffs strictly above every window you intend to probe, and check
insensitivity by doubling the cutoff (padding discipline).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .fock_algebra import (
    ALL,
    CompositeBasis,
    ProjectorSpec,
    boson,
    build_basis,
    fermion,
    hermiticity_defect,
    mode_operator,
    projector,
    rotor,
    spin_half,
)
from .walk_profiles import (
    WalkProfile,
    profile_dicke,
    profile_hubbard_holstein,
    profile_u1,
)

__all__ = [
    "ModelInstance",
    "single_mode",
    "hubbard_holstein_1d",
    "dicke",
    "u1_lgt_1d",
    "comm_norm_exact",
    "comm_norm_analytic",
]

_HERM_TOL = 1e-12


@dataclass
class ModelInstance:
    """An assembled model: basis, Hamiltonian, parts, profile, parameters.

    walk_parts maps each truncatable mode index to the walk Hamiltonian
    H_W for that mode (the coupling terms that move its quantum number);
    the rest of the Hamiltonian commutes with the mode's number operator.
    """

    label: str
    basis: CompositeBasis
    hamiltonian: sp.csr_matrix
    parts: dict[str, sp.csr_matrix]
    profile: WalkProfile
    params: dict
    walk_parts: dict[int, sp.csr_matrix] = field(default_factory=dict)

    def __post_init__(self):
        defect = hermiticity_defect(self.hamiltonian)
        if defect > _HERM_TOL:
            raise ValueError(f"hamiltonian not Hermitian (defect {defect:.3e})")
        total = None
        for part in self.parts.values():
            total = part if total is None else total + part
        if total is None:
            raise ValueError("a model needs at least one part")
        diff = self.hamiltonian - total
        if diff.nnz and np.abs(diff.data).max() != 0.0:
            raise ValueError("parts do not sum to the hamiltonian")
        self._comm_cache: dict[int, float] = {}

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    @property
    def cutoff(self) -> int:
        """Smallest cutoff among truncatable modes (the padding level)."""
        t = self.basis.truncatable_modes
        if not t:
            return 0
        return min(int(self.basis.modes[j].cutoff) for j in t)

    def comm_norm(self, lambda_tilde: int) -> float:
        """Cached exact commutator norm ||[H, Pi H Pi]|| at the given window."""
        key = int(lambda_tilde)
        if key not in self._comm_cache:
            self._comm_cache[key] = comm_norm_exact(self, key)
        return self._comm_cache[key]


def _zero(dim: int) -> sp.csr_matrix:
    return sp.csr_matrix((dim, dim), dtype=complex)


# ---------------------------------------------------------------------------
# single driven oscillator
# ---------------------------------------------------------------------------

def single_mode(g_lin: float, omega0: float, n_max: int) -> ModelInstance:
    """H = g_lin (b + b^dag) + omega0 b^dag b on one boson mode.

    The drive walks the occupation by one quantum per application, so the
    walk profile is (chi = 2 |g_lin|, r = 1/2).  With omega0 = 0 and
    g_lin = 1 this generates a coherent state from vacuum: after time T
    the occupation is Poisson distributed with mean T^2.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    basis = build_basis([boson(n_max, "b")])
    b = mode_operator(basis, 0, "annihilate")
    num = mode_operator(basis, 0, "number")
    drive = g_lin * (b + b.getH())
    osc = omega0 * num
    h = (drive + osc).tocsr()
    return ModelInstance(
        label="single_mode",
        basis=basis,
        hamiltonian=h,
        parts={"drive": drive.tocsr(), "oscillator": osc.tocsr()},
        profile=WalkProfile(chi=2.0 * abs(g_lin), r=0.5, label="single_mode"),
        params={"g_lin": g_lin, "omega0": omega0, "n_max": n_max},
        walk_parts={0: drive.tocsr()},
    )


# ---------------------------------------------------------------------------
# 1D Hubbard-Holstein chain
# ---------------------------------------------------------------------------

def hubbard_holstein_1d(
    n_sites: int,
    hop: float = 1.0,
    u: float = 0.0,
    mu: float = 0.0,
    g: float = 0.5,
    omega0: float = 1.0,
    n_max: int = 8,
    open_boundary: bool = True,
) -> ModelInstance:
    """Electron-phonon chain: per site [fermion up, fermion down, boson].

    fermion part: -hop sum over bonds and spins of c^dag c + h.c.,
    plus u (n_up - 1/2)(n_dn - 1/2) and -mu (n_up + n_dn) per site;
    coupling part: g sum_x (b_x + b_x^dag)(n_up + n_dn - 1);
    boson part: omega0 sum_x b^dag b.
    """
    if n_sites < 1:
        raise ValueError("n_sites must be >= 1")
    specs = []
    for x in range(n_sites):
        specs += [fermion(f"up{x}"), fermion(f"dn{x}"), boson(n_max, f"b{x}")]
    basis = build_basis(specs)
    dim = basis.dimension
    up = lambda x: 3 * x
    dn = lambda x: 3 * x + 1
    bmode = lambda x: 3 * x + 2

    ident = sp.identity(dim, format="csr", dtype=complex)
    h_f = _zero(dim)
    bonds = [(x, x + 1) for x in range(n_sites - 1)]
    if not open_boundary and n_sites > 2:
        bonds.append((n_sites - 1, 0))
    for x, y in bonds:
        for site_of in (up, dn):
            cx = mode_operator(basis, site_of(x), "annihilate")
            cy = mode_operator(basis, site_of(y), "annihilate")
            h_f = h_f + (-hop) * (cx.getH() @ cy + cy.getH() @ cx)
    for x in range(n_sites):
        nup = mode_operator(basis, up(x), "number")
        ndn = mode_operator(basis, dn(x), "number")
        h_f = h_f + u * ((nup - 0.5 * ident) @ (ndn - 0.5 * ident))
        h_f = h_f + (-mu) * (nup + ndn)

    h_fb = _zero(dim)
    walk_parts: dict[int, sp.csr_matrix] = {}
    for x in range(n_sites):
        bx = mode_operator(basis, bmode(x), "annihilate")
        nup = mode_operator(basis, up(x), "number")
        ndn = mode_operator(basis, dn(x), "number")
        term = (g * (bx + bx.getH()) @ (nup + ndn - ident)).tocsr()
        walk_parts[bmode(x)] = term
        h_fb = h_fb + term

    h_b = _zero(dim)
    for x in range(n_sites):
        h_b = h_b + omega0 * mode_operator(basis, bmode(x), "number")

    parts = {"fermion": h_f.tocsr(), "coupling": h_fb.tocsr(), "boson": h_b.tocsr()}
    h = (h_f + h_fb + h_b).tocsr()
    return ModelInstance(
        label="hubbard_holstein_1d",
        basis=basis,
        hamiltonian=h,
        parts=parts,
        profile=profile_hubbard_holstein(abs(g)),
        params={
            "n_sites": n_sites,
            "hop": hop,
            "u": u,
            "mu": mu,
            "g": g,
            "omega0": omega0,
            "n_max": n_max,
            "open_boundary": open_boundary,
        },
        walk_parts=walk_parts,
    )


# ---------------------------------------------------------------------------
# Dicke model
# ---------------------------------------------------------------------------

def dicke(
    n_spins: int, omega_c: float, omega_z: float, g: float, n_max: int
) -> ModelInstance:
    """Cavity mode coupled to n_spins two-level systems.

    H = omega_c b^dag b + omega_z sum sigma_z
        + (g / sqrt(n_spins)) (b + b^dag) sum sigma_x
    """
    if n_spins < 1:
        raise ValueError("n_spins must be >= 1")
    specs = [boson(n_max, "cavity")] + [spin_half(f"s{i}") for i in range(n_spins)]
    basis = build_basis(specs)
    dim = basis.dimension

    num = mode_operator(basis, 0, "number")
    b = mode_operator(basis, 0, "annihilate")
    sum_z = _zero(dim)
    sum_x = _zero(dim)
    for i in range(n_spins):
        sum_z = sum_z + mode_operator(basis, 1 + i, "pauli_z")
        sum_x = sum_x + mode_operator(basis, 1 + i, "pauli_x")

    cavity = (omega_c * num).tocsr()
    spins = (omega_z * sum_z).tocsr()
    coupling = ((g / math.sqrt(n_spins)) * (b + b.getH()) @ sum_x).tocsr()
    h = (cavity + spins + coupling).tocsr()
    return ModelInstance(
        label="dicke",
        basis=basis,
        hamiltonian=h,
        parts={"cavity": cavity, "spins": spins, "coupling": coupling},
        profile=profile_dicke(abs(g), n_spins),
        params={
            "n_spins": n_spins,
            "omega_c": omega_c,
            "omega_z": omega_z,
            "g": g,
            "n_max": n_max,
        },
        walk_parts={0: coupling},
    )


# ---------------------------------------------------------------------------
# 1+1D U(1) lattice gauge theory, staggered fermions, open chain
# ---------------------------------------------------------------------------

def u1_lgt_1d(
    n_sites: int, g_m: float, g_gm: float, g_e: float, field_cap: int
) -> ModelInstance:
    """Staggered fermions on sites, integer rotors on links.

    mass part: g_m sum_x (-1)^x phi_x^dag phi_x;
    hopping part: g_gm sum_x (phi_x^dag U_x phi_{x+1} + h.c.) with U_x the
    link lowering operator; electric part: g_e sum_links E^2.  There is no
    magnetic term in one spatial dimension, so the walk profile carries
    the gauge-matter weight only.
    """
    if n_sites < 2:
        raise ValueError("n_sites must be >= 2")
    specs: list = []
    for x in range(n_sites):
        specs.append(fermion(f"phi{x}"))
        if x < n_sites - 1:
            specs.append(rotor(field_cap, f"link{x}"))
    basis = build_basis(specs)
    dim = basis.dimension
    site = lambda x: 2 * x
    link = lambda x: 2 * x + 1

    h_m = _zero(dim)
    for x in range(n_sites):
        h_m = h_m + g_m * (-1) ** x * mode_operator(basis, site(x), "number")

    h_gm = _zero(dim)
    walk_parts: dict[int, sp.csr_matrix] = {}
    for x in range(n_sites - 1):
        phi_x = mode_operator(basis, site(x), "annihilate")
        phi_y = mode_operator(basis, site(x + 1), "annihilate")
        u_x = mode_operator(basis, link(x), "lower_link")
        term = phi_x.getH() @ u_x @ phi_y
        term = (g_gm * (term + term.getH())).tocsr()
        walk_parts[link(x)] = term
        h_gm = h_gm + term

    h_e = _zero(dim)
    for x in range(n_sites - 1):
        e_x = mode_operator(basis, link(x), "efield")
        h_e = h_e + g_e * (e_x @ e_x)

    parts = {"mass": h_m.tocsr(), "hopping": h_gm.tocsr(), "electric": h_e.tocsr()}
    h = (h_m + h_gm + h_e).tocsr()
    return ModelInstance(
        label="u1_lgt_1d",
        basis=basis,
        hamiltonian=h,
        parts=parts,
        profile=profile_u1(0.0, abs(g_gm)),
        params={
            "n_sites": n_sites,
            "g_m": g_m,
            "g_gm": g_gm,
            "g_e": g_e,
            "field_cap": field_cap,
        },
        walk_parts=walk_parts,
    )


# ---------------------------------------------------------------------------
# commutator norms for the Hamiltonian-truncation bound
# ---------------------------------------------------------------------------

def comm_norm_exact(
    model: ModelInstance, lambda_tilde: int, require_padding: bool = True
) -> float:
    """Spectral norm of [H, Pi H Pi] with Pi the all-mode window [0, lambda_tilde].

    The commutator is supported within two quantum numbers of the window
    edge, so a padding of two levels above lambda_tilde captures it
    exactly; by default the model must provide that padding.  Pass
    require_padding=False to evaluate boundary artifacts at the cutoff
    itself.
    """
    lam = int(lambda_tilde)
    if lam < 0:
        raise ValueError("lambda_tilde must be >= 0")
    if require_padding and model.cutoff < lam + 2:
        raise ValueError(
            f"padding insufficient: cutoff {model.cutoff} < lambda_tilde + 2 = {lam + 2}"
        )
    pi = projector(model.basis, ProjectorSpec(ALL, 0, lam))
    h = model.hamiltonian
    ht = (pi @ h @ pi).tocsr()
    c = h @ ht - ht @ h

    from .propagate import op_norm

    return op_norm(c, tol=1e-12, max_iter=2000)


def comm_norm_analytic(model: ModelInstance, lambda_tilde: int) -> float:
    """Closed-form upper bound 2 (sum over parts of ||part Pi||)^2.

    Always at least the exact commutator norm; cheap at any scale.
    """
    pi = projector(model.basis, ProjectorSpec(ALL, 0, int(lambda_tilde)))

    from .propagate import op_norm

    total = 0.0
    for part in model.parts.values():
        total += op_norm(part @ pi, tol=1e-10)
    return 2.0 * total**2
