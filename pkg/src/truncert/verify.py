"""Bound-versus-empirical experiments on desk-scale finite proxies.

Every experiment emits ExperimentReports whose soundness flag is
computed one way only: empirical <= analytic + engine_slack, with
engine_slack ten times the evolution error budget.  The empirical side
exhausts the initial window exactly (one evolved column per basis state)
whenever dim * |window| is affordable, and falls back to seeded random
probes plus power iteration beyond that; the method used is recorded in
the report notes.

A window grown past the proxy cutoff makes the empirical value
identically zero: the report stays sound and says so, since the finite
proxy obeys the same walk profile as the unbounded Hamiltonian.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
from scipy.special import gammaln

from .bounds import (
    BoundReport,
    HamTruncationQuery,
    TailQuery,
    TruncationQuery,
    hamiltonian_truncation_bound,
    long_time_bound,
    minimal_state_threshold,
    energy_threshold_hubbard_holstein,
    short_time_bound,
    tail_threshold,
)
from .fock_algebra import ALL, ProjectorSpec, projector, window_mask
from .models import ModelInstance, single_mode
from .propagate import (
    COLUMN_CAP,
    EvolveConfig,
    evolve,
    leakage_columns,
    leakage_norm,
    lowest_eigenpairs,
    masked_top_singular,
)
from .walk_profiles import speed_limit

__all__ = [
    "ExperimentReport",
    "engine_slack",
    "verify_state_truncation",
    "verify_hamiltonian_truncation",
    "verify_tail",
    "tail_profile",
    "tail_decay_slope",
    "coherent_oracle_check",
    "CompareRow",
    "ThresholdComparison",
    "compare_thresholds",
]


@dataclass(frozen=True)
class ExperimentReport:
    experiment: str
    inputs: dict
    empirical: float
    analytic: float
    sound: bool
    margin: float
    runtime_s: float
    notes: str = ""


def engine_slack(cfg: EvolveConfig) -> float:
    return 10.0 * cfg.tolerance


def _report(experiment, inputs, empirical, analytic, cfg, t0, notes=""):
    return ExperimentReport(
        experiment=experiment,
        inputs=dict(inputs),
        empirical=float(empirical),
        analytic=float(analytic),
        sound=bool(empirical <= analytic + engine_slack(cfg)),
        margin=float(analytic - empirical),
        runtime_s=time.perf_counter() - t0,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# state-truncation soundness
# ---------------------------------------------------------------------------

def verify_state_truncation(
    model: ModelInstance,
    lambda0: int,
    times: Sequence[float],
    mode: str = "per_mode",
    deltas: Sequence[int] = (2, 3, 4, 5),
    cfg: EvolveConfig | None = None,
    include_short_time: bool = True,
    column_cap: int = COLUMN_CAP,
) -> list[ExperimentReport]:
    """Leakage norms against the short- and long-time bounds.

    For each time and each window growth delta, the evolved initial
    window [0, lambda0] is tested against the matching escape window:
    per truncatable mode for mode='per_mode' (the bare bounds), or the
    all-mode window for mode='all' (bounds carry the union factor
    sqrt(number of truncatable modes)).
    """
    if mode not in ("per_mode", "all"):
        raise ValueError("mode must be 'per_mode' or 'all'")
    cfg = cfg or EvolveConfig()
    basis = model.basis
    trunc = basis.truncatable_modes
    union = math.sqrt(len(trunc)) if trunc else 1.0
    window0 = ProjectorSpec(ALL, 0, int(lambda0))
    n0 = int(window_mask(basis, window0).sum())
    exact = basis.dimension * n0 <= column_cap
    method = (
        "exact column sweep"
        if exact
        else "random window probes + power iteration"
    )
    cutoff = model.cutoff
    reports: list[ExperimentReport] = []

    def emit(kind, t, delta, lam, bound, emp_fn, nu=None):
        t0 = time.perf_counter()
        notes = method
        if lam >= cutoff:
            empirical = 0.0
            notes += "; window exceeds proxy cutoff, empirical trivially 0"
        else:
            empirical = emp_fn()
        inputs = {
            "model": model.label,
            "lambda0": int(lambda0),
            "t": float(t),
            "delta": int(delta),
            "window": int(lam),
            "mode": "all" if nu is None else int(nu),
        }
        analytic = min(1.0, union * bound) if nu is None else bound
        reports.append(_report(kind, inputs, empirical, analytic, cfg, t0, notes))

    for t in times:
        cols = None
        if exact:
            cols, _ = leakage_columns(basis, model.hamiltonian, window0, t, cfg)

        def empirical_at(lam, nu):
            spec = (
                ProjectorSpec(ALL, 0, lam)
                if nu is None
                else ProjectorSpec(nu, 0, lam)
            )
            if cols is not None:
                return masked_top_singular(cols, window_mask(basis, spec))
            return leakage_norm(
                basis, model.hamiltonian, window0, spec, t, cfg, column_cap=column_cap
            )

        within_validity = abs(t) <= speed_limit(model.profile, lambda0) + 1e-12
        for delta in deltas:
            if include_short_time and within_validity and delta >= 1:
                lam_s = int(lambda0) + int(delta) - 1
                bnd = short_time_bound(model.profile, lambda0, delta, t)
                if mode == "per_mode":
                    for nu in trunc:
                        emit("state_short", t, delta, lam_s, bnd,
                             lambda lam=lam_s, nu=nu: empirical_at(lam, nu), nu=nu)
                else:
                    emit("state_short", t, delta, lam_s, bnd,
                         lambda lam=lam_s: empirical_at(lam, None))
            if delta >= 2:
                rep = long_time_bound(model.profile, lambda0, delta, t)
                if mode == "per_mode":
                    for nu in trunc:
                        emit("state_long", t, delta, rep.lambda_, rep.bound,
                             lambda lam=rep.lambda_, nu=nu: empirical_at(lam, nu), nu=nu)
                else:
                    emit("state_long", t, delta, rep.lambda_, rep.bound,
                         lambda lam=rep.lambda_: empirical_at(lam, None))
    return reports


# ---------------------------------------------------------------------------
# Hamiltonian-truncation soundness
# ---------------------------------------------------------------------------

def verify_hamiltonian_truncation(
    model_factory: Callable[[int], ModelInstance],
    n_max: int,
    lambda0: int,
    lambda_tilde: int,
    t: float,
    cfg: EvolveConfig | None = None,
    check_padding: bool = False,
) -> ExperimentReport:
    """Evolution difference under Hamiltonian truncation versus its bound.

    The factory builds the model at a requested cutoff; the truncated
    Hamiltonian Pi H Pi lives on the same padded space so the two
    evolutions subtract directly.  With check_padding the empirical value
    is recomputed at double the cutoff and the shift goes in the notes.
    """
    cfg = cfg or EvolveConfig()
    t0 = time.perf_counter()

    def empirical_at(nm: int) -> float:
        model = model_factory(nm)
        if model.cutoff < lambda_tilde + 2:
            raise ValueError(
                f"padding insufficient: cutoff {model.cutoff} < lambda_tilde + 2"
            )
        basis = model.basis
        window0 = ProjectorSpec(ALL, 0, int(lambda0))
        pi = projector(basis, ProjectorSpec(ALL, 0, int(lambda_tilde)))
        h_trunc = (pi @ model.hamiltonian @ pi).tocsr()
        cols_full, _ = leakage_columns(basis, model.hamiltonian, window0, t, cfg)
        cols_trunc, _ = leakage_columns(basis, h_trunc, window0, t, cfg)
        keep_none = np.zeros(basis.dimension, dtype=bool)
        return masked_top_singular(cols_full - cols_trunc, keep_none)

    model = model_factory(n_max)
    empirical = empirical_at(n_max)
    notes = "exact column sweep"
    if check_padding:
        shifted = empirical_at(2 * n_max)
        notes += f"; padding doubling shifts empirical by {abs(shifted - empirical):.3e}"
    query = TruncationQuery(lambda0=int(lambda0), time=float(t), epsilon=1.0)
    hq = HamTruncationQuery(
        lambda_tilde=int(lambda_tilde),
        n_modes=len(model.basis.truncatable_modes),
        comm_norm=model.comm_norm,
        query=query,
    )
    analytic = hamiltonian_truncation_bound(model.profile, hq)
    inputs = {
        "model": model.label,
        "n_max": int(n_max),
        "lambda0": int(lambda0),
        "lambda_tilde": int(lambda_tilde),
        "t": float(t),
    }
    return _report("hamiltonian_truncation", inputs, empirical, analytic, cfg, t0, notes)


# ---------------------------------------------------------------------------
# eigenstate tail soundness
# ---------------------------------------------------------------------------

def _ground_state_checked(model: ModelInstance):
    vals, vecs = lowest_eigenpairs(model.hamiltonian, k=2)
    gap = float(vals[1] - vals[0])
    if gap <= 1e-8:
        raise ValueError(
            f"ground space nearly degenerate: E1 - E0 = {gap:.3e} <= 1e-8"
        )
    psi = vecs[:, 0]
    return psi / np.linalg.norm(psi), gap


def verify_tail(
    model: ModelInstance,
    epsilons: Sequence[float],
    cfg: EvolveConfig | None = None,
) -> list[ExperimentReport]:
    """Ground-state quantum-number tails at the certified windows.

    Computes the gapped ground state, its mean quantum number lambda_bar
    (the largest per-mode mean), and for each epsilon the tail weight
    outside the tail_threshold window, which must come in below epsilon.
    """
    cfg = cfg or EvolveConfig()
    psi, gap = _ground_state_checked(model)
    basis = model.basis
    trunc = basis.truncatable_modes
    weights = np.abs(psi) ** 2
    lambda_bar = max(
        (float(basis.mode_qn(nu) @ weights) for nu in trunc), default=0.0
    )
    reports = []
    for eps in epsilons:
        t0 = time.perf_counter()
        rep = tail_threshold(model.profile, TailQuery(lambda_bar, gap, float(eps)))
        mask = window_mask(basis, ProjectorSpec(ALL, 0, rep.lambda_))
        empirical = float(np.linalg.norm(psi[~mask]))
        notes = (
            f"lambda_bar={lambda_bar:.6g}, gap={gap:.6g}, "
            f"delta_used={rep.delta_used}, certified bound={rep.bound:.3e}"
        )
        if rep.lambda_ >= model.cutoff:
            notes += "; window exceeds proxy cutoff, empirical trivially 0"
        inputs = {
            "model": model.label,
            "epsilon": float(eps),
            "window": int(rep.lambda_),
        }
        reports.append(_report("tail", inputs, empirical, float(eps), cfg, t0, notes))
    return reports


def tail_profile(model: ModelInstance, lambda_grid: Sequence[int]) -> list[tuple[int, float]]:
    """Empirical ground-state tail weight outside [0, lam] per grid window."""
    psi, _ = _ground_state_checked(model)
    basis = model.basis
    out = []
    for lam in lambda_grid:
        mask = window_mask(basis, ProjectorSpec(ALL, 0, int(lam)))
        out.append((int(lam), float(np.linalg.norm(psi[~mask]))))
    return out


def tail_decay_slope(profile_points: Sequence[tuple[int, float]], floor: float = 1e-13) -> float:
    """Regression slope of log tail against sqrt(window) above the noise floor."""
    xs = [math.sqrt(lam) for lam, tail in profile_points if tail > floor]
    ys = [math.log(tail) for _, tail in profile_points if tail > floor]
    if len(xs) < 2:
        raise ValueError("not enough tail points above the noise floor")
    return float(np.polyfit(xs, ys, 1)[0])


# ---------------------------------------------------------------------------
# coherent-state oracle
# ---------------------------------------------------------------------------

def coherent_oracle_check(
    t_grid: Sequence[float] = (0.5, 1.0, 2.0, 3.0),
    cfg: EvolveConfig | None = None,
) -> ExperimentReport:
    """Occupation statistics of the driven vacuum against the closed form.

    Evolving H = b + b^dag from the vacuum for time T yields occupation
    probabilities Poisson(T^2).  The report's empirical value is the
    worst pointwise pmf deviation over the grid (target 1e-8); the worst
    mean deviation from T^2 (target 1e-6) rides in the notes and both
    must hold for the report to be sound.
    """
    cfg = cfg or EvolveConfig(tolerance=1e-12)
    t0 = time.perf_counter()
    worst_pmf = 0.0
    worst_mean = 0.0
    for t in t_grid:
        n_max = int(math.ceil(4.0 * t * t + 40.0))
        model = single_mode(1.0, 0.0, n_max)
        psi0 = np.zeros(model.dimension, dtype=complex)
        psi0[0] = 1.0
        psi = evolve(model.hamiltonian, psi0, float(t), cfg)
        probs = np.abs(psi) ** 2
        n = np.arange(model.dimension)
        lam = float(t) * float(t)
        if lam == 0.0:
            pois = np.zeros_like(probs)
            pois[0] = 1.0
        else:
            pois = np.exp(-lam + n * math.log(lam) - gammaln(n + 1.0))
        worst_pmf = max(worst_pmf, float(np.abs(probs - pois).max()))
        worst_mean = max(worst_mean, abs(float(n @ probs) - lam))
    inputs = {"t_grid": [float(t) for t in t_grid]}
    notes = f"worst mean deviation {worst_mean:.3e} (target 1e-6)"
    rep = _report("coherent_oracle", inputs, worst_pmf, 1e-8, cfg, t0, notes)
    if worst_mean > 1e-6:
        rep = replace(rep, sound=False)
    return rep


# ---------------------------------------------------------------------------
# threshold comparison curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompareRow:
    t: float
    lambda_ours: int
    lambda_energy: int
    delta_used: int


@dataclass(frozen=True)
class ThresholdComparison:
    rows: tuple[CompareRow, ...]
    crossover_t: float | None


def compare_thresholds(
    n_modes: int,
    epsilon: float,
    lambda0: int,
    times: Sequence[float],
    omega0: float = 1.0,
    g: float = 0.5,
    delta_max: int = 512,
) -> ThresholdComparison:
    """Walk-bound thresholds against the energy-conservation recipe.

    Both sides meet the same global target: the walk threshold runs at
    the per-mode budget epsilon / sqrt(n_modes) (union bound over modes),
    and the energy threshold applies its per-site Markov step at the same
    split internally.  The energy side is time-independent; the crossover
    is the first grid time where the walk threshold stops winning.
    """
    from .walk_profiles import profile_hubbard_holstein

    profile = profile_hubbard_holstein(abs(g))
    eps_mode = min(1.0, epsilon / math.sqrt(n_modes))
    lam_energy = energy_threshold_hubbard_holstein(
        omega0=omega0,
        g=g,
        n_sites=n_modes,
        lambda0=int(lambda0),
        e_f_ground=0.0,
        e_total=None,
        epsilon=epsilon,
    )
    rows = []
    crossover = None
    for t in times:
        if t == 0:
            rep = BoundReport(lambda_=int(lambda0), bound=0.0, delta_used=0)
        else:
            rep = minimal_state_threshold(
                profile,
                TruncationQuery(lambda0=int(lambda0), time=float(t), epsilon=eps_mode),
                delta_max=delta_max,
            )
        rows.append(
            CompareRow(
                t=float(t),
                lambda_ours=int(rep.lambda_),
                lambda_energy=int(lam_energy),
                delta_used=int(rep.delta_used),
            )
        )
        if crossover is None and rep.lambda_ >= lam_energy:
            crossover = float(t)
    return ThresholdComparison(rows=tuple(rows), crossover_t=crossover)
