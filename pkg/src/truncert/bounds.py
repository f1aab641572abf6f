"""Closed-form leakage bounds and truncation thresholds.

Every number produced here is a certified upper bound built from a walk
profile (chi, r).  The chain is:

* a one-step bound: evolving for |t| <= 1/(2 chi (L0+1)**r) leaks at
  most 2**(1-D) * (D!)**(-(1-r)) outside a window grown by D,
* an adaptive schedule chaining such steps with the window growing by
  (D-1) per step, giving a long-time bound J * 2**(1-D) * (D!)**(-(1-r))
  after J steps,
* threshold searches inverting those bounds (smallest window achieving a
  target error), plus the commutator-based Hamiltonian-truncation bound,
  the energy-conservation competitor thresholds, and the eigenstate tail
  threshold.

All functions are pure arithmetic: same inputs, bit-identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .walk_profiles import WalkProfile, speed_limit

__all__ = [
    "TruncationQuery",
    "Schedule",
    "BoundReport",
    "HamTruncationQuery",
    "TailQuery",
    "TailReport",
    "ValidityError",
    "CapExceededError",
    "DELTA_MAX",
    "step_bound",
    "short_time_bound",
    "adaptive_schedule",
    "long_time_bound",
    "leakage_bound_at",
    "minimal_state_threshold",
    "hamiltonian_truncation_bound",
    "minimal_hamiltonian_threshold",
    "energy_threshold_single_mode",
    "energy_threshold_hubbard_holstein",
    "tail_threshold",
]

#: Default cap on the per-step window growth D scanned by searches.  The
#: per-step factor is evaluated in log space, so D far beyond the float
#: factorial limit (~170) stays usable.
DELTA_MAX = 512

#: Default cap on threshold searches over the window size.
LAMBDA_CAP = 1 << 24


class ValidityError(ValueError):
    """Raised when a bound is queried outside its validity window."""

    def __init__(self, message: str, max_time: float):
        super().__init__(message)
        self.max_time = max_time


class CapExceededError(RuntimeError):
    """A threshold search hit its configured cap without qualifying."""


# ---------------------------------------------------------------------------
# queries and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncationQuery:
    """Initial window cap lambda0, evolution time, and target error."""

    lambda0: int
    time: float
    epsilon: float

    def __post_init__(self):
        if self.lambda0 < 0 or int(self.lambda0) != self.lambda0:
            raise ValueError("lambda0 must be a nonnegative integer")
        if self.time < 0:
            raise ValueError("time must be >= 0")
        if not 0 < self.epsilon <= 1:
            raise ValueError("epsilon must lie in (0, 1]")


@dataclass(frozen=True)
class Schedule:
    """Adaptive evolution schedule: step times t_j and window caps lambda_j."""

    delta: int
    steps: tuple[tuple[float, int], ...]
    note: str = ""

    @property
    def j_count(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class BoundReport:
    """A certified (window, bound) pair with the step growth that produced it."""

    lambda_: int
    bound: float
    delta_used: int
    details: str = ""


@dataclass(frozen=True)
class HamTruncationQuery:
    """Inputs of the Hamiltonian-truncation bound.

    comm_norm maps a window cap L to an upper bound on the spectral norm
    of the commutator [H, Pi H Pi] at that cap; it must be nonnegative
    and nondecreasing.  n_modes counts the truncated modes/links (the
    union-bound factor enters as sqrt(n_modes)).
    """

    lambda_tilde: int
    n_modes: int
    comm_norm: Callable[[int], float]
    query: TruncationQuery

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError("n_modes must be >= 1")
        if int(self.lambda_tilde) != self.lambda_tilde:
            raise ValueError("lambda_tilde must be an integer")


@dataclass(frozen=True)
class TailQuery:
    """Inputs of the eigenstate tail threshold."""

    lambda_bar: float
    gap: float
    epsilon: float

    def __post_init__(self):
        if not math.isfinite(self.lambda_bar) or self.lambda_bar < 0:
            raise ValueError("lambda_bar must be finite and >= 0")
        if self.gap <= 0:
            raise ValueError("gap must be > 0")
        if not 0 < self.epsilon <= 1:
            raise ValueError("epsilon must lie in (0, 1]")


@dataclass(frozen=True)
class TailReport:
    """Tail threshold with the internal filter parameters that produced it."""

    lambda_: int
    bound: float
    delta_used: int
    sigma: float
    t_window: float
    overlap_floor: float
    details: str = ""


# ---------------------------------------------------------------------------
# per-step and long-time leakage bounds
# ---------------------------------------------------------------------------

def _log_step_bound(delta: int, r: float) -> float:
    """log of 2**(1-delta) * (delta!)**(-(1-r)), safe for large delta."""
    return (1.0 - delta) * math.log(2.0) - (1.0 - r) * math.lgamma(delta + 1.0)


def step_bound(delta: int, r: float) -> float:
    """The one-step leakage factor 2**(1-delta) * (delta!)**(-(1-r))."""
    if delta < 1 or int(delta) != delta:
        raise ValueError("delta must be an integer >= 1")
    if not 0 <= r < 1:
        raise ValueError("r must lie in [0, 1)")
    delta = int(delta)
    # linear arithmetic keeps small cases bit-exact; factorial(151) still
    # fits in a float, beyond that fall back to the log form
    if delta <= 150:
        return 2.0 ** (1 - delta) / float(math.factorial(delta)) ** (1.0 - r)
    return math.exp(_log_step_bound(delta, r))


def short_time_bound(profile: WalkProfile, lambda0: int, delta: int, t: float) -> float:
    """Leakage bound outside the open window (-lambda0-delta, lambda0+delta).

    Valid only for |t| <= 1/(2 chi (lambda0+1)**r); outside that window a
    ValidityError carrying the maximal admissible time is raised.
    """
    if lambda0 < 0 or int(lambda0) != lambda0:
        raise ValueError("lambda0 must be a nonnegative integer")
    if delta < 1 or int(delta) != delta:
        raise ValueError("delta must be an integer >= 1")
    t_max = speed_limit(profile, lambda0)
    if abs(t) > t_max:
        raise ValidityError(
            f"|t| = {abs(t)} exceeds the validity window {t_max}", max_time=t_max
        )
    return step_bound(int(delta), profile.r)


def adaptive_schedule(
    profile: WalkProfile, lambda0: int, delta: int, horizon: float
) -> Schedule:
    """Chain one-step windows until the accumulated time reaches horizon.

    Each step advances time by the current speed limit and the window cap
    by (delta - 1).  The iteration stops at the first step time >= horizon,
    so the final step may overshoot.  A zero horizon yields no steps; a
    vanishing chi cannot grow the window and returns a single flagged step.
    """
    if lambda0 < 0 or int(lambda0) != lambda0:
        raise ValueError("lambda0 must be a nonnegative integer")
    if delta <= 1 or int(delta) != delta:
        raise ValueError("delta must be an integer > 1")
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if horizon == 0:
        return Schedule(delta=int(delta), steps=())
    if profile.chi == 0.0:
        lam1 = int(lambda0) + (int(delta) - 1)
        return Schedule(
            delta=int(delta),
            steps=((math.inf, lam1),),
            note="no growth possible: chi = 0",
        )
    steps: list[tuple[float, int]] = []
    t = 0.0
    lam = int(lambda0)
    j = 0
    while t < horizon:
        t += 1.0 / (2.0 * profile.chi * (lam + 1.0) ** profile.r)
        j += 1
        lam = int(lambda0) + j * (int(delta) - 1)
        steps.append((t, lam))
    return Schedule(delta=int(delta), steps=tuple(steps))


def long_time_bound(
    profile: WalkProfile, lambda0: int, delta: int, t: float
) -> BoundReport:
    """Certified leakage bound for arbitrary times.

    The window grows to lambda = lambda0 + J*(delta-1) where J counts the
    adaptive steps needed to cover time t; the leakage bound is J times
    the one-step factor, capped at 1.
    """
    if lambda0 < 0 or int(lambda0) != lambda0:
        raise ValueError("lambda0 must be a nonnegative integer")
    if delta <= 1 or int(delta) != delta:
        raise ValueError("delta must be an integer > 1")
    if t < 0:
        raise ValueError("t must be >= 0")
    delta = int(delta)
    lambda0 = int(lambda0)
    if t == 0.0 or profile.chi == 0.0:
        return BoundReport(lambda_=lambda0, bound=0.0, delta_used=delta)
    one_minus_r = 1.0 - profile.r
    inner = lambda0**one_minus_r + 2.0 * profile.chi * t * one_minus_r * (delta - 1)
    # any positive time needs at least one step; the max(1, .) also guards
    # against the lambda0 power round-trip landing slightly below lambda0
    j_count = max(1, math.ceil((inner ** (1.0 / one_minus_r) - lambda0) / (delta - 1)))
    lam = lambda0 + j_count * (delta - 1)
    bound = min(1.0, j_count * step_bound(delta, profile.r))
    return BoundReport(lambda_=lam, bound=bound, delta_used=delta)


def _leakage_min(
    profile: WalkProfile, lambda0: int, lam: int, t: float, delta_max: int
) -> tuple[float, int]:
    """Best long-time bound over delta whose grown window fits inside lam.

    Returns (bound, delta); (1.0, 0) when no delta qualifies.
    """
    best = 1.0
    best_delta = 0
    for delta in range(2, delta_max + 1):
        rep = long_time_bound(profile, lambda0, delta, t)
        if rep.lambda_ <= lam and rep.bound < best:
            best = rep.bound
            best_delta = delta
            if best == 0.0:
                break
    return best, best_delta


def leakage_bound_at(
    profile: WalkProfile,
    lambda0: int,
    lam: int,
    t: float,
    delta_max: int = DELTA_MAX,
) -> float:
    """Certified leakage outside [-lam, lam] after time t, starting inside lambda0.

    Minimizes the long-time bound over all step growths delta whose grown
    window stays within lam.  Capped at 1; returns 1 when no delta
    qualifies (the window is too tight for the elapsed time).
    """
    if lam < lambda0:
        raise ValueError("lam must be >= lambda0")
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return 0.0
    bound, _ = _leakage_min(profile, int(lambda0), int(lam), t, delta_max)
    return bound


# ---------------------------------------------------------------------------
# threshold searches
# ---------------------------------------------------------------------------

def minimal_state_threshold(
    profile: WalkProfile,
    query: TruncationQuery,
    optimize_lambda: bool = False,
    delta_max: int = DELTA_MAX,
) -> BoundReport:
    """Smallest certified window for evolving a state for query.time.

    Scans delta = 2, 3, ... and by default returns the first delta whose
    long-time bound meets query.epsilon (the smallest-growth recipe).
    With optimize_lambda the scan continues through delta_max and returns
    the qualifying delta with the smallest window instead; the details
    field records both choices.
    """
    first: BoundReport | None = None
    best: BoundReport | None = None
    for delta in range(2, delta_max + 1):
        rep = long_time_bound(profile, query.lambda0, delta, query.time)
        if rep.bound <= query.epsilon:
            if first is None:
                first = rep
                if not optimize_lambda:
                    return rep
            if best is None or rep.lambda_ < best.lambda_:
                best = rep
    if first is None:
        raise CapExceededError(
            f"no delta <= {delta_max} reaches epsilon = {query.epsilon} "
            f"at t = {query.time}"
        )
    assert best is not None
    return BoundReport(
        lambda_=best.lambda_,
        bound=best.bound,
        delta_used=best.delta_used,
        details=(
            f"window-minimizing delta={best.delta_used}; "
            f"smallest-delta choice: delta={first.delta_used}, lambda={first.lambda_}"
        ),
    )


def hamiltonian_truncation_bound(profile: WalkProfile, hquery: HamTruncationQuery) -> float:
    """Evolution error bound for truncating the Hamiltonian at lambda_tilde.

    Bounds ||(exp(-itH~) - exp(-itH)) Pi_all|| by the crude time integral
    (t^2/2) of the commutator norm times the leakage reachable two levels
    inside the truncation window, with the sqrt(n_modes) union-bound
    factor.  Requires lambda_tilde >= lambda0 + 2 so that the truncated
    and full Hamiltonians agree on the initial window.
    """
    q = hquery.query
    lam_t = int(hquery.lambda_tilde)
    if lam_t < q.lambda0 + 2:
        raise ValueError(
            f"lambda_tilde = {lam_t} must be >= lambda0 + 2 = {q.lambda0 + 2}"
        )
    if q.time == 0:
        return 0.0
    comm = hquery.comm_norm(lam_t)
    if comm < 0:
        raise ValueError("comm_norm must be nonnegative")
    leak = leakage_bound_at(profile, q.lambda0, lam_t - 2, q.time)
    return 0.5 * q.time**2 * comm * math.sqrt(hquery.n_modes) * leak


def _smallest_qualifying(
    predicate: Callable[[int], bool], lo: int, cap: int, what: str
) -> int:
    """Smallest integer >= lo satisfying predicate, by doubling + bisection.

    Assumes the failure region below the answer is contiguous (holds for
    the monotone-in-window bounds searched here); a final backward walk
    guards against plateau edges.
    """
    if predicate(lo):
        return lo
    hi = max(lo + 1, 2 * lo)
    while not predicate(hi):
        if hi >= cap:
            raise CapExceededError(f"{what}: no window <= {cap} qualifies")
        hi = min(2 * hi, cap)
    lo_fail = lo
    while hi - lo_fail > 1:
        mid = (hi + lo_fail) // 2
        if predicate(mid):
            hi = mid
        else:
            lo_fail = mid
    while hi - 1 > lo and predicate(hi - 1):
        hi -= 1
    return hi


def minimal_hamiltonian_threshold(
    profile: WalkProfile,
    query: TruncationQuery,
    n_modes: int,
    comm_norm: Callable[[int], float],
    lambda_cap: int = LAMBDA_CAP,
    delta_max: int = DELTA_MAX,
) -> BoundReport:
    """Smallest truncation window certifying the evolution to query.epsilon."""

    def ok(lam_t: int) -> bool:
        hq = HamTruncationQuery(lam_t, n_modes, comm_norm, query)
        return hamiltonian_truncation_bound(profile, hq) <= query.epsilon

    lam_t = _smallest_qualifying(
        ok, query.lambda0 + 2, lambda_cap, "hamiltonian threshold"
    )
    hq = HamTruncationQuery(lam_t, n_modes, comm_norm, query)
    achieved = hamiltonian_truncation_bound(profile, hq)
    _, delta = _leakage_min(profile, query.lambda0, lam_t - 2, query.time, delta_max)
    return BoundReport(lambda_=lam_t, bound=achieved, delta_used=delta)


# ---------------------------------------------------------------------------
# energy-conservation competitor thresholds
# ---------------------------------------------------------------------------

def energy_threshold_single_mode(omega0: float, lambda0: int, epsilon: float) -> int:
    """Energy-based window for a single driven oscillator.

    Uses energy conservation plus a Chebyshev-type argument: the smallest
    L with L + 1 >= ((2/omega0 + sqrt(lambda0+1))**2 - 1) / epsilon**2.
    """
    if omega0 <= 0:
        raise ValueError("omega0 must be > 0")
    if lambda0 < 0 or int(lambda0) != lambda0:
        raise ValueError("lambda0 must be a nonnegative integer")
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    need = ((2.0 / omega0 + math.sqrt(lambda0 + 1.0)) ** 2 - 1.0) / epsilon**2
    return max(0, math.ceil(need - 1.0))


def energy_threshold_hubbard_holstein(
    omega0: float,
    g: float,
    n_sites: int,
    lambda0: int,
    e_f_ground: float,
    e_total: float | None,
    epsilon: float,
) -> int:
    """Energy-based per-site window for the Hubbard-Holstein chain.

    Solves  omega0*n - 2|g|*sqrt(n+1) = e_total - e_f_ground
            + (n_sites-1)*(g^2/omega0 + omega0)
    for the per-site mean occupation n (quadratic in sqrt(n+1), larger
    root), then applies Markov's inequality per site at error
    epsilon/sqrt(n_sites): smallest L with L+1 >= n*n_sites/epsilon**2.

    When e_total is None it is replaced by the analytic initial-state
    estimate e_f_ground + n_sites*(omega0*lambda0 + 2|g|*sqrt(lambda0+1))
    (fermionic ground state tensored with at most lambda0 quanta per
    mode).  A negative right-hand side returns 0: the energy budget
    already pins the occupation below one quantum.
    """
    if omega0 <= 0:
        raise ValueError("omega0 must be > 0")
    if n_sites < 1:
        raise ValueError("n_sites must be >= 1")
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    if e_total is None:
        e_total = e_f_ground + n_sites * (
            omega0 * lambda0 + 2.0 * abs(g) * math.sqrt(lambda0 + 1.0)
        )
    rhs = e_total - e_f_ground + (n_sites - 1) * (g**2 / omega0 + omega0)
    if rhs < 0:
        return 0
    disc = g**2 + omega0 * (omega0 + rhs)
    if disc <= 0:
        return 0
    u = (abs(g) + math.sqrt(disc)) / omega0
    n = u**2 - 1.0
    if n <= 0:
        return 0
    need = n * n_sites / epsilon**2
    return max(0, math.ceil(need - 1.0))


# ---------------------------------------------------------------------------
# eigenstate tail threshold
# ---------------------------------------------------------------------------

#: Proof-level lower bound on the retained-window overlap of the filtered
#: eigenstate; the leakage budget is amplified by its inverse.
OVERLAP_FLOOR = 1.0 / (2.0 * math.sqrt(2.0))


def tail_threshold(
    profile: WalkProfile,
    tquery: TailQuery,
    delta_max: int = DELTA_MAX,
    lambda_cap: int = LAMBDA_CAP,
) -> TailReport:
    """Window outside which a gapped ground state's quantum number tail is < epsilon.

    Concrete three-way error split over the Gaussian-filter construction:

    * filter width sigma such that 4*sqrt(2)*exp(-gap^2/(2 sigma^2)) <= eps/3,
    * time cutoff T such that 4*sqrt(2)*sqrt(2/pi)*exp(-sigma^2 T^2/2) <= eps/3,
    * window L as the smallest integer with
      (1/OVERLAP_FLOOR) * leakage_bound_at(ceil(2*lambda_bar), L, T) <= eps/3.

    The Markov core ceil(2*lambda_bar) anchors the scan; the reported
    bound is the sum of the three achieved terms (<= epsilon).
    """
    eps3 = tquery.epsilon / 3.0
    c1 = 4.0 * math.sqrt(2.0)
    sigma = tquery.gap / math.sqrt(2.0 * math.log(c1 / eps3))
    c2 = c1 * math.sqrt(2.0 / math.pi)
    t_window = math.sqrt(2.0 * math.log(c2 / eps3)) / sigma
    lambda0 = math.ceil(2.0 * tquery.lambda_bar)

    def ok(lam: int) -> bool:
        leak = leakage_bound_at(profile, lambda0, lam, t_window, delta_max)
        return leak / OVERLAP_FLOOR <= eps3

    lam = _smallest_qualifying(ok, lambda0, lambda_cap, "tail threshold")
    leak, delta = _leakage_min(profile, lambda0, lam, t_window, delta_max)
    achieved = 2.0 * eps3 + leak / OVERLAP_FLOOR
    return TailReport(
        lambda_=lam,
        bound=achieved,
        delta_used=delta,
        sigma=sigma,
        t_window=t_window,
        overlap_floor=OVERLAP_FLOOR,
        details=f"markov core lambda0={lambda0}",
    )
