"""Multi-pass driver with step-size schedules and online certificates.

Each pass i runs streaming local search with its own beta. Two schedules
come with worst-case convergence targets:

* ``matroid-harmonic``: beta_i = 1/i, factor 2(1 + 1/i) after pass i for
  a single matroid constraint;
* ``matchoid-recurrence``: beta_1 = 1 and
  beta_i = (g - 1 - p) / (g - 1 + p) where g follows the recurrence
  g_1 = 4p, g_i = 4p g(g - 1) / (g - 1 + p)^2, giving factor
  p + 1 + 4p/i after pass i for any p-matchoid.

Independently of the schedule, the driver measures each pass's progress
ratio delta_i = f(S_{i-1}) / f(S_i) and certifies, online, that

    f(OPT) <= min{gamma_{i-1} * delta_i,
                  (p/beta_i + p - 1)(1 - delta_i) + p + beta_i p + 1}
              * f(S_i) + k * alpha.

The certified factor is available after every pass, so a run can stop
early once it reaches a target.
"""

import math
from random import Random

from .errors import PreconditionError
from .streaming import SolutionState, streaming_pass

# Substitute step when the recurrence would go non-positive (only possible
# when the incoming factor is already below p + 1); extra passes can then
# only improve the solution, so the factor is frozen.
BETA_MIN = 1e-3


class Schedule:
    """Per-pass beta assignment; ``p`` must match the constraint for the
    recurrence kind."""

    __slots__ = ("kind", "p", "beta", "betas")

    def __init__(self, kind, p=1, beta=None, betas=None):
        if kind not in ("matroid-harmonic", "matchoid-recurrence", "fixed", "custom"):
            raise PreconditionError(f"unknown schedule kind: {kind}")
        self.kind = kind
        self.p = int(p)
        self.beta = None if beta is None else float(beta)
        self.betas = None if betas is None else tuple(float(b) for b in betas)
        if kind == "fixed" and self.beta is None:
            raise PreconditionError("fixed schedule needs a beta")
        if kind == "custom" and not self.betas:
            raise PreconditionError("custom schedule needs a beta list")

    @staticmethod
    def matroid_harmonic():
        return Schedule("matroid-harmonic", p=1)

    @staticmethod
    def matchoid_recurrence(p):
        return Schedule("matchoid-recurrence", p=p)

    @staticmethod
    def fixed(beta, p=1):
        return Schedule("fixed", p=p, beta=beta)

    @staticmethod
    def custom(betas, p=1):
        return Schedule("custom", p=p, betas=betas)


def gamma_recurrence_step(p, gamma_prev):
    """Next worst-case factor: 4p * g(g - 1) / (g - 1 + p)^2."""
    return 4.0 * p * gamma_prev * (gamma_prev - 1.0) / (gamma_prev - 1.0 + p) ** 2


def worst_case_gamma(schedule, i):
    """Closed-form factor guaranteed after pass i (inf when the schedule
    has no convergence target)."""
    if i < 1:
        raise PreconditionError("pass index starts at 1")
    if schedule.kind == "matroid-harmonic":
        return 2.0 * (1.0 + 1.0 / i)
    if schedule.kind == "matchoid-recurrence":
        return schedule.p + 1.0 + 4.0 * schedule.p / i
    return math.inf


def schedule_beta(schedule, i, gamma_prev=None):
    """Beta for pass i; the recurrence kind needs the previous factor."""
    if i < 1:
        raise PreconditionError("pass index starts at 1")
    if schedule.kind == "fixed":
        return schedule.beta
    if schedule.kind == "custom":
        if i > len(schedule.betas):
            raise PreconditionError(f"custom schedule ran out at pass {i}")
        return schedule.betas[i - 1]
    if schedule.kind == "matroid-harmonic":
        return 1.0 / i
    if i == 1:
        return 1.0
    if gamma_prev is None:
        raise PreconditionError("the recurrence schedule needs the previous factor")
    beta = (gamma_prev - 1.0 - schedule.p) / (gamma_prev - 1.0 + schedule.p)
    return beta if beta > 0.0 else BETA_MIN


def certified_gamma(i, gamma_prev, beta, delta, p):
    """Online factor after pass i from the two-branch bound.

    Branch one carries the previous certificate through the measured
    progress; branch two bounds the pass on its own. Pass 1 (or any pass
    following a degenerate one) has no usable first branch.
    """
    if i < 1:
        raise PreconditionError("pass index starts at 1")
    if gamma_prev is not None and math.isfinite(gamma_prev) and delta > 0.0:
        carried = gamma_prev * delta
    else:
        carried = math.inf
    if beta > 0.0:
        single = (p / beta + p - 1.0) * (1.0 - delta) + p + beta * p + 1.0
    else:
        single = math.inf
    return min(carried, single)


class GuaranteeCertificate:
    """Certified claim after one pass: f(OPT) <= gamma * f(S_i) + slack."""

    __slots__ = ("pass_index", "beta", "delta", "gamma_certified", "k_alpha_slack")

    def __init__(self, pass_index, beta, delta, gamma_certified, k_alpha_slack):
        self.pass_index = pass_index
        self.beta = beta
        self.delta = delta
        self.gamma_certified = gamma_certified
        self.k_alpha_slack = k_alpha_slack

    def opt_upper_bound(self, f_s):
        return self.gamma_certified * f_s + self.k_alpha_slack

    def __repr__(self):
        return (f"GuaranteeCertificate(pass={self.pass_index}, beta={self.beta:.6g}, "
                f"delta={self.delta:.6g}, gamma={self.gamma_certified:.6g})")


class MultipassResult:
    __slots__ = ("solution", "pass_results", "certificates", "f_final",
                 "stored_peak", "passes_run", "state")

    def __init__(self, solution, pass_results, certificates, f_final,
                 stored_peak, passes_run, state):
        self.solution = solution
        self.pass_results = pass_results
        self.certificates = certificates
        self.f_final = f_final
        self.stored_peak = stored_peak
        self.passes_run = passes_run
        self.state = state


def multipass_run(oracle, mp, stream, schedule, passes, alpha=0.0, *,
                  target_gamma=None, debug=False, trace=None,
                  per_pass_shuffle_seed=None):
    """Chain streaming passes, certifying a factor after each.

    The solution of each pass seeds the next; the stream order is fixed
    unless ``per_pass_shuffle_seed`` asks for a fresh permutation per
    pass. Stops early once the certified factor reaches ``target_gamma``.
    """
    if passes < 1:
        raise PreconditionError("at least one pass is required")
    if schedule.kind == "matchoid-recurrence" and schedule.p != mp.p:
        raise PreconditionError(
            f"schedule p={schedule.p} does not match the constraint p={mp.p}"
        )
    order = list(stream)
    rng = Random(per_pass_shuffle_seed) if per_pass_shuffle_seed is not None else None
    state = SolutionState.empty(oracle, alpha, 1.0)
    slack = mp.rank_k * alpha
    p = mp.p
    gamma_theory = None
    gamma_cert = math.inf
    pass_results = []
    certificates = []
    stored_peak = 0

    for i in range(1, passes + 1):
        beta_i = schedule_beta(schedule, i, gamma_theory)
        if rng is not None:
            rng.shuffle(order)
        res = streaming_pass(oracle, mp, order, state, alpha, beta_i,
                             debug=debug, trace=trace)
        state = res.state
        stored_peak = max(stored_peak, res.stored_peak)
        if res.f_final > 0.0:
            delta = res.f_init / res.f_final
            gamma_cert = certified_gamma(i, gamma_cert, beta_i, delta, p)
        else:
            delta = 1.0
            gamma_cert = math.inf
        certificates.append(
            GuaranteeCertificate(i, beta_i, delta, gamma_cert, slack))
        pass_results.append(res)
        if i == 1:
            gamma_theory = 4.0 * p
        elif gamma_theory > p + 1.0:
            gamma_theory = gamma_recurrence_step(p, gamma_theory)
        # at or below p+1 the factor is frozen (the clamp case)
        if target_gamma is not None and gamma_cert <= target_gamma:
            break

    return MultipassResult(
        solution=frozenset(state.members), pass_results=pass_results,
        certificates=certificates, f_final=state.f_s,
        stored_peak=stored_peak, passes_run=len(pass_results), state=state,
    )
