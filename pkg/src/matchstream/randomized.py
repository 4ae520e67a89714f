"""Randomized buffered local search for non-negative objectives.

Arrivals that clear the exchange threshold wait in a bounded buffer
instead of entering the solution directly. When the buffer fills, one
element is drawn uniformly at random, exchanged into the solution, and
the remaining buffered elements are re-screened against the updated
solution. Whatever survives in the buffer at the end of the pass feeds an
offline solver, whose best output so far is tracked as a second candidate
solution; the run returns the better of the streaming and offline
solutions.

The additive threshold alpha needs a bracket on the unknown optimum
value. A dedicated first pass finds the best singleton tau, and one copy
of the algorithm runs for every power of two in [tau, k*tau]; some copy's
guess is within a factor two of the optimum. The copies share each
physical pass over the stream.
"""

import math
from random import Random

from .baselines import max_feasible_subset
from .errors import ConfigError, PreconditionError, SizeError
from .matchoids import exchange_set
from .multipass import (Schedule, gamma_recurrence_step, schedule_beta,
                        worst_case_gamma)
from .streaming import (PassResult, SolutionState, streaming_pass,
                        validate_stream, _check_accept, _check_element)

OFFLINE_EXACT_LIMIT = 22


class BufferState:
    """Bounded candidate pool; members stay in stream-arrival order."""

    __slots__ = ("members", "m", "peak")

    def __init__(self, members, m, peak=0):
        self.members = list(members)
        self.m = int(m)
        self.peak = max(peak, len(self.members))

    def draw(self, rng):
        """Remove and return a uniformly random member."""
        return self.members.pop(rng.randrange(len(self.members)))


class GuessGrid:
    """Powers of two bracketing the optimum value within a factor two."""

    __slots__ = ("tau", "lambdas")

    def __init__(self, tau, lambdas):
        self.tau = float(tau)
        self.lambdas = tuple(float(v) for v in lambdas)


def guess_grid(oracle, stream, rank_k):
    """One dedicated pass for the best singleton value tau, then the grid
    {2^i : tau <= 2^i <= k * tau}.

    All-zero singletons degenerate to a single zero guess (the run then
    proceeds with alpha = 0). When no power of two lands in the interval
    (only possible at rank 1), the largest power below tau still brackets
    the optimum and is used instead.
    """
    tau = 0.0
    for e in stream:
        tau = max(tau, oracle.value({e}))
    if tau <= 0.0:
        return GuessGrid(0.0, (0.0,))
    i = math.ceil(math.log2(tau))
    while 2.0 ** (i - 1) >= tau:
        i -= 1
    while 2.0 ** i < tau:
        i += 1
    lambdas = []
    while 2.0 ** i <= rank_k * tau:
        lambdas.append(2.0 ** i)
        i += 1
    if not lambdas:
        lambdas = [2.0 ** math.floor(math.log2(tau))]
    return GuessGrid(tau, lambdas)


class _BufferEntry:
    """Cached threshold data for a buffered element, stamped with the
    solution version it was computed against."""

    __slots__ = ("gain", "cx", "version")

    def __init__(self, gain, cx, version):
        self.gain = gain
        self.cx = cx
        self.version = version


class RandomizedPassRunner:
    """Element-at-a-time driver for one randomized buffered pass.

    Feeding elements one by one lets several guess copies share a single
    physical pass over the stream. The solution is only mutated on a
    buffer selection, and every selection immediately re-screens the
    buffer, so cached threshold data is always current at selection time.
    """

    def __init__(self, oracle, mp, s_init, alpha, beta, m, rng, *, debug=False):
        if rng is None:
            raise ConfigError("a seeded random generator is required")
        if m < 1:
            raise PreconditionError("buffer capacity must be at least 1")
        if alpha < 0 or beta < 0:
            raise PreconditionError("alpha and beta must be non-negative")
        self.oracle = oracle
        self.mp = mp
        self._calls_before = oracle.calls
        if s_init is None:
            self.state = SolutionState.empty(oracle, alpha, beta)
        else:
            if not mp.feasible(s_init.members):
                raise PreconditionError("initial solution is infeasible")
            self.state = s_init.copy_for_pass(alpha, beta)
        self.alpha = alpha
        self.beta = beta
        self.m = m
        self.rng = rng
        self.debug = debug
        self.init_ids = frozenset(self.state.members)
        self.buffer = BufferState([], m)
        self._entries = {}
        self.accepted = set(self.init_ids)
        self.evicted = {}
        self.f_init = self.state.f_s
        self.accept_count = 0
        self.reject_count = 0
        self.discard_count = 0
        self.buffer_drops = 0
        self.stored_current = len(self.init_ids)
        self.stored_peak = self.stored_current
        self._finished = False

    def _threshold(self, x):
        cx = exchange_set(self.mp, x, self.state)
        gain = self.oracle.value(self.state.members | {x}) - self.state.f_s
        bar = self.alpha + (1.0 + self.beta) * math.fsum(self.state.nu[c] for c in cx)
        return gain >= bar, gain, frozenset(cx)

    def _threshold_peek(self, x):
        cx = exchange_set(self.mp, x, self.state)
        gain = self.oracle.peek(self.state.members | {x}) - self.state.f_s
        bar = self.alpha + (1.0 + self.beta) * math.fsum(self.state.nu[c] for c in cx)
        return gain >= bar

    def _note_storage(self, extra=None):
        live = self.init_ids | self.state.members | set(self.buffer.members)
        size = len(live) + (1 if extra is not None and extra not in live else 0)
        self.stored_current = size
        self.stored_peak = max(self.stored_peak, size)

    def process(self, x):
        if self._finished:
            raise PreconditionError("runner already finished")
        self._note_storage(x)
        if x in self.init_ids:
            self.discard_count += 1
            return
        ok, gain, cx = self._threshold(x)
        if not ok:
            self.reject_count += 1
            return
        self.buffer.members.append(x)
        self._entries[x] = _BufferEntry(gain, cx, self.accept_count)
        self.buffer.peak = max(self.buffer.peak, len(self.buffer.members))
        if len(self.buffer.members) == self.m:
            self._select_and_sweep()
        self._note_storage()

    def _select_and_sweep(self):
        x = self.buffer.draw(self.rng)
        entry = self._entries.pop(x)
        nu_before = dict(self.state.nu) if self.debug else None
        chi = self.state.accept(x, set(entry.cx), self.oracle,
                                gain_hint=entry.gain)
        self.evicted.update(chi)
        self.accepted.add(x)
        self.accept_count += 1
        if self.debug:
            _check_accept(self.state, self.oracle, nu_before, entry.cx)
            _check_element(self.state, self.oracle, self.mp)
        before_sweep = list(self.buffer.members)
        survivors = []
        for y in before_sweep:
            ok, gain, cx = self._threshold(y)
            if ok:
                self._entries[y] = _BufferEntry(gain, cx, self.accept_count)
                survivors.append(y)
            else:
                del self._entries[y]
                self.buffer_drops += 1
        self.buffer.members = survivors
        if self.debug:
            # the sweep outcome may not depend on its iteration order
            replay = {y for y in reversed(before_sweep) if self._threshold_peek(y)}
            if replay != set(survivors):
                raise AssertionError("sweep outcome depended on iteration order")

    def finish(self, offline_mode="exact", offline_passes=None):
        """Close the pass: solve offline over the residual buffer and
        package the usual pass accounting."""
        if self._finished:
            raise PreconditionError("runner already finished")
        self._finished = True
        s_prime = offline_solve(self.oracle, self.mp, self.buffer.members,
                                mode=offline_mode, passes=offline_passes)
        f_s_prime = self.oracle.value(s_prime)
        self._note_storage()
        result = PassResult(
            state=self.state, accepted=self.accepted, evicted=self.evicted,
            f_final=self.state.f_s, f_init=self.f_init,
            accept_count=self.accept_count, reject_count=self.reject_count,
            discard_count=self.discard_count,
            oracle_calls=self.oracle.calls - self._calls_before,
            stored_peak=self.stored_peak, alpha=self.alpha, beta=self.beta,
        )
        return RandomizedPassResult(self.state, frozenset(s_prime), f_s_prime,
                                    result, self.buffer, self.buffer_drops)


class RandomizedPassResult:
    __slots__ = ("state", "s_prime", "f_s_prime", "result", "buffer",
                 "buffer_drops")

    def __init__(self, state, s_prime, f_s_prime, result, buffer, buffer_drops):
        self.state = state
        self.s_prime = s_prime
        self.f_s_prime = f_s_prime
        self.result = result
        self.buffer = buffer
        self.buffer_drops = buffer_drops


def randomized_pass(oracle, mp, stream, s_init, alpha, beta, m, rng, *,
                    offline_mode="exact", offline_passes=None, debug=False):
    """Run one randomized buffered pass over a full stream."""
    order = validate_stream(stream, oracle.ground, require_full=True)
    runner = RandomizedPassRunner(oracle, mp, s_init, alpha, beta, m, rng,
                                  debug=debug)
    for x in order:
        runner.process(x)
    return runner.finish(offline_mode, offline_passes)


def offline_solve(oracle, mp, candidates, mode="exact", *, passes=None):
    """Best feasible subset of the candidate pool.

    ``exact`` enumerates with branch-and-bound (pool capped at 22
    elements). ``heuristic`` chains streaming passes over the pool in
    ascending-id order with the harmonic step sizes; the objective value
    never decreases across those passes, so the last solution is the best
    one found.
    """
    pool = sorted(set(candidates))
    if mode == "exact":
        if len(pool) > OFFLINE_EXACT_LIMIT:
            raise SizeError(
                f"exact offline mode is capped at {OFFLINE_EXACT_LIMIT} candidates"
            )
        return max_feasible_subset(oracle, mp, pool).opt_set
    if mode == "heuristic":
        rounds = passes if passes is not None else 2 * mp.p
        state = None
        for i in range(1, max(1, rounds) + 1):
            res = streaming_pass(oracle, mp, pool, state, 0.0, 1.0 / i,
                                 require_full_stream=False)
            state = res.state
        return frozenset(state.members)
    raise ConfigError(f"unknown offline mode: {mode}")


class _GuessCopy:
    __slots__ = ("lam", "alpha", "seed", "rng", "state", "best_prime_set",
                 "best_prime_val", "calls", "pass_rows", "pass_results",
                 "buffer_peak")

    def __init__(self, lam, alpha, seed):
        self.lam = lam
        self.alpha = alpha
        self.seed = seed
        self.rng = Random(seed)
        self.state = None
        self.best_prime_set = frozenset()
        self.best_prime_val = None
        self.calls = 0
        self.pass_rows = []
        self.pass_results = []
        self.buffer_peak = 0


class LambdaCopyResult:
    __slots__ = ("lam", "alpha", "m", "seed", "f_s", "f_s_prime", "f_best",
                 "solution", "s_prime", "pass_rows", "pass_results",
                 "oracle_calls", "buffer_peak")

    def __init__(self, lam, alpha, m, seed, f_s, f_s_prime, f_best, solution,
                 s_prime, pass_rows, pass_results, oracle_calls, buffer_peak):
        self.lam = lam
        self.alpha = alpha
        self.m = m
        self.seed = seed
        self.f_s = f_s
        self.f_s_prime = f_s_prime
        self.f_best = f_best
        self.solution = solution
        self.s_prime = s_prime
        self.pass_rows = pass_rows
        self.pass_results = pass_results
        self.oracle_calls = oracle_calls
        self.buffer_peak = buffer_peak


class RandomizedRunResult:
    __slots__ = ("solution", "f_solution", "copies", "grid", "passes_used",
                 "space_peak", "space_bound", "epsilon", "d", "m", "seed",
                 "gamma_off")

    def __init__(self, solution, f_solution, copies, grid, passes_used,
                 space_peak, space_bound, epsilon, d, m, seed, gamma_off):
        self.solution = solution
        self.f_solution = f_solution
        self.copies = copies
        self.grid = grid
        self.passes_used = passes_used
        self.space_peak = space_peak
        self.space_bound = space_bound
        self.epsilon = epsilon
        self.d = d
        self.m = m
        self.seed = seed
        self.gamma_off = gamma_off


def multipass_randomized(oracle, mp, stream, epsilon, passes=None, seed=0, *,
                         offline_mode="exact", offline_passes=None,
                         heuristic_gamma_off=None, schedule=None, debug=False):
    """Full randomized driver for a non-negative objective.

    One copy runs per guess lambda with alpha = eps' * lambda / (2k) and
    buffer capacity ceil(4dk / eps'^2), eps' = epsilon / p. The copies
    consume the same physical passes (one element fanned out to each) and
    each chains its streaming solution across passes while keeping its
    best offline solution; the overall answer is the best solution of any
    copy, streaming solutions preferred on ties.

    The reported ``gamma_off`` is the offline solver's factor: 1 for the
    exact solver, otherwise the configured ``heuristic_gamma_off`` (by
    default p + 3, the recurrence schedule's closed form at 2p passes).
    It is reporting only; nothing in the run depends on it.
    """
    if not 0.0 < epsilon <= 0.5:
        raise PreconditionError("epsilon must lie in (0, 1/2]")
    order = validate_stream(stream, oracle.ground, require_full=True)
    p = mp.p
    k = mp.rank_k
    eps_prime = epsilon / p
    if schedule is None:
        schedule = (Schedule.matroid_harmonic() if len(mp.matroids) <= 1
                    else Schedule.matchoid_recurrence(p))
    if passes is None:
        d = (math.ceil(2.0 / epsilon) if schedule.kind == "matroid-harmonic"
             else math.ceil(4.0 * p / epsilon))
    else:
        d = int(passes)
    if d < 1:
        raise PreconditionError("at least one pass is required")
    m = max(1, math.ceil(4.0 * d * k / eps_prime ** 2))

    grid = guess_grid(oracle, order, k)
    copies = []
    for idx, lam in enumerate(grid.lambdas):
        alpha = eps_prime * lam / (2.0 * k) if (lam > 0.0 and k > 0) else 0.0
        copies.append(_GuessCopy(lam, alpha, seed ^ idx))

    gamma_theory = None
    space_peak = 0
    for i in range(1, d + 1):
        beta_i = schedule_beta(schedule, i, gamma_theory)
        runners = []
        for copy in copies:
            before = oracle.calls
            runners.append(RandomizedPassRunner(
                oracle, mp, copy.state, copy.alpha, beta_i, m, copy.rng,
                debug=debug))
            copy.calls += oracle.calls - before
        pass_calls_start = {id(copy): copy.calls for copy in copies}
        for x in order:
            total_stored = 0
            for copy, runner in zip(copies, runners):
                before = oracle.calls
                runner.process(x)
                copy.calls += oracle.calls - before
                total_stored += runner.stored_current + len(copy.best_prime_set)
            space_peak = max(space_peak, total_stored)
        for copy, runner in zip(copies, runners):
            before = oracle.calls
            fin = runner.finish(offline_mode, offline_passes)
            copy.calls += oracle.calls - before
            copy.state = fin.state
            copy.pass_results.append(fin.result)
            copy.buffer_peak = max(copy.buffer_peak, fin.buffer.peak)
            if copy.best_prime_val is None:
                copy.best_prime_val = fin.state.f_empty
            if fin.f_s_prime > copy.best_prime_val:
                copy.best_prime_val = fin.f_s_prime
                copy.best_prime_set = fin.s_prime
            f_final = fin.result.f_final
            delta = fin.result.f_init / f_final if f_final > 0.0 else 1.0
            copy.pass_rows.append({
                "pass": i,
                "beta": beta_i,
                "f_S": f_final,
                "delta": delta,
                "gamma_certified": worst_case_gamma(schedule, i),
                "accepts": fin.result.accept_count,
                "evictions": len(fin.result.evicted),
                "oracle_calls": copy.calls - pass_calls_start[id(copy)],
                "stored_elements": fin.result.stored_peak,
                "lambda": copy.lam,
                "m": m,
                "buffer_peak": fin.buffer.peak,
                "f_S_prime": copy.best_prime_val,
                "f_S_bar": max(f_final, copy.best_prime_val),
                "seed": copy.seed,
            })
            pass_calls_start[id(copy)] = copy.calls
        gamma_theory = (4.0 * p if i == 1
                        else gamma_recurrence_step(p, gamma_theory))

    copy_results = []
    best = None
    for copy in copies:
        f_s = copy.state.f_s
        if f_s >= copy.best_prime_val:
            f_best, solution = f_s, frozenset(copy.state.members)
        else:
            f_best, solution = copy.best_prime_val, copy.best_prime_set
        out = LambdaCopyResult(
            lam=copy.lam, alpha=copy.alpha, m=m, seed=copy.seed, f_s=f_s,
            f_s_prime=copy.best_prime_val, f_best=f_best, solution=solution,
            s_prime=copy.best_prime_set, pass_rows=copy.pass_rows,
            pass_results=copy.pass_results, oracle_calls=copy.calls,
            buffer_peak=copy.buffer_peak,
        )
        copy_results.append(out)
        if best is None or out.f_best > best.f_best:
            best = out

    if offline_mode == "exact":
        gamma_off = 1.0
    else:
        gamma_off = (heuristic_gamma_off if heuristic_gamma_off is not None
                     else p + 3.0)
    return RandomizedRunResult(
        solution=best.solution, f_solution=best.f_best, copies=copy_results,
        grid=grid, passes_used=d + 1, space_peak=space_peak,
        space_bound=len(grid.lambdas) * (m + 3 * k), epsilon=epsilon, d=d,
        m=m, seed=seed, gamma_off=gamma_off,
    )
