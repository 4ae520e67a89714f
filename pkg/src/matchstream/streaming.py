"""One pass of streaming local search with evictions.

The pass keeps an arrival-ordered solution S together with cached
incremental values: nu[e] is the marginal value of e against the members
of S that arrived before it. Arrival order is a "pretend" order spanning
the whole multi-pass run: elements kept from the initial solution keep
their old positions and precede everything newly accepted, so the cached
nu values stay exact across passes.

A non-initial arrival x is exchanged into S whenever

    f(x | S) >= alpha + (1 + beta) * sum of nu over its eviction set,

with the comparison made exactly (no tolerance). Evicted elements record
their incremental value at the moment of removal.
"""

import json
import math

from .errors import DomainError, PreconditionError
from .matchoids import exchange_set

NU_TOL = 1e-9

# counts of invariant checks executed in debug mode, for reporting
debug_stats = {"element_checks": 0, "accept_checks": 0}


class SolutionState:
    """Arrival-ordered solution with cached incremental values.

    ``order`` lists members by arrival, ``index`` maps each member to its
    arrival counter (monotone over the whole run), ``nu`` caches the
    incremental values, and ``f_s``/``f_empty`` track f(S) and f(empty).
    """

    __slots__ = ("order", "index", "nu", "f_s", "f_empty", "alpha", "beta",
                 "next_index", "members")

    def __init__(self, order, index, nu, f_s, f_empty, alpha=0.0, beta=1.0,
                 next_index=0):
        self.order = list(order)
        self.index = dict(index)
        self.nu = dict(nu)
        self.f_s = float(f_s)
        self.f_empty = float(f_empty)
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.next_index = int(next_index)
        self.members = set(self.order)

    @classmethod
    def empty(cls, oracle, alpha=0.0, beta=1.0):
        f0 = oracle.value(())
        return cls([], {}, {}, f0, f0, alpha, beta, 0)

    def copy_for_pass(self, alpha, beta):
        return SolutionState(self.order, self.index, self.nu, self.f_s,
                             self.f_empty, alpha, beta, self.next_index)

    def accept(self, x, evict, oracle, gain_hint=None):
        """Apply S <- S \\ evict + x and refresh the nu cache.

        Returns the evicted elements mapped to their incremental value at
        removal. ``gain_hint`` saves one oracle call when nothing is
        evicted (the caller already knows f(x | S)).
        """
        chi = {c: self.nu[c] for c in evict}
        if evict:
            cut = min(self.order.index(c) for c in evict)
            for c in evict:
                self.members.discard(c)
                del self.nu[c]
                del self.index[c]
            self.order = [e for e in self.order if e not in evict]
            self._append(x)
            recompute_nu(self, oracle, cut)
        else:
            gain = gain_hint
            if gain is None:
                gain = oracle.value(self.members | {x}) - self.f_s
            self._append(x)
            self.nu[x] = gain
            self.f_s += gain
        return chi

    def _append(self, x):
        self.order.append(x)
        self.members.add(x)
        self.index[x] = self.next_index
        self.next_index += 1


def recompute_nu(state, oracle, start_pos=0):
    """Recompute cached incremental values from ``start_pos`` onward.

    After an exchange, only members at or after the first eviction
    position have a changed prefix; one metered evaluation per walked
    prefix refreshes them and f(S) together.
    """
    prefix = set(state.order[:start_pos])
    running = oracle.value(prefix)
    for e in state.order[start_pos:]:
        prefix.add(e)
        nxt = oracle.value(prefix)
        state.nu[e] = nxt - running
        running = nxt
    state.f_s = running
    return state


def nu_by_definition(state, oracle):
    """Incremental values straight from the definition (uncounted)."""
    out = {}
    prefix = set()
    running = oracle.peek(prefix)
    for e in state.order:
        prefix.add(e)
        nxt = oracle.peek(prefix)
        out[e] = nxt - running
        running = nxt
    return out


class PassResult:
    """Outcome of one pass: final state, acceptance set (initial solution
    included), eviction values, objective endpoints, and meters."""

    __slots__ = ("state", "accepted", "evicted", "f_final", "f_init",
                 "accept_count", "reject_count", "discard_count",
                 "oracle_calls", "stored_peak", "alpha", "beta")

    def __init__(self, state, accepted, evicted, f_final, f_init,
                 accept_count, reject_count, discard_count, oracle_calls,
                 stored_peak, alpha, beta):
        self.state = state
        self.accepted = frozenset(accepted)
        self.evicted = dict(evicted)
        self.f_final = f_final
        self.f_init = f_init
        self.accept_count = accept_count
        self.reject_count = reject_count
        self.discard_count = discard_count
        self.oracle_calls = oracle_calls
        self.stored_peak = stored_peak
        self.alpha = alpha
        self.beta = beta

    @property
    def solution(self):
        return frozenset(self.state.members)

    @property
    def eviction_sum(self):
        return math.fsum(self.evicted.values())


def validate_stream(stream, ground, require_full=True):
    order = [int(x) for x in stream]
    seen = set(order)
    if len(seen) != len(order):
        raise PreconditionError("stream presents an element more than once")
    if not seen <= ground:
        raise DomainError(
            f"stream elements {sorted(seen - ground)} are outside the ground set"
        )
    if require_full and seen != ground:
        raise PreconditionError("stream must present every ground element exactly once")
    return order


def streaming_pass(oracle, mp, stream, s_init=None, alpha=0.0, beta=1.0, *,
                   debug=False, trace=None, require_full_stream=True):
    """Process one pass of the stream against an optional initial solution.

    Arrivals already in the initial solution are discarded. Every other
    arrival is tested against the exchange threshold; accepted elements
    displace their eviction set. With ``debug`` the solution invariants
    are re-derived from the oracle after every processed element (uncounted
    evaluations). ``trace`` collects one record per processed element.
    """
    if alpha < 0 or beta < 0:
        raise PreconditionError("alpha and beta must be non-negative")
    order = validate_stream(stream, oracle.ground, require_full_stream)
    if s_init is None:
        state = SolutionState.empty(oracle, alpha, beta)
    else:
        if not mp.feasible(s_init.members):
            raise PreconditionError("initial solution is infeasible")
        state = s_init.copy_for_pass(alpha, beta)
    init_ids = frozenset(state.members)
    accepted = set(init_ids)
    evicted = {}
    f_init = state.f_s
    calls_before = oracle.calls
    accept_count = reject_count = discard_count = 0
    stored_peak = len(init_ids | state.members)

    for x in order:
        live = init_ids | state.members
        stored_peak = max(stored_peak, len(live) + (0 if x in live else 1))
        if x in init_ids:
            discard_count += 1
            _trace_write(trace, x, "discard", (), state)
            if debug:
                _check_element(state, oracle, mp)
            continue
        cx = exchange_set(mp, x, state)
        gain = oracle.value(state.members | {x}) - state.f_s
        threshold = alpha + (1.0 + beta) * math.fsum(state.nu[c] for c in cx)
        if gain >= threshold:
            nu_before = dict(state.nu) if debug else None
            chi = state.accept(x, cx, oracle, gain_hint=gain)
            evicted.update(chi)
            accepted.add(x)
            accept_count += 1
            _trace_write(trace, x, "accept", cx, state)
            if debug:
                _check_accept(state, oracle, nu_before, cx)
                _check_element(state, oracle, mp)
        else:
            reject_count += 1
            _trace_write(trace, x, "reject", cx, state)
            if debug:
                _check_element(state, oracle, mp)

    return PassResult(
        state=state, accepted=accepted, evicted=evicted,
        f_final=state.f_s, f_init=f_init,
        accept_count=accept_count, reject_count=reject_count,
        discard_count=discard_count, oracle_calls=oracle.calls - calls_before,
        stored_peak=stored_peak, alpha=alpha, beta=beta,
    )


def _trace_write(sink, elem, action, cx, state):
    if sink is None:
        return
    record = {
        "elem": elem,
        "action": action,
        "C_x": sorted(cx),
        "f_S": state.f_s,
        "sum_nu": math.fsum(state.nu.values()),
    }
    if hasattr(sink, "append"):
        sink.append(record)
    else:
        sink.write(json.dumps(record) + "\n")


def _check_element(state, oracle, mp, tol=NU_TOL):
    """Invariants that must hold after every processed element."""
    debug_stats["element_checks"] += 1
    if not mp.feasible(state.members):
        raise AssertionError("solution left the feasible region")
    total = math.fsum(state.nu.values())
    if abs(total - (state.f_s - state.f_empty)) > tol:
        raise AssertionError(
            f"incremental values sum to {total}, expected {state.f_s - state.f_empty}"
        )
    for e in state.order:
        if state.nu[e] < state.alpha - tol:
            raise AssertionError(f"nu[{e}]={state.nu[e]} fell below alpha={state.alpha}")


def _check_accept(state, oracle, nu_before, evicted_set, tol=NU_TOL):
    """Extra invariants re-derived from the oracle after an acceptance."""
    debug_stats["accept_checks"] += 1
    exact = nu_by_definition(state, oracle)
    for e, v in exact.items():
        if abs(v - state.nu[e]) > tol:
            raise AssertionError(f"cached nu[{e}]={state.nu[e]} drifted from {v}")
    for e, old in nu_before.items():
        if e not in state.members or e in evicted_set:
            continue
        if evicted_set:
            if state.nu[e] < old - tol:
                raise AssertionError("an eviction decreased a survivor's nu")
        elif abs(state.nu[e] - old) > tol:
            raise AssertionError("a pure insertion changed a survivor's nu")
    full = oracle.peek(state.members)
    for t in state.order:
        if full - oracle.peek(state.members - {t}) > state.nu[t] + tol:
            raise AssertionError("single-element residual exceeded its nu")
