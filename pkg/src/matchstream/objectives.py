"""Non-negative submodular set functions with counted oracle access.

Every objective evaluates f over subsets of a fixed ground set of integer
element ids. ``value`` is the metered entry point: it increments the call
counter by exactly one per invocation, whether or not an optional
memoization layer answers from cache. ``marginal`` costs at most two
counted evaluations. ``peek`` evaluates without counting and exists only
for diagnostics and invariant checks, so that debug runs report the same
oracle-call totals as plain runs.
"""

import threading

from .errors import DomainError, SizeError


class SubmodularOracle:
    """Base evaluation oracle for f: 2^ground -> R>=0.

    Subclasses implement ``_evaluate`` on a frozenset. The call counter is
    guarded by a lock so parallel copies of a run may share one oracle.
    """

    kind = "custom"

    def __init__(self, ground, monotone=False, memoize=False):
        self.ground = frozenset(int(e) for e in ground)
        if any(e < 0 for e in self.ground):
            raise DomainError("element ids must be non-negative integers")
        self.monotone = bool(monotone)
        self._lock = threading.Lock()
        self._calls = 0
        self._cache_hits = 0
        self._cache = {} if memoize else None

    @property
    def calls(self):
        """Count of metered evaluations (cache hits included)."""
        return self._calls

    @property
    def cache_hits(self):
        return self._cache_hits

    def reset_counters(self):
        with self._lock:
            self._calls = 0
            self._cache_hits = 0

    def _check_subset(self, subset):
        a = frozenset(subset)
        if not a <= self.ground:
            raise DomainError(
                f"elements {sorted(a - self.ground)} are outside the ground set"
            )
        return a

    def value(self, subset):
        """f(subset); one counted oracle call."""
        a = self._check_subset(subset)
        with self._lock:
            self._calls += 1
        if self._cache is not None:
            hit = self._cache.get(a)
            if hit is not None:
                with self._lock:
                    self._cache_hits += 1
                return hit
            out = self._evaluate(a)
            self._cache[a] = out
            return out
        return self._evaluate(a)

    def marginal(self, e, subset):
        """f(subset + e) - f(subset); at most two counted calls."""
        if e not in self.ground:
            raise DomainError(f"element {e} is outside the ground set")
        a = self._check_subset(subset)
        if e in a:
            return 0.0
        return self.value(a | {e}) - self.value(a)

    def peek(self, subset):
        """Uncounted evaluation, for assertions and debug traces only."""
        return self._evaluate(self._check_subset(subset))

    def _evaluate(self, subset):
        raise NotImplementedError


class CoverageOracle(SubmodularOracle):
    """Weighted coverage: f(A) = total weight of items covered by A's sets."""

    kind = "weighted-coverage"

    def __init__(self, sets, item_weights, monotone=True, memoize=False):
        self._sets = [frozenset(int(i) for i in s) for s in sets]
        self._weights = [float(w) for w in item_weights]
        if any(w < 0 for w in self._weights):
            raise DomainError("item weights must be non-negative")
        if any(i < 0 for s in self._sets for i in s):
            raise DomainError("item ids must be non-negative")
        top = max((i for s in self._sets for i in s), default=-1)
        if top >= len(self._weights):
            raise DomainError(f"item {top} has no weight entry")
        super().__init__(range(len(self._sets)), monotone=monotone, memoize=memoize)

    def _evaluate(self, subset):
        covered = set()
        for e in subset:
            covered |= self._sets[e]
        return float(sum(self._weights[i] for i in covered))


class DirectedCutOracle(SubmodularOracle):
    """Directed cut over vertex ids: f(A) = weight of arcs from A to its
    complement. Non-monotone for any instance with at least one arc."""

    kind = "directed-cut"

    def __init__(self, n, arcs, monotone=False, memoize=False):
        n = int(n)
        self._out = {u: [] for u in range(n)}
        for u, v, w in arcs:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"arc ({u},{v}) endpoint outside 0..{n - 1}")
            if u == v:
                raise DomainError("self-loop arcs do not contribute to any cut")
            if w < 0:
                raise DomainError("arc weights must be non-negative")
            self._out[u].append((v, w))
        super().__init__(range(n), monotone=monotone, memoize=memoize)

    def _evaluate(self, subset):
        total = 0.0
        for u in subset:
            for v, w in self._out[u]:
                if v not in subset:
                    total += w
        return total


class ModularOracle(SubmodularOracle):
    """Additive weights: f(A) = sum of per-element weights."""

    kind = "modular"

    def __init__(self, weights, monotone=True, memoize=False):
        self._weights = [float(w) for w in weights]
        if any(w < 0 for w in self._weights):
            raise DomainError("modular weights must be non-negative")
        super().__init__(range(len(self._weights)), monotone=monotone, memoize=memoize)

    def _evaluate(self, subset):
        return float(sum(self._weights[e] for e in subset))


class TableOracle(SubmodularOracle):
    """Explicit value table indexed by subset bitmask; desk-scale only.

    The table is not required to be submodular, so this kind can also
    serve as a negative fixture for the submodularity checker.
    """

    kind = "custom-table"
    MAX_N = 20

    def __init__(self, n, table, monotone=False, memoize=False):
        n = int(n)
        if n > self.MAX_N:
            raise SizeError(f"table oracles are capped at n={self.MAX_N}")
        if len(table) != 1 << n:
            raise DomainError(f"table must have {1 << n} entries, got {len(table)}")
        self._table = [float(v) for v in table]
        if any(v < 0 for v in self._table):
            raise DomainError("table values must be non-negative")
        super().__init__(range(n), monotone=monotone, memoize=memoize)

    def _evaluate(self, subset):
        mask = 0
        for e in subset:
            mask |= 1 << e
        return self._table[mask]


def brute_force_check_submodular(oracle, tol=1e-9):
    """True iff f(A)+f(B) >= f(A|B)+f(A&B) for every pair of subsets.

    Checked through the equivalent pairwise diminishing-returns condition
    f(e | A) >= f(e | A + e') for all A and distinct e, e' outside A,
    which needs O(2^n * n^2) table lookups instead of O(4^n) pairs.
    """
    elems = sorted(oracle.ground)
    n = len(elems)
    if n > 12:
        raise SizeError("exhaustive submodularity check is capped at n=12")
    vals = [0.0] * (1 << n)
    for mask in range(1 << n):
        vals[mask] = oracle.value(elems[j] for j in range(n) if mask >> j & 1)
    for mask in range(1 << n):
        for j in range(n):
            if mask >> j & 1:
                continue
            with_j = vals[mask | 1 << j] - vals[mask]
            for l in range(n):
                if l == j or mask >> l & 1:
                    continue
                if with_j < vals[mask | 1 << j | 1 << l] - vals[mask | 1 << l] - tol:
                    return False
    return True
