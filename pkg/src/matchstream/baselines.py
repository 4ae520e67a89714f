"""Exact and greedy baselines used to validate approximation claims.

``brute_force_opt`` prunes the subset lattice through downward closure
(supersets of infeasible sets are skipped), while
``enumerate_opt_unpruned`` walks all bitmasks; the two are kept as
independent code paths so each can vouch for the other.
"""

from .errors import SizeError


class ExactResult:
    __slots__ = ("opt_set", "opt_value", "subsets_examined")

    def __init__(self, opt_set, opt_value, subsets_examined):
        self.opt_set = frozenset(opt_set)
        self.opt_value = opt_value
        self.subsets_examined = subsets_examined

    def __repr__(self):
        return (f"ExactResult(value={self.opt_value}, set={sorted(self.opt_set)}, "
                f"examined={self.subsets_examined})")


def max_feasible_subset(oracle, mp, candidates):
    """Best feasible subset of ``candidates`` by pruned depth-first search.

    Every feasible subset is visited (a non-monotone objective can peak
    anywhere in the lattice); only infeasible branches are cut. Ties keep
    the first maximizer in lexicographic order, the empty set included.
    """
    elems = sorted(set(candidates))
    best_val = oracle.value(())
    best_set = frozenset()
    examined = 1

    def walk(current, start):
        nonlocal best_val, best_set, examined
        for idx in range(start, len(elems)):
            e = elems[idx]
            current.add(e)
            if mp.feasible(current):
                examined += 1
                v = oracle.value(current)
                if v > best_val:
                    best_val = v
                    best_set = frozenset(current)
                walk(current, idx + 1)
            current.remove(e)

    walk(set(), 0)
    return ExactResult(best_set, best_val, examined)


def brute_force_opt(oracle, mp):
    """Exact optimum over all feasible subsets of the ground set."""
    if len(oracle.ground) > 16:
        raise SizeError("exact optimum search is capped at 16 ground elements")
    return max_feasible_subset(oracle, mp, oracle.ground)


def enumerate_opt_unpruned(oracle, mp):
    """Reference optimum from a full, unpruned sweep of all 2^n subsets."""
    elems = sorted(oracle.ground)
    n = len(elems)
    if n > 10:
        raise SizeError("unpruned enumeration is capped at 10 ground elements")
    best_val = None
    best_set = frozenset()
    examined = 0
    for mask in range(1 << n):
        subset = frozenset(elems[j] for j in range(n) if mask >> j & 1)
        if not mp.feasible(subset):
            continue
        examined += 1
        v = oracle.value(subset)
        if best_val is None or v > best_val:
            best_val = v
            best_set = subset
    return ExactResult(best_set, best_val, examined)


def offline_greedy(oracle, mp):
    """Repeatedly add the feasible element with the largest positive
    marginal; ties go to the smallest id."""
    chosen = set()
    current = oracle.value(())
    elems = sorted(oracle.ground)
    while True:
        best_e = None
        best_gain = 0.0
        for e in elems:
            if e in chosen or not mp.feasible(chosen | {e}):
                continue
            gain = oracle.value(chosen | {e}) - current
            if gain > best_gain:
                best_e = e
                best_gain = gain
        if best_e is None:
            return frozenset(chosen)
        chosen.add(best_e)
        current += best_gain
