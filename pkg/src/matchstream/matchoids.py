"""Matroid independence oracles and their composition into p-matchoids.

A p-matchoid is a list of matroids, each living on a subset of the ground
set, with every element belonging to at most p of those subsets. A set is
feasible when its restriction to each matroid's ground subset is
independent there.
"""

from .errors import InfeasibilityError, PreconditionError, SizeError


class Matroid:
    """Independence oracle over a ground subset.

    ``independent`` ignores elements outside the ground subset: only the
    restriction of the query is tested.
    """

    kind = "abstract"

    def __init__(self, ground_subset):
        self.ground_subset = frozenset(int(e) for e in ground_subset)

    def independent(self, subset):
        return self._independent(frozenset(subset) & self.ground_subset)

    def _independent(self, restricted):
        raise NotImplementedError


class UniformMatroid(Matroid):
    kind = "uniform"

    def __init__(self, ground_subset, capacity):
        super().__init__(ground_subset)
        self.capacity = int(capacity)
        if self.capacity < 0:
            raise PreconditionError("capacity must be non-negative")

    def _independent(self, restricted):
        return len(restricted) <= self.capacity


class PartitionMatroid(Matroid):
    """At most ``capacities[j]`` elements from ``parts[j]``; elements of the
    ground subset outside every part are unconstrained."""

    kind = "partition"

    def __init__(self, ground_subset, parts, capacities):
        super().__init__(ground_subset)
        self.parts = [frozenset(int(e) for e in part) for part in parts]
        self.capacities = [int(c) for c in capacities]
        if len(self.parts) != len(self.capacities):
            raise PreconditionError("one capacity per part is required")
        seen = set()
        for part in self.parts:
            if not part <= self.ground_subset:
                raise PreconditionError("parts must lie inside the ground subset")
            if part & seen:
                raise PreconditionError("parts must be disjoint")
            seen |= part
        if any(c < 0 for c in self.capacities):
            raise PreconditionError("capacities must be non-negative")

    def _independent(self, restricted):
        return all(
            len(restricted & part) <= cap
            for part, cap in zip(self.parts, self.capacities)
        )


class GraphicMatroid(Matroid):
    """Elements are edges of a multigraph; independent sets are forests."""

    kind = "graphic"

    def __init__(self, ground_subset, endpoints):
        super().__init__(ground_subset)
        self.endpoints = {int(e): (int(u), int(v)) for e, (u, v) in endpoints.items()}
        missing = self.ground_subset - set(self.endpoints)
        if missing:
            raise PreconditionError(f"edges {sorted(missing)} have no endpoints")

    def _independent(self, restricted):
        parent = {}

        def find(a):
            root = a
            while parent.get(root, root) != root:
                root = parent[root]
            while parent.get(a, a) != a:
                parent[a], a = root, parent[a]
            return root

        for e in sorted(restricted):
            u, v = self.endpoints[e]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


class TransversalMatroid(Matroid):
    """Elements are left vertices of a bipartite graph; a set is
    independent when it can be matched into the right side."""

    kind = "transversal"

    def __init__(self, ground_subset, adjacency):
        super().__init__(ground_subset)
        self.adjacency = {int(e): frozenset(int(r) for r in rs) for e, rs in adjacency.items()}
        missing = self.ground_subset - set(self.adjacency)
        if missing:
            raise PreconditionError(f"elements {sorted(missing)} have no adjacency list")

    def _independent(self, restricted):
        matched = {}

        def augment(e, banned):
            for r in sorted(self.adjacency[e]):
                if r in banned:
                    continue
                banned.add(r)
                if r not in matched or augment(matched[r], banned):
                    matched[r] = e
                    return True
            return False

        for e in sorted(restricted):
            if not augment(e, set()):
                return False
        return True


class PMatchoid:
    """Conjunction of matroid constraints with bounded per-element membership.

    ``rank_k`` is the size of a largest feasible set; it is computed
    exactly at construction when the ground set is small enough, otherwise
    it must be supplied.
    """

    def __init__(self, ground, matroids, p=None, rank=None):
        self.ground = frozenset(int(e) for e in ground)
        self.matroids = list(matroids)
        for m in self.matroids:
            if not m.ground_subset <= self.ground:
                raise PreconditionError("matroid ground subset leaves the instance ground set")
        counts = {}
        for m in self.matroids:
            for e in m.ground_subset:
                counts[e] = counts.get(e, 0) + 1
        max_membership = max(counts.values(), default=0)
        self.p = int(p) if p is not None else max(1, max_membership)
        if self.p < 1:
            raise PreconditionError("p must be a positive integer")
        if max_membership > self.p:
            offenders = sorted(e for e, c in counts.items() if c > self.p)
            raise InfeasibilityError(
                f"elements {offenders} belong to more than p={self.p} matroids"
            )
        self.rank_k = int(rank) if rank is not None else compute_rank(self)

    def feasible(self, subset):
        a = frozenset(subset)
        return all(m.independent(a) for m in self.matroids)


def matchoid_feasible(mp, subset):
    """True iff the subset is independent in every constituent matroid."""
    return mp.feasible(subset)


def compute_rank(mp):
    """Exact maximum feasible-set size by branch and bound.

    Supersets of infeasible sets are never visited (downward closure), and
    a branch is cut when the remaining elements cannot beat the incumbent.
    """
    elems = sorted(mp.ground)
    if len(elems) > 16:
        raise SizeError("exact rank computation is capped at 16 ground elements")
    best = 0

    def walk(current, start):
        nonlocal best
        if len(current) > best:
            best = len(current)
        for idx in range(start, len(elems)):
            if len(current) + (len(elems) - idx) <= best:
                break
            e = elems[idx]
            current.add(e)
            if mp.feasible(current):
                walk(current, idx + 1)
            current.remove(e)

    walk(set(), 0)
    return best


def exchange_set(mp, x, state):
    """Candidate eviction set making room for x in the current solution.

    For each matroid containing x whose restriction becomes dependent when
    x is added, the swap candidate with the smallest cached incremental
    value is chosen (earliest arrival breaks ties). Matroids are visited
    in instance order, and the same element may be chosen for several of
    them (it is added once).
    """
    if x in state.members:
        raise PreconditionError(f"element {x} is already in the solution")
    chosen = set()
    for matroid in mp.matroids:
        if x not in matroid.ground_subset:
            continue
        s_l = state.members & matroid.ground_subset
        if matroid.independent(s_l | {x}):
            continue
        candidates = [y for y in s_l if matroid.independent((s_l - {y}) | {x})]
        if not candidates:
            raise InfeasibilityError(
                f"no single swap restores independence for element {x}"
            )
        chosen.add(min(candidates, key=lambda y: (state.nu[y], state.index[y])))
    return chosen
