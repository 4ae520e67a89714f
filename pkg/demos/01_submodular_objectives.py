"""
Submodular objectives and counted oracle access
===============================================

Build the bundled objective kinds, query values and marginals, and watch
the diminishing-returns property at work.
"""

import matchstream as ms

# A weighted-coverage objective: three sets over three unit-weight items.
cover = ms.CoverageOracle([[0, 1], [1, 2], [2]], [1, 1, 1])
print("coverage f({0})      =", cover.value({0}))
print("coverage f({0,1,2})  =", cover.value({0, 1, 2}))

# Marginals shrink as the base set grows: that is submodularity.
print("gain of 1 on empty   =", cover.marginal(1, set()))
print("gain of 1 on {0}     =", cover.marginal(1, {0}))
print("gain of 1 on {0,2}   =", cover.marginal(1, {0, 2}))

# A directed cut is submodular but not monotone: adding a vertex can
# remove more arc weight than it contributes.
cut = ms.DirectedCutOracle(2, [(0, 1, 1), (1, 0, 2)])
print("cut f({0}) =", cut.value({0}), " cut f({0,1}) =", cut.value({0, 1}))
print("gain of 1 on {0} =", cut.marginal(1, {0}), "(negative!)")

# The exhaustive checker confirms the lattice inequality on small ground
# sets, and catches violations.
print("coverage submodular? ", ms.brute_force_check_submodular(cover))
bad = ms.TableOracle(2, [0.0, 0.0, 0.0, 1.0])
print("bad table submodular?", ms.brute_force_check_submodular(bad))

# Every metered evaluation is counted; peeks are not.
fresh = ms.ModularOracle([2, 5, 1])
fresh.value({0, 1})
fresh.marginal(2, {0})
fresh.peek({0, 1, 2})
print("oracle calls:", fresh.calls, "(1 value + 2 for the marginal, peek free)")
