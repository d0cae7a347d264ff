"""
Sandwiching the optimal redundancy
==================================

For a three-level problem, upper bounds come from constructions (grouping
the levels in every possible way) and lower bounds from relaxations
(single-level join codes, requirement submatrices). When the space is
small enough, the exact optimum is computable and must land in between.
"""

from gfcpc import (
    grouping_table_text,
    load_example,
    lower_bound_joins,
    optimal_redundancy_exact,
    upper_bound_grouping,
    upper_bound_multistep,
)

ex = load_example("ex3")
prob = ex.problem
print(f"three levels at distances {prob.distances} over q={prob.space.q}, k={prob.space.k}\n")

# Every way of grouping the three levels gives a concatenated code and
# hence an upper bound; the table makes the trade-off visible.
grouped = upper_bound_grouping(prob)
print(grouping_table_text(grouped))

multi = upper_bound_multistep(prob)
print(f"staged construction: r = {multi.value} (steps {multi.certificate['per_step']})")

lower = lower_bound_joins(prob)
terms = ", ".join(str(t["value"]) for t in lower.certificate["terms"])
print(f"join lower bound: max({terms}) = {lower.value}")
print(f"\nso the optimum lies in [{lower.value}, {min(grouped.value, multi.value)}]")

# On a smaller two-level problem the optimum is cheap to certify exactly.
ex2 = load_example("ex2")
exact = optimal_redundancy_exact(ex2.problem)
print(f"\nsmaller two-level instance: certified optimum r = {exact.value} ({exact.status})")
