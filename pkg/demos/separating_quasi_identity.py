"""
A quasi-identity that tells biatomic lattices apart
===================================================

The built-in ``theta`` holds in every atomistic biatomic
join-semidistributive lattice, yet fails in a lattice of convex sets
built from five points in the plane.  Since that lattice is atomistic
and join-semidistributive, no such lattice can be embedded into a
biatomic one of the same kind while keeping theta's premises.
"""

from latkit.analysis import is_atomistic, is_biatomic, is_join_semidistributive
from latkit.generators import boolean, co_chain
from latkit.geometry import co_points, five_point_configuration
from latkit.qid import evaluate, format_qid, theta

q = theta()
print(format_qid(q))
print()

# on biatomic lattices the quasi-identity holds
for name, L in [("boolean(3)", boolean(3)), ("co_chain(4)", co_chain(4))]:
    verdict = evaluate(L, q)
    print(f"{name}: holds={verdict.holds}  ({verdict.assignments_checked} assignments)")

# five points: a triangle a, b, c with u and v inside,
# u on the left of the median from a, v on the right
L = co_points(five_point_configuration())
print()
print(f"five-point lattice: {L.n} elements")
print("  atomistic:", is_atomistic(L))
print("  jsd:      ", is_join_semidistributive(L))
print("  biatomic: ", is_biatomic(L))

verdict = evaluate(L, q)
print("  theta holds:", verdict.holds)

# the counterexample assigns each variable its namesake point
assignment = {var: L.label(x) for var, x in verdict.counterexample.items()}
print("  counterexample:", assignment)

# the conclusion u <= a is what breaks: u is not in the hull of {a}
u, a = verdict.counterexample["u"], verdict.counterexample["a"]
print("  u below a:", L.le(u, a))
