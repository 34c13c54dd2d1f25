"""
Making a lattice biatomic by doubling
=====================================

Every element that is neither the bottom nor an atom gets split into a
complementary pair of atoms.  The original lattice embeds in the result,
and the result is atomistic and biatomic.
"""

from latkit.analysis import is_atomistic, is_biatomic, is_join_semidistributive
from latkit.extend import biatomic_completion
from latkit.generators import chain

# a three-element chain: not atomistic (the top sits above a single atom)
L = chain(3)
print("base:", [L.label(x) for x in range(L.n)])
print("  atomistic:", is_atomistic(L))

M, emb = biatomic_completion(L)

# the chain had one proper element (the top), so two atoms were added
print("completion:", [M.label(x) for x in range(M.n)])
print("  atomistic:", is_atomistic(M))
print("  biatomic: ", is_biatomic(M))

# the embedding keeps every operation and both bounds
print("  preserved:", emb.preserved.as_dict())

# biatomicity can cost join-semidistributivity: this completion is a
# diamond, where x v p = x v q for distinct atoms p, q
print("  jsd:      ", is_join_semidistributive(M))

for x in range(L.n):
    image = emb.map[x]
    print(f"  {L.label(x)!r} -> {M.label(image)!r}")
