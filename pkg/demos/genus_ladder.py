"""From the right-angled hexagon group to closed surfaces of every genus.

Run: python3 demos/genus_ladder.py
"""

from semiarith.grouptheory import (
    DISTINGUISHED,
    ETA_ASSIGNMENT,
    abelianization_rank,
    genus_two_kernel,
    kernel_of_cyclic,
    word_to_str,
)

K = genus_two_kernel()
S = K.tietze.presentation
print("index-2 kernel of c_i -> 1:", S)
print("c1 c2 becomes", word_to_str(DISTINGUISHED, S.generators))

# cyclic covers that kill x y^2 keep the short geodesic
for n in range(2, 7):
    sub = kernel_of_cyclic(S, ETA_ASSIGNMENT, n)
    print("n=%d  genus %d  H1 rank %d  contains x y^2: %s"
          % (n, n + 1, abelianization_rank(sub.presentation), sub.contains(DISTINGUISHED)))
