"""Rank-2 Sugawara vectors, their Cartan images, and the centrality pin."""

from critcenter import ss_vectors, state_is_central

family = ss_vectors(2)
for ell in (1, 2):
    print(f"S_{ell}     = {family.S[ell - 1]}")
    print(f"omega_{ell} = {family.omega[ell - 1]}")

central = [state_is_central(s, 2) for s in family.S]
print("central in the vacuum module:", central)
print("OK" if all(central) else "FAILED")
