"""
The doubly stochastic matrix of a circulant Hadamard matrix
===========================================================

Every circulant Hadamard matrix of order 4 has row sum +-2.  After flipping
the sign so that the row sum is positive, (H + J) / 6 is circulant and
doubly stochastic with entries 0 and 1/3.
"""

from circhad import build_S, catalog, is_doubly_stochastic, normalize_sign, regular_profile

for entry in catalog():
    row = normalize_sign(entry.row)
    S = build_S(row)
    prof = regular_profile(entry.row)
    shape = f"h={prof.h}, {prof.positive_count} positive" if prof else "order 1"
    print(f"{entry.name:<4} {str(entry.row):<18} {shape:<16} S = {S}  doubly stochastic: {is_doubly_stochastic(S)}")
