"""
Circulant algebra with exact fractions
======================================

A circulant matrix is stored as its first row.  Products are cyclic
convolutions and the transpose just reverses the tail of the row.  Entries
stay exact fractions throughout.
"""

from fractions import Fraction

from circhad import circ, constant, conj_transpose, materialize, mul, row_sum

# the second row is the first row shifted right by one
A = circ(1, 2, 3, 4)
for r in materialize(A):
    print([str(x) for x in r])

# J^2 = n J and H H^* = n I for a circulant Hadamard matrix
J = constant("all_ones", 4)
H = circ(1, -1, -1, -1)
print("J @ J   =", mul(J, J))
print("H @ H^* =", mul(H, conj_transpose(H)))

# scalar multiples and sums stay circulant and exact
S = (circ(-1, 1, 1, 1) + J) / 6
print("S =", S, " row sum:", row_sum(S))
print("S @ S^* =", S @ S.H)
print("one third plus two ninths:", Fraction(1, 3) + Fraction(2, 9))
