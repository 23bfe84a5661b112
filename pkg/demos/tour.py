"""
A tour of zero-divisor graphs
=============================

Builds a few rings, their zero-divisor graphs, the compressed graph on
annihilator classes and the weighted quotient matrix, then compares the
exact characteristic polynomials with floating-point eigenvalues.

Run with ``python3 demos/tour.py``.
"""

from zdg import build_ring, charpoly, rank
from zdg.construct import compressed_graph, decorate, gamma_product, weighted_quotient_matrix, zero_divisor_graph
from zdg.graphs import to_dot
from zdg.spectra import spectrum_of_ring

# Z8: zero-divisors 2, 4, 6 with 4 looped since 4*4 = 0
z8 = build_ring("Z8")
g = zero_divisor_graph(z8)
print(to_dot(g, name="G(Z8)"))
print("chi(G(Z8)) =", charpoly(g.adjacency))

# the product graph of the factors' graphs is the graph of the product ring
prod = gamma_product(decorate(build_ring("Z8")), decorate(build_ring("Z4"))).graph
direct = zero_divisor_graph(build_ring("Z8xZ4"))
print("Z8 x Z4:", prod.order, "vertices; same graph:", (prod.adjacency == direct.adjacency).all())

# compressing by annihilator class keeps the nonzero part of the spectrum
ring = build_ring("Z8xZ4")
cg = compressed_graph(ring)
q = weighted_quotient_matrix(cg)
print("classes:", list(zip(cg.labels, cg.sizes)))
print("quotient matrix:\n", q)
chi_q = charpoly(q)
chi = charpoly(direct.adjacency)
eta = direct.order - rank(direct.adjacency)
print(f"chi(A) = x^{eta} * chi(Q):", chi == chi_q * chi_q.monomial(eta))

# a local ring of order 81 that is not of the form Z_n
ex = build_ring("fixture:ex34")
print("fixture:", ex.size, "elements,", len(ex.units), "units,", len(ex.zero_divisors), "zero-divisors")
print("spectrum:", spectrum_of_ring(ex))
