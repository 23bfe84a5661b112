"""Zero-divisor graphs of finite commutative rings: construction, exact spectra, verification."""

from .construct import (
    CompressedGraph,
    DecoratedGraph,
    compressed_graph,
    decorate,
    extended_compressed_matrix,
    extended_graph,
    gamma_product,
    kronecker_extended_matrix,
    weighted_quotient_matrix,
    zero_divisor_graph,
)
from .graphs import LoopGraph, complement, complete_product, direct_product, generalized_complement, point_identification
from .linalg import charpoly, det, nullity, rank
from .polynomial import X, IntPolynomial, divides, squarefree_decomposition
from .rings import (
    FiniteRing,
    Modular,
    RingDescriptor,
    build_ring,
    fixture_ex34,
    is_local,
    modular_product,
    modular_ring,
    parse_ring_spec,
    product_ring,
    validate_ring,
)
from .spectra import Spectrum, closed_form_p3, closed_form_p4, eigenvalues_symmetric, spectrum_of_ring
from .verify import VerificationReport, aggregate, run_suite

__version__ = "0.1.0"
