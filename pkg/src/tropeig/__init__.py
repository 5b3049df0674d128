"""Tropical roots, tropical eigenvalues, and log-majorization bounds.

The product of the k largest eigenvalue moduli of a complex matrix is
bounded by a purely combinatorial constant (the spectral radius of the
k-th permanental compound of the zero pattern) times the product of the
k largest tropical eigenvalues of the entrywise absolute value; matching
conditional lower bounds hold under gap hypotheses on the optimal
assignment structure.  This package computes all of the objects involved
and verifies the inequalities at desk scale.
"""

from .assignment import (
    PartialPermutation,
    decompose_circulation,
    max_cycle_mean,
    optimal_assignment,
    validate_circulation,
)
from .bounds import (
    BoundReport,
    companion_comparison,
    friedland_check,
    hop_check,
    lower_bound,
    lower_bound_via_Ck,
    proof_chain_check,
    upper_bound_report,
    upper_constant,
)
from .compounds import (
    compound,
    entrywise_power,
    hadamard,
    limit_eigenvalue_curve,
    pattern,
    permanent,
    permanental_compound,
    spectral_radius,
)
from .dense_eig import (
    EigenSpectrum,
    char_poly,
    companion_matrix,
    eigenvalues,
    poly_roots,
)
from .trop_poly import (
    NewtonPolygon,
    RootMultiset,
    TropicalPolynomial,
    evaluate,
    max_times_relative,
    newton_polygon,
    tropical_roots,
)
from .trop_spectra import (
    TropicalSpectrum,
    tropical_char_poly,
    tropical_eigenvalues,
    tropical_exterior_power,
    tropical_spectral_radius,
    tropical_trace,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "EigenSpectrum",
    "NewtonPolygon",
    "PartialPermutation",
    "RootMultiset",
    "TropicalPolynomial",
    "TropicalSpectrum",
    "char_poly",
    "companion_comparison",
    "companion_matrix",
    "compound",
    "decompose_circulation",
    "eigenvalues",
    "entrywise_power",
    "evaluate",
    "friedland_check",
    "hadamard",
    "hop_check",
    "limit_eigenvalue_curve",
    "lower_bound",
    "lower_bound_via_Ck",
    "max_cycle_mean",
    "max_times_relative",
    "newton_polygon",
    "optimal_assignment",
    "pattern",
    "permanent",
    "permanental_compound",
    "poly_roots",
    "proof_chain_check",
    "spectral_radius",
    "tropical_char_poly",
    "tropical_eigenvalues",
    "tropical_exterior_power",
    "tropical_roots",
    "tropical_spectral_radius",
    "tropical_trace",
    "upper_bound_report",
    "upper_constant",
    "validate_circulation",
]
