"""Covariance-matrix steering criteria for finite-dimensional and Gaussian states."""

__version__ = "0.1.0"

from .covariance import CovarianceBlocks, bipartite_blocks, covariance_matrix
from .criteria import (
    AB,
    BA,
    SteeringVerdict,
    WitnessReport,
    extract_witness,
    lur_bound_loos,
    lur_test,
    prop1,
    prop2,
    trace_norm,
)
from .gaussian import GaussianCM, prop3, read_gaussian_cm, symplectic_form, two_mode_squeezed_vacuum
from .loo import ObservableSet, expectation, gell_mann_loos, pauli_loos, rotate_loos
from .states import (
    BipartiteState,
    DensityMatrix,
    FamilySpec,
    family_state,
    make_density,
    partial_trace,
    purity,
)
