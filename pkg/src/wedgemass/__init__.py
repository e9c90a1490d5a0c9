"""Consistent mass matrix of the 15-node wedge element.

Exact rational reference integration, reduced-point metric-interpolation
schemes (CM, LM, QM) and an 18-point Gauss baseline.
"""
from .bench import FamilyId, SweepConfig, SweepRecord, family_nodes, run_sweep, write_csv
from .massmat import ErrorStats, error_stats, mass_exact, mass_exact_rational, mass_matrix, mass_scheme
from .quad import QuadratureRule, apply_mass_rule, gauss18
from .ratpoly import Monomial, Poly3, monomial_integral, wedge_integral
from .schemes import (
    CoeffMatrices,
    SchemeKind,
    SchemeSpec,
    embedded_coeff_matrices,
    generate_coeff_matrices,
    interpolated_metric,
    metric_samples,
    scheme_spec,
)
from .wedge15 import (
    NODE_NATURAL,
    PARENT_NODES,
    NonPhysicalElementError,
    check_physical,
    isoparametric_map,
    jacobian,
    metric_polynomial,
    min_metric,
    read_nodes,
    shape_polynomials,
    shape_values,
    volume,
    write_nodes,
)

__version__ = "0.1.0"
