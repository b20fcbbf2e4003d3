"""Exact Laurent periods, torus loop brackets and descendant symbol calculus."""

from .errors import (DimensionMismatch, DivisibilityFailure, DomainViolation, InvalidStep,
                     NonBalanced, NotUnimodular, ParseError, QPeriodsError,
                     ReductionIncomplete, StretchUniquenessError, ZeroVector)
from .laurent import (LaurentPoly, MutationSpec, apply_unimodular, classical_period_series,
                      format_poly, mutate, parse, period, period_numeric)
from .series import PeriodSeries
from .potentials import ProjectiveProductSpec, ToricRaySet, catalog, hori_vafa, \
    product_projective_potential
from .quantum_periods import known_quantum_period, mirror_check, stretch_solver
from .string_topology import ExtElement, LoopClass, bracket, bv, cs_product, goldman_t2, \
    interior_product, wedge
from .descendants import (DerivationCertificate, DescendantSymbol, SkewData, bs_power_expansion,
                          evaluate, is_balanced, reduce, relation_terms, verify_certificate)

__version__ = "0.1.0"
