"""Exact Čech and generalized-fractions complexes of graded modules."""

from .fields import QQ, PrimeField, RationalField, field_from_string
from .polynomials import FreeVector, Poly, PolyRing, parse_polynomial
from .groebner import GroebnerLimitError, Submodule, colon, colon_ideal, saturate
from .linalg import Echelon, Matrix
from .graded import GradedModule, HomogeneousMap
from .complexes import (ComplexMorphism, HomologyCell, HomologyTable, LevelComplex, ModelError,
                        colimit_homology, homology_table, induced_map, ses_exactness_report)
from .cech import CechComplex, build_cech, generator_independence_check, local_cohomology
from .genfrac import (GeneralizedFraction, GenFracComplex, TriangularDenominator, build_genfrac_complex,
                      genfrac_homology, induced_morphism, render_fraction, validate_denominator)
from .filter_regular import (check_power_stability, is_filter_regular, is_unconditioned,
                             synthesize_generators)
from .comparison import (apply_gf_to_ses, build_theta, koszul_resolution, syzygy_resolution, theta,
                         top_homology_iso_check, tor_vanishing_check, two_element_case,
                         verify_quasi_isomorphism)
from .session import SessionError, SessionSpec, parse_session, render_session
from .runner import Report, render_certificate, run

__version__ = "0.1.0"
