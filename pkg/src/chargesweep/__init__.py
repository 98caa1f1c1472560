"""Balayage of charge distributions onto the imaginary axis, with desk-scale checks."""

__version__ = "0.1.0"

from .balayage import (BalayageResult, balayage_genus0, balayage_genus01, balayage_genus1,
                       distribution_oracle, two_sided_balayage)
from .errors import (ChargeSweepError, DomainError, EligibilityError, HypothesisError,
                     InsufficientSamplesError, QuadratureError, ValidationError)
from .growth import (GrowthReport, RadialProfile, convergence_integral, growth_report,
                     order_estimate, profile_of, type_estimate)
from .harness import (HarnessConfig, TheoremReport, check_difference_lindelof,
                      check_kernel_bounds, check_trnuair, estimate_C, run_instance,
                      sample_sector_measure)
from .kernels import genus1_charge, harmonic_measure, kernel_density, quadrature_oracle
from .lindelof import LindelofReport, annulus_sums, boundedness_verdict, lindelof_scan
from .measure import (Atom, AxisCharge, ChargeDistribution, Region, axis_distribution,
                      jordan_parts, radial_counting, restrict, sector_clear, variation_mass)

__all__ = [name for name in dir() if not name.startswith("_")]
