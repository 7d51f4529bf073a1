"""Desk-scale p-adic dynamics of Frobenius lifts on projective space.

Layers, bottom up: finite fields (residue), p-adic fields (local), the
characteristic-p tilt side (tilt), polynomials (poly), projective points and
varieties (proj), Frobenius-lift dynamics (dynamics), coherent orbits and
their tilts (tilting), vanishing ideals over finite fields (closure), and the
experiment driver (config, experiments, cli).
"""

from .closure import (ClosureReport, IdealBasis, StabilityReport, closure_of_root_orbit,
                      frobenius_stability_check, vanishing_ideal_upto_degree)
from .config import ExperimentConfig, load_config
from .dynamics import (FrobeniusLift, GaloisCertificate, InvarianceResult, PeriodicPoint, apply,
                       backward_step, canonical_preimage, chart_series, enumerate_periodic,
                       galois_periodicity_check, invariance_check_hypersurface, is_periodic,
                       periodic_point_in_disk, residue_map, teichmuller_point, validate_lift,
                       verify_preimage)
from .errors import *  # noqa: F401,F403
from .experiments import (ExperimentResult, run_backward_dml, run_dmm_check, run_experiment,
                          run_tilt_demo, run_tv_gap)
from .local import (LocalField, PadicNumber, hensel_root, sigma, teichmuller,
                    teichmuller_digits)
from .norms import Norm
from .poly import (HomogPoly, Poly, compose, dehomogenize, evaluate, exact_divide, format_poly,
                   gauss_normalize, homogenize, parse_poly, sigma_twist)
from .proj import (Distance, ProjPoint, Variety, distance_to_variety, normalize_point,
                   reduction_map)
from .residue import (GF, FqElement, FqField, enumerate_proj_points, field_of_definition,
                      frobenius_s, proj_point_count)
from .tilt import SplitResult, TiltElement, eisenstein_split, tilt_frobenius
from .tilting import (AuditReport, CoherentOrbit, TiltPoint, backward_orbit, conjugacy_audit,
                      periodic_orbit_of, residue_orbit, tilt_of_orbit)

__version__ = "0.1.0"
