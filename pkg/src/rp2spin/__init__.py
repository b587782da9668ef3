"""Numerical checks for line bundles over RP^2 and the two-spin transported basis."""
from .errors import (AntipodalAmbiguityError, InvarianceError, NotInFiberError,
                     PairingError, ParityError, Rp2SpinError, StepTooLargeError)
from .geometry import (DiscretePath, ProjectivePoint, SpherePoint, SU2Element,
                       antipode, build_path, canonical_rep, canonicalize,
                       haar_sample, random_sphere_points, rotate, wigner_d1)
from .sections import SampledSection, paired_points
from .scalar import (even_odd_split, grassmann_projector, iso_backward, iso_forward,
                     psi, real_intertwiner, real_projector, tilde_projector)
from .connection import (ProjectorField, TransportResult, curvature_probe,
                         frame_connection_check, grassmann_field, holonomy,
                         holonomy_matrix, local_spin_operator, orbit_transport_check,
                         parallel_transport, real_field)
from .twospin import (TransportedBasis, spin_operator_field, transported_basis,
                      triplet_projector, two_spin_field, w_matrix)
from .quotient import (SpinSection, Z2ActionSpec, parity_audit,
                       singlevaluedness_audit, tau_act)
from .checks import CheckReport, RunConfig, convergence_sweep, run_suite

__version__ = "0.1.0"
