"""Finite-scale combinatorial independence, entropy and ℓ1 tools for ℤ-subshifts."""
from .entropy import (Cover, cover_number_N, cpa_from_partition, dynamical_entropy_curve, h_minus_proxy,
                      hcpa_upper_estimate, join, join_over_window, sequence_entropy_curve, shannon_entropy)
from .errors import (BudgetExceeded, CertificateInvalid, CombindepError, Degenerate, DepthCapExceeded,
                     EmptyLanguage, NonDisjointNeighbourhoods, PremiseFailed, UnsupportedSpec, WordTooLong)
from .independence import (EVERYTHING, ExactAtoms, Fixed, GreedyAdversary, IndependenceCertificate,
                           NotIndependent, PerElement, detect_ie_pair, is_independence_set,
                           max_independence_subset, phi_density, sequential_density_estimate,
                           upper_density_estimate)
from .l1 import (CylinderFunction, FunctionFamily, l1_constant, l1_isomorphism_set, perturb_and_test,
                 rosenthal_dor_bound)
from .measures import Bernoulli, Empirical, Markov, cylinder_measure, parry_measure, point_mass
from .shattering import (PatternSet, cover_bound, cover_number, density_lemma_search, km_threshold,
                         largest_shattered_subset, separated_to_shattered, split_selection)
from .symbolic import (BorelLikeSet, CylinderSet, Partition, SetTuple, SubshiftSpec, cyl, symbol_partition)
from .systems import fixed_point_system, full_shift_system, golden_mean_system
from .tame import build_tame_example

__all__ = [name for name in dir() if not name.startswith("_")]
