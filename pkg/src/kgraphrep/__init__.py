"""Finite higher-rank graphs, their path spaces, and exact decision
procedures for purely atomic permutative representations."""

from .degrees import Degree, degree_range, parse_degree
from .kgraph import (Edge, KGraph, KGraphError, InvalidSkeletonError, Morphism,
                     MinimalExtension, Skeleton, Square, Violation, check_skeleton,
                     compose, enumerate_morphisms, factorize, graph_properties,
                     lambda_min, morphisms_up_to, normal_form, segment, validate)
from .paths import (EventuallyPeriodicPath, GroupoidWitness, InfinitePath, LazyPath,
                    OrbitEnumeration, PathsVerdict, PeriodVerdict, UndecidedError,
                    enumerate_orbit_window, ep_path, ep_paths, in_same_orbit,
                    is_aperiodic, orbit_enumerate, path_segment, paths_equal,
                    prefix_path, pure_cycle_path, shift)
from .represent import (AtomicRepresentation, EquivalenceVerdict, Intertwiner,
                        MultiplicityMismatchError, NotWellDefinedError,
                        OrbitCollisionError, OrbitSpec, SpanCheck, Vec,
                        WindowExceededError, are_disjoint, build_intertwiner,
                        identity_matrix, orbit_representation, unitarily_equivalent)
from .sets import (AtomSingleton, Complement, Cylinder, FullSpace, Intersection,
                   PrefixImage, PrefixPreimage, SetExpr, ShiftPreimage, Union,
                   intersection, union)
from .verify import (CheckResult, atom_identity_suite, as_semibranching,
                     decompose_slices, default_degrees, encoding_suite, failures,
                     permutative_axiom_suite, pvm_identity_suite, sample_points,
                     semibranching_suite, verify_ck, verify_intertwiner,
                     verify_purely_atomic)
from .fileformats import (Diagnostic, GraphParse, RepParse, emit_graph, emit_report,
                          parse_graph, parse_rep, parse_report, thue_morse_path)

__all__ = [name for name in dir() if not name.startswith("_")]
