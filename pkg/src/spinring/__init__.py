"""Exact diagonalization and two-spin entanglement for spin-1/2 rings
with power-law pair couplings."""

from .model import (INFINITY, CouplingTable, HamiltonianMatrix, RingSizeError,
                    RingSpec, SectorBlock, Variant, build_hamiltonian,
                    build_sector_blocks, chord_distance, coupling_table,
                    coupling_weight, top_eigenspace_basis)
from .spectra import (DecompositionCache, EigensolverError, IllConditionedError,
                      Level, LevelPairing, SpectralDecomposition, UniformEigenstate,
                      cluster_levels, diagonalize, lagrange_projector, match_levels,
                      match_single_level, overlap_matrix, projector, uniform_state)
from .entanglement import (ConcurrenceRecord, PairStateWarning, StructureError,
                           TwoSpinState, concurrence_structured,
                           concurrence_xstate_oracle, extract_abc, meyer_wallach,
                           oliveira_global, pair_concurrence, reduce_one_site,
                           reduce_sites, reduce_two_sites)
from .analysis import (CONCURRENCE_THRESHOLD_DEFAULT, CrossingEvent, CurveCensus,
                       CurveEntanglement, InsufficientDataError, LevelCurve,
                       LinearFit, SweepError, SweepPoint, SweepResult,
                       all_crossings, count_distinct_levels, default_alpha_grid,
                       distance_selectivity_check, entangled_level_census,
                       entangled_projector_census, entanglement_boundaries,
                       find_last_crossing, locate_crossing, nn_linear_fit,
                       projector_dimension_histogram, separation_existence_intervals,
                       separation_gaps, sweep)
from .serialize import (SCHEMA_VERSION, atomic_write, emit_csv, emit_json,
                        format_real, parse_real)

__version__ = "0.1.0"
