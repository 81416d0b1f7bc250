"""Exact verification toolkit for line covers of finite projective and
polar spaces: field tables, geometry contexts, cover predicates, tight-set
and two-character checks, and the named constructions behind them."""

from .fields import (FieldError, FieldTable, ExtensionPair, build_field,
                     build_extension, frob_trace_norm, MODULI, MAX_ORDER)
from .projective import (GeometryError, GeometryContext, Subspace, theta,
                         gaussian, make_context, make_subspace,
                         enumerate_points, enumerate_subspaces, span, meet,
                         contains, contains_subspace, subspace_points,
                         line_points, normalize)
from .polar import (PolarSpace, BaerEmbedding, polar_space, make_polar,
                    build_embedding, perp, ti_lines, ti_planes,
                    classify_line, extend_line, check_commuting,
                    SYMPLECTIC, PARABOLIC, HERMITIAN)
from .covers import (CoverError, LineSet, CoverProfile, DualSpectrum,
                     cover_profile, check_lemma1, check_lemma4,
                     is_dual_projective, is_dual_symplectic,
                     is_dual_parabolic, parse_lineset, write_lineset)
from .analysis import (AnalysisError, PolarityBundle, TwoCharReport,
                       TightReport, EquivalenceReport, bar_set,
                       two_char_check, tight_check, tight_values,
                       char_residual, make_bundle, orbit_labels, orbit_masks,
                       expected_orbit_sizes, classify_h_lines,
                       line_census_check, orbit_tightness_check,
                       quadric_orbit_tightness_check, verify_equivalence,
                       bar_two_char_params)
from .constructions import (ConstructionError, SingerCycle, HexagonModel,
                            DyeBundle, SimplexModel, SIMPLEX_CONFIGS,
                            primitive_polynomial, singer_cycle,
                            singer_line_orbits, singer_partition_check,
                            hexagon_lines, hexagon_project_even, line_spread,
                            dye_build, dye_classify_lines, dye_M,
                            dye_M_line_check, dye_R, dye_orbit_tightness,
                            simplex_tight, symplectic_basis, witt_basis,
                            parabolic_to_canonical, transform_lineset)
from .suite import run_battery

__all__ = [n for n in dir() if not n.startswith("_")]
__version__ = "0.1.0"
