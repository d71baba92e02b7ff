"""Exact arithmetic for integral quadratic forms: p-adic invariants,
local representability with bounded imprimitivity, genus enumeration via
Kneser neighbors, global representation search, and local-global scans."""

from .matrices import (GramMatrix, IntMatrix, SmithForm, column_hnf,
                       congruence_diagonalization, det, det_int,
                       diagonalize_over_Q, elementary_divisors,
                       gram_of_columns, inner_product, integer_kernel,
                       invert_unimodular, is_positive_definite, load_gram,
                       orthogonal_complement, parse_gram, saturate,
                       smith_normal_form, solve_integer_columns)
from .padic import (Place, REAL, SpaceInvariants, JordanComponent,
                    JordanSplitting, hasse_invariant, hilbert_symbol,
                    is_isotropic, is_local_square, jordan_decomposition,
                    legendre, ord_p, relevant_places, space_invariants,
                    space_represents, squarefree_class, unit_part)
from .enumeration import (Embedding, ShortVectorReport, extend_representation,
                          find_representations, imprimitivity_bound,
                          lattice_minimum, lll_reduce,
                          search_primitive_superlattice, short_vectors,
                          vectors_of_norm)
from .localrep import (LocalRepCertificate, NOT_REPRESENTABLE, REPRESENTABLE,
                       UNDECIDED, auto_isotropy_shortcut,
                       complement_isotropic_at_q,
                       represents_locally_everywhere, represents_over_Zp)
from .genus import (GenusRecord, SpinorNormClass, enumerate_genus,
                    is_isometric, p_neighbors, represented_by_all_classes,
                    spinor_norm_reflection)
from .reports import (HypothesisReport, ScanResult, ScanRow,
                      check_theorem_hypotheses, parse_family, report_emit,
                      scan_family)

__version__ = "0.1.0"
