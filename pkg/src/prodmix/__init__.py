"""Exact product-mixing computations on small finite groups."""

__version__ = "0.1.0"

from .groups import (ConjClass, ElementSet, GroupTable, build_group, conjugacy_classes, inverse_set,
                     is_simple, left_translate, normal_closure)
from .chartable import (CharTable, character_ratio_scan, class_number_exponent, dixon_char_table,
                        k_epsilon, min_nontrivial_degree, witten_zeta)
from .mixing import (MixReport, count_pairs, count_triples_g, frobenius_count, frobenius_error_bound,
                     gowers_check, gowers_trick_check, prob, verify_cyclic_identities,
                     verify_triple_identities)
from .certify import (MixerCertificate, certify_mixer, contains_large_class, end_to_end_report,
                      epsilon_prime, normal_mix_bounds, split_by_class_size, verify_propagation)
from .io import load_group, parse_char_table_file, parse_group_file
