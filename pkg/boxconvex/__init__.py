"""``boxconvex`` decides convexity of low degree polynomials over boxes and
positive semidefiniteness of interval matrix families in exact rational
arithmetic, and builds and verifies the MAX-CUT reductions that make both
problems hard.

"""

from .convexity import CertificationMode
from .convexity import ConvexityStatus
from .convexity import ConvexityVerdict
from .convexity import check_cubic_exact
from .convexity import check_general
from .convexity import check_lifted_exact
from .convexity import check_quadratic
from .convexity import check_sampled
from .convexity import gershgorin_box_sufficient
from .convexity import negative_curvature_search
from .gadgets import Cut
from .gadgets import GadgetCubic
from .gadgets import Graph
from .gadgets import NemirovskiGadget
from .gadgets import build_gadget
from .gadgets import instance_metrics
from .gadgets import lift_degree
from .gadgets import maxcut_to_cubic
from .gadgets import maxcut_to_interval
from .gadgets import witness_from_cut
from .helpers import add_logging_level_options
from .helpers import add_seed_options
from .helpers import auto_graph_parametrize
from .helpers import set_logging_level_from_cli_args
from .interval import IntervalSymMatrix
from .interval import check_interval_psd
from .interval import interval_enclosure
from .linalg import PsdCertificate
from .linalg import SymMatrix
from .linalg import is_psd
from .oracles import cut_size
from .oracles import gap_check
from .oracles import lemma_bound_check
from .oracles import max_cut_bruteforce
from .oracles import verify_reduction
from .polynomial import AffinePencil
from .polynomial import Box
from .polynomial import Polynomial

__all__ = [
    "CertificationMode",
    "ConvexityStatus",
    "ConvexityVerdict",
    "check_cubic_exact",
    "check_general",
    "check_lifted_exact",
    "check_quadratic",
    "check_sampled",
    "gershgorin_box_sufficient",
    "negative_curvature_search",
    "Cut",
    "GadgetCubic",
    "Graph",
    "NemirovskiGadget",
    "build_gadget",
    "instance_metrics",
    "lift_degree",
    "maxcut_to_cubic",
    "maxcut_to_interval",
    "witness_from_cut",
    "add_logging_level_options",
    "add_seed_options",
    "auto_graph_parametrize",
    "set_logging_level_from_cli_args",
    "IntervalSymMatrix",
    "check_interval_psd",
    "interval_enclosure",
    "PsdCertificate",
    "SymMatrix",
    "is_psd",
    "cut_size",
    "gap_check",
    "lemma_bound_check",
    "max_cut_bruteforce",
    "verify_reduction",
    "AffinePencil",
    "Box",
    "Polynomial",
]
