"""Closed k-Schur Katalan functions with exact integer arithmetic."""

from .katalan import KatalanSpec, Verdict, closed_kschur, expand_katalan, generalized_closed
from .oracle import branch_oracle, dual_pieri_oracle, expand_in_gtilde
from .rootideal import RootIdeal, delta_k
from .straighten import SignedExpansion, dual_pieri, lower_closed, lower_product, straighten_full, straighten_once
from .symfunc import HPoly, e_perp, g_det, g_perp, h, k_inhom

__all__ = [
    "HPoly", "KatalanSpec", "RootIdeal", "SignedExpansion", "Verdict",
    "branch_oracle", "closed_kschur", "delta_k", "dual_pieri", "dual_pieri_oracle", "e_perp",
    "expand_in_gtilde", "expand_katalan", "g_det", "g_perp", "generalized_closed", "h", "k_inhom",
    "lower_closed", "lower_product", "straighten_full", "straighten_once",
]
