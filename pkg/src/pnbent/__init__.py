"""Perfect nonlinear functions between finite groups and their bent-function duals."""
from .duals import DualTable, Representation, characters, irreps, load_dual, save_dual, verify_dual
from .groups import (FiniteGroup, cyclic_group, dihedral_group, direct_product, from_cayley_table,
                     group_from_spec, is_abelian, quaternion_group, symmetric_group)
from .nonlinearity import (FunctionTable, PnVerdict, bent_ab_ab, bent_ab_nab, bent_auto, bent_nab_ab,
                           bent_nab_nab, norm_condition, pn_oracle)
from .search import SearchJob, run_search

__all__ = [
    "DualTable", "Representation", "characters", "irreps", "load_dual", "save_dual", "verify_dual",
    "FiniteGroup", "cyclic_group", "dihedral_group", "direct_product", "from_cayley_table",
    "group_from_spec", "is_abelian", "quaternion_group", "symmetric_group",
    "FunctionTable", "PnVerdict", "bent_ab_ab", "bent_ab_nab", "bent_auto", "bent_nab_ab",
    "bent_nab_nab", "norm_condition", "pn_oracle", "SearchJob", "run_search",
]
