"""Exact arithmetic for mod-p modular symbols and Hecke eigensystem congruences.

Everything is computed over exact finite fields F_{p^d} (or exact rationals);
no floating point is used anywhere.
"""

__version__ = "0.1.0"

from .gfq import GF, QQ, Mat, build_field, rref, charpoly_and_eigenspaces
from .cong import SubgroupSpec, p1_list, p1_normalize, lift_to_sl2z, cusp_classes
from .coef import (
    trivial_module,
    symm_module,
    induced_module,
    split_induced,
    ev_intertwiner,
    twisted_tensor_module,
)
from .msym import (
    ManinSpace,
    build_space,
    hecke_operator,
    diamond_operator,
    star_involution,
    cuspidal_subspace,
    degeneracy_down,
    shapiro_iso,
    pnew_subspace,
)
from .eig import (
    Eigensystem,
    decompose,
    occurs_in,
    sturm_bound,
    verify_weight_raising,
    levelraise_check,
)
from .rep import (
    group_table,
    brauer_signature,
    ss_equal,
    meataxe_irreducible,
    verify_semisimplicity,
)
from . import classical
