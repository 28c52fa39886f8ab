"""Exact computations with rational representations of split reductive groups over Z and Z/n.

Everything is integer arithmetic. The representation-theoretic layer is
implemented for the root datum A1 (SL2); lattice routines are general.
"""

__version__ = "0.1.0"

from .errors import GlabError
from .exact_linalg import IntMatrix, Sublattice, cokernel_structure, kernel_basis, smith_normal_form, snf_mod
from .gmodule import GMap, GModule, SubgroupTag, dual, invariants, standard_rep, sym_power, tensor, trivial, validate
from .induction import costandard, delta, nabla, standard_module, steinberg
from .root_data import A1, RootDatum, Weight, type_a

__all__ = [
    "__version__",
    "A1",
    "GMap",
    "GModule",
    "GlabError",
    "IntMatrix",
    "RootDatum",
    "SubgroupTag",
    "Sublattice",
    "Weight",
    "cokernel_structure",
    "costandard",
    "delta",
    "dual",
    "invariants",
    "kernel_basis",
    "nabla",
    "smith_normal_form",
    "snf_mod",
    "standard_module",
    "standard_rep",
    "steinberg",
    "sym_power",
    "tensor",
    "trivial",
    "type_a",
    "validate",
]
