"""Possibilistic merging of prioritized propositional bases."""

from .config import Settings, configured, settings
from .errors import (CapExceededError, ClassMismatchError, ContractViolationError,
                     ExplosionCapError, FormulaSyntaxError, FusionError, KBFormatError,
                     NaryUndefinedError, UnknownAtomError, UnknownOperatorError)
from .fusion import (FusedBase, FusionProblem, adaptive_fuse, classical_extraction,
                     classical_merge, dictator_refine, discount, fuse, fuse2, fuse_n,
                     reinject, semantic_fuse, weighted_min_distribution, weighted_min_fuse)
from .logic import Formula, entails, equivalent, is_consistent, models, parse, to_text
from .operators import BUILTINS, Operator, adaptive, builtin, classify, from_table
from .possibilistic import (Distribution, PossibilisticBase, WeightedFormula, alpha_cut,
                            base_equivalent, entailment_degree, inconsistency_degree,
                            necessity, normalize, pi_entails, possibility, to_distribution,
                            union)

__version__ = "0.1.0"
