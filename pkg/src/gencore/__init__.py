"""Generalized matrix inverses over float or exact rational complex matrices.

Moore-Penrose, group, Drazin, core, core-EP and DMP inverses, plus the
⟨i,m⟩-core and (j,m)-core inverses, each reachable by more than one
algorithm so the results can be checked against one another.
"""

from .classical import Algorithm, core_ep, core_ep_power, core_inverse, dmp, drazin, group_inverse
from .errors import (
    BackendUnsupported,
    ConvergenceFailure,
    DimensionMismatch,
    GenInverseError,
    Inconsistent,
    IndexTooLarge,
    NilpotentInput,
    RankDecisionAmbiguous,
    SingularGram,
    SingularMatrix,
    ZeroMatrix,
)
from .factor import full_rank_chain, full_rank_factorize, moore_penrose, pinv_product_formula, rank, svd
from .imjm import (
    GenCoreResult,
    ImCoreParams,
    JmCoreParams,
    coreep_coincidence,
    dmp_coincidence,
    duality_check,
    im_core,
    im_core_index_invariance_check,
    jk_from_dmp_coreep,
    jm_core,
)
from .numfield import DEFAULT_TOL, ExactC, Mat, Tolerance, adjoint, approx_eq, matmul, matpow
from .spectral import core_nilpotent, hs_form, index
from .verify import DefinitionTag, VerifyReport, check_lemma24_25, is_ep, is_projector_onto_power_range, verify

__all__ = [
    "Algorithm",
    "core_ep",
    "core_ep_power",
    "core_inverse",
    "dmp",
    "drazin",
    "group_inverse",
    "BackendUnsupported",
    "ConvergenceFailure",
    "DimensionMismatch",
    "GenInverseError",
    "Inconsistent",
    "IndexTooLarge",
    "NilpotentInput",
    "RankDecisionAmbiguous",
    "SingularGram",
    "SingularMatrix",
    "ZeroMatrix",
    "full_rank_chain",
    "full_rank_factorize",
    "moore_penrose",
    "pinv_product_formula",
    "rank",
    "svd",
    "GenCoreResult",
    "ImCoreParams",
    "JmCoreParams",
    "coreep_coincidence",
    "dmp_coincidence",
    "duality_check",
    "im_core",
    "im_core_index_invariance_check",
    "jk_from_dmp_coreep",
    "jm_core",
    "DEFAULT_TOL",
    "ExactC",
    "Mat",
    "Tolerance",
    "adjoint",
    "approx_eq",
    "matmul",
    "matpow",
    "core_nilpotent",
    "hs_form",
    "index",
    "DefinitionTag",
    "VerifyReport",
    "check_lemma24_25",
    "is_ep",
    "is_projector_onto_power_range",
    "verify",
]

__version__ = "0.1.0"
