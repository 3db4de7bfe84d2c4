"""cspcount: exact evaluation and dichotomy classification of
complex-weighted Boolean counting CSPs with bounded instance degree."""

from ._backend import BACKEND_NAME
from .classifier import (
    Classification,
    check_certificate,
    classify_set,
    low_degree_verdict,
)
from .constraints import (
    Constraint,
    builtin,
    from_symmetric,
    identify,
    is_non_zero,
    is_symmetric,
    nonzero_part,
    pin,
    pointwise_product,
    project,
    scale,
    underlying_relation,
)
from .errors import (
    CapExceededError,
    CspcountError,
    InputError,
    PreconditionError,
    VerificationError,
)
from .evaluators import (
    eval_csp_bruteforce,
    eval_degree1,
    eval_ed_polytime,
    eval_holant_bruteforce,
)
from .frames import (
    ConstraintFrame,
    FrameAtom,
    SignatureGrid,
    check_eq_separation,
    csp_to_holant,
    degree,
    degree2_to_holant,
    holant_eq3_form,
    holant_to_degree2,
)
from .gadgets import (
    Derivation,
    Gadget,
    RealizationReport,
    build_eq_gadget,
    compose,
    realize,
    verify_realization,
)
from .membership import (
    DistinctiveList,
    FactorAtom,
    FactorList,
    binary_dg_test,
    disj_membership,
    distinctive_list,
    ed_factorization,
    ed_membership,
    is_degenerate,
    nand_membership,
    width,
)
from .pipeline import (
    ReductionResult,
    eliminate_eq_nodes,
    reduce_to_degree3,
    substitute_eq_gadgets,
    to_degree2_eqform,
    verify_reduction,
)
from .scalars import GaussianRational, arith, format_scalar, gr, parse_scalar

__version__ = "0.1.0"
