"""Generalized Eisenstein series with twisted shifts: exact q-forms, small-tau
expansions with remainders, and the identities that follow from them."""

from .numkernel import (
    MINUS,
    PLUS,
    BranchSelector,
    BudgetError,
    CoverPoint,
    DomainError,
    EisenzetaError,
    EvalResult,
    PoleError,
    RegimeError,
    ResonanceError,
    Truncation,
    UnsupportedShapeError,
    branch_pow,
    cover_pow,
    e_of,
    frac_parts,
    tau_z_convert,
)
from .coeffs import CoeffTable, bernoulli, coeff_A, coeff_C
from .lerch import LerchArgs, gamma_fn, hurwitz_zeta, psi_bilateral, psi_lerch, psi_special, residue_at_1
from .hypergeom import f_sJ, kummer_1f1, kummer_u, upper_incomplete_gamma
from .qseries import SArgs, s_eval, s_tail_bound
from .eisenstein import (
    EisensteinParams,
    ExpansionOrder,
    abc_coeffs,
    asymptotic_SJ,
    f_brute,
    f_qform,
    remainder_mellin_barnes,
    remainder_refined,
    remainder_subtraction,
)
from .identities import (
    IdentityReport,
    euler_even,
    fprime_check,
    functional_equation_check,
    ramanujan_check,
    ramanujan_odd,
)
from .classical import E, LatticePoint, invariants_e, quasimodular_check, wp, wsigma, wzeta

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
