"""Kac's operation on characteristic functions and its generalizations."""

from chfn.cf import CharFn, Composed, Power, Rational, Tabulated, laplace
from chfn.charfn import (
    ExpDifference,
    GammaDrift,
    PowerFamily,
    SignedMixture,
    eval_cf,
    gaussian_limit_scan,
    kac_phi,
    make_counterexample,
    principal_branch_check,
    verify_identity,
)
from chfn.kernels import Exp, GammaBeta, GenLinnik, Kac, StableExp, compose, factor_recover, phi_L
from chfn.lk import DriftedLKExponent, LKExponent, is_indecomposable, lk_combine, lk_eval
from chfn.rational import ComplexRational

__version__ = "0.1.0"
