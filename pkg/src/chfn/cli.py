"""Command-line driver: one subcommand per construction or characterization.

Every subcommand prints (or writes to ``--out``) a JSON report with an
explicit ``pass`` flag, or CSV data with ``--format csv``.  Exit status is
0 when every check passes, 1 when a mathematical check fails and 2 on a
usage or parameter error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from chfn.cf import Rational, laplace
from chfn.charfn import (
    ExpDifference,
    GammaDrift,
    PowerFamily,
    SignedMixture,
    gamma_drift_default_b,
    gaussian_limit_scan,
    make_counterexample,
    mixture_pair,
    principal_branch_check,
    verify_identity,
)
from chfn.errors import (
    ChfnError,
    ConjugatePairError,
    DomainError,
    MultiplicityError,
    ParameterError,
    StructureError,
)
from chfn.inversion import density_from_even_rational, numeric_inversion, positivity_report
from chfn.kernels import Exp, GammaBeta, Kac, compose, factor_recover
from chfn.lk import (
    LKExponent,
    Symmetry,
    geometric_id_check,
    indecomposable_parts,
    is_indecomposable,
    main_theorem_classify,
)
from chfn import montecarlo as mc
from chfn import pgf
from chfn.rational import ComplexRational
from chfn.serialize import to_csv, to_json

FN_HEADER = ["xi", "re_f1", "im_f1", "re_f2", "im_f2", "re_target", "im_target", "residual"]


@dataclass
class Result:
    report: dict
    header: list
    rows: list = field(default_factory=list)
    passed: bool = True


# --- argument helpers -------------------------------------------------------


def _positive(text):
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _atom(text):
    try:
        t, c = (float(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"atoms are written LOCATION:WEIGHT, got {text!r}") from None
    return t, c


def _seed(text):
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2**64)")
    return v


def _default_seed():
    env = os.environ.get("CHFN_SEED")
    return _seed(env) if env else 0


def _add_grid(p, lo, hi, count):
    p.add_argument("--grid", nargs=3, metavar=("MIN", "MAX", "COUNT"), type=float,
                   default=(lo, hi, count), help=f"evaluation grid (default {lo:g} {hi:g} {count})")


def _grid(args, limit=None):
    lo, hi, count = args.grid
    if count != int(count) or count < 3:
        raise ParameterError("grid count must be an integer >= 3")
    if limit is not None and count > limit:
        raise ParameterError(f"grid count must be at most {limit}")
    if not lo < hi:
        raise ParameterError("grid MIN must be below MAX")
    return np.linspace(lo, hi, int(count))


def _fn_rows(grid, f1v, f2v, tv, res):
    return [
        [x, a.real, a.imag, b.real, b.imag, t.real, t.imag, r]
        for x, a, b, t, r in zip(grid, np.asarray(f1v, dtype=complex), np.asarray(f2v, dtype=complex),
                                 np.asarray(tv, dtype=complex), res)
    ]


def _identity_result(f1, f2, target, grid, op, tol):
    ver = verify_identity(f1, f2, target, grid, op=op, tol=tol)
    rows = _fn_rows(grid, f1(grid), f2(grid), ver.target_values, ver.residuals)
    summary = {"max_residual": ver.max_residual, "tol": tol, "pass": ver.passed,
               "failed_points": [list(e) for e in ver.errors]}
    return summary, rows


def _mixture_density_summary(f):
    m = density_from_even_rational(f)
    rep = positivity_report(m)
    bound_ok = rep.certified if rep.lower_bound_constant is not None else bool(np.all(m.weights >= 0))
    ok = rep.passed and abs(m.mass - 1.0) <= 1e-9 and bound_ok and m.atom0 >= 0
    return m, {
        "atom0": m.atom0,
        "weights": m.weights,
        "rates": m.rates,
        "mass": m.mass,
        "grid_min": rep.grid_min,
        "argmin": rep.argmin,
        "lower_bound_constant": rep.lower_bound_constant,
        "pass": bool(ok),
    }


# --- subcommands --------------------------------------------------------------


def cmd_verify_kac(args):
    grid = _grid(args)
    if args.laplace is not None:
        a1, a2 = args.laplace
        if a1 < 0 or a2 < 0:
            raise ParameterError("Laplace parameters must be nonnegative")
        f1, f2, target = laplace(a1), laplace(a2), laplace(a1 + a2)
        params = {"a1": a1, "a2": a2}
    elif args.kind == "exp-diff":
        f1, f2, target = make_counterexample(ExpDifference())
        params = {}
    else:
        f1, f2, target = make_counterexample(SignedMixture(args.a))
        params = {"a": args.a}
    summary, rows = _identity_result(f1, f2, target, grid, Kac(), args.tol)
    report = {"command": "verify-kac", "pair": args.kind or "laplace", "params": params, "identity": summary}
    return Result(report, FN_HEADER, rows, summary["pass"])


def _mc_for(kind, ce, args):
    grid = np.linspace(-5.0, 5.0, 21)
    if isinstance(kind, ExpDifference):
        law, target = mc.ExpDifference(1.0, 2.0), ce.f1
    elif isinstance(kind, SignedMixture):
        law, target = mc.SignedMixture(density_from_even_rational(ce.f2)), ce.f2
    elif isinstance(kind, GammaDrift):
        law, target = mc.GammaNormalDrift(kind.beta, kind.a1, kind.b), ce.f1
    else:
        return {"skipped": "no sampler for powers of signed mixtures", "pass": True}
    r = mc.mc_validate(law, target, grid, args.mc_n, args.seed)
    out = {"n": r.n, "seed": r.seed, "max_error": float(r.errors.max()), "tolerance": r.tolerance,
           "pass": r.passed}
    if isinstance(law, mc.SignedMixture):
        batch = mc.sample(law, args.mc_n, args.seed, stream=1)
        ks = mc.kolmogorov_distance(batch, law.mixture.cdf)
        out["kolmogorov"] = ks
        out["kolmogorov_bound"] = 2.0 / math.sqrt(args.mc_n)
        out["pass"] = bool(out["pass"] and ks < out["kolmogorov_bound"])
    return out


def cmd_counterexample(args):
    grid = _grid(args)
    if args.kind == "exp-diff":
        kind = ExpDifference()
    elif args.kind == "mixture":
        kind = SignedMixture(0.25 if args.a is None else args.a)
    elif args.kind == "gamma-drift":
        kind = GammaDrift(args.beta, args.a1, args.a2, args.b)
    else:
        kind = PowerFamily(1.0 if args.a is None else args.a, args.n, args.theta)
    ce = make_counterexample(kind)
    summary, rows = _identity_result(ce.f1, ce.f2, ce.target, grid, kind.operation(), args.tol)
    report = {"command": "counterexample", "kind": args.kind, "params": vars_of(kind), "identity": summary}
    checks = [summary["pass"]]
    if isinstance(kind, ExpDifference):
        x = np.linspace(-10.0, 10.0, 81)
        nd = numeric_inversion(ce.f1, x)
        exact = np.where(x >= 0, 2.0 / 3.0 * np.exp(-x), 2.0 / 3.0 * np.exp(2.0 * x))
        err = float(np.max(np.abs(nd.p - exact)))
        rep = positivity_report(nd, threshold=-1e-8)
        report["density_f1"] = {"grid_min": rep.grid_min, "max_error_vs_closed_form": err,
                                "pass": bool(rep.passed and err < 1e-6)}
        checks.append(report["density_f1"]["pass"])
    elif isinstance(kind, (SignedMixture, PowerFamily)):
        a = kind.a if isinstance(kind, SignedMixture) else kind.theta
        for name, f in zip(("density_f1", "density_f2"), mixture_pair(a)):
            _, report[name] = _mixture_density_summary(f)
            checks.append(report[name]["pass"])
    else:
        for name, a, b in (("branch_f1", kind.a1, kind.b), ("branch_f2", kind.a2, -kind.b)):
            br = principal_branch_check(kind.beta, a, b, grid)
            report[name] = {"max_arg": br.analytic_max_arg, "grid_max_arg": br.grid_max_arg,
                            "bound": br.bound, "roundtrip_error": br.roundtrip_error,
                            "pass": bool(br.passed and br.roundtrip_ok)}
            checks.append(report[name]["pass"])
    if args.mc_n:
        if args.mc_n < 10_000:
            raise ParameterError("--mc-n must be at least 10000")
        report["montecarlo"] = _mc_for(kind, ce, args)
        checks.append(report["montecarlo"]["pass"])
    return Result(report, FN_HEADER, rows, all(checks))


def vars_of(kind):
    return {k: getattr(kind, k) for k in getattr(kind, "__dataclass_fields__", {})}


def cmd_classify(args):
    if args.f1_num is not None:
        if None in (args.f1_den, args.f2_num, args.f2_den):
            raise ParameterError("custom pairs need --f1-num, --f1-den, --f2-num and --f2-den")
        f1 = Rational(ComplexRational(args.f1_num, args.f1_den))
        f2 = Rational(ComplexRational(args.f2_num, args.f2_den))
        label = "custom"
    elif args.preset == "laplace":
        if not 0 <= args.a1 <= 1:
            raise ParameterError("--a1 must lie in [0, 1]")
        f1, f2, label = laplace(args.a1), laplace(1.0 - args.a1), "laplace"
    elif args.preset == "exp-diff":
        f1, f2, _ = make_counterexample(ExpDifference())
        label = "exp-diff"
    else:
        f1, f2, _ = make_counterexample(SignedMixture(args.a))
        label = "mixture"
    cls = main_theorem_classify(f1, f2, Symmetry(args.symmetry))
    gid = [geometric_id_check(f).verdict for f in (f1, f2)]
    report = {
        "command": "classify",
        "pair": label,
        "symmetry": args.symmetry,
        "verdict": cls.verdict,
        "a1": cls.a1,
        "a2": cls.a2,
        "gamma1": cls.gamma1,
        "gamma2": cls.gamma2,
        "failing_factor": cls.failing_factor,
        "detail": cls.detail,
        "identity_residual": cls.identity_residual,
        "geometric_id": gid,
        "pass": True,
    }
    grid = _grid(args)
    _, rows = _identity_result(f1, f2, laplace(1.0), grid, Kac(), 1e-10)
    return Result(report, FN_HEADER, rows, True)


def cmd_indecomposable(args):
    atoms = tuple(args.atom or ())
    if args.space == "lk":
        psi = LKExponent(args.sigma2, atoms)
        rep = is_indecomposable(psi)
        parts = [{"sigma2": p.sigma2, "atoms": [list(a) for a in p.atoms]} for p in indecomposable_parts(psi)]
        report = {"command": "indecomposable", "space": "lk", "sigma2": psi.sigma2,
                  "atoms": [list(a) for a in psi.atoms], "verdict": rep.verdict, "t": rep.t,
                  "indecomposable": rep.indecomposable, "parts": parts, "pass": True}
        rows = ([["gaussian", 0.0, psi.sigma2]] if psi.sigma2 > 0 else []) + [["atom", t, c] for t, c in psi.atoms]
    else:
        eta = pgf.BernsteinFn(args.b, atoms)
        rep = pgf.bernstein_indecomposable(eta)
        report = {"command": "indecomposable", "space": "bernstein", "b": eta.b,
                  "atoms": [list(a) for a in eta.atoms], "verdict": rep.verdict, "s": rep.s,
                  "indecomposable": rep.indecomposable, "pass": True}
        rows = ([["linear", 0.0, eta.b]] if eta.b > 0 else []) + [["atom", s, c] for s, c in eta.atoms]
    return Result(report, ["part", "location", "weight"], rows, True)


def cmd_invert(args):
    if args.laplace is not None:
        f, label = laplace(args.laplace), "laplace"
    elif args.num is not None:
        if args.den is None:
            raise ParameterError("--num needs --den")
        f, label = Rational(ComplexRational(args.num, args.den)), "custom"
    else:
        f, label = mixture_pair(args.a)[args.factor - 1], f"mixture-f{args.factor}"
    x = np.linspace(-args.x_max, args.x_max, args.x_count)
    report = {"command": "invert", "cf": label}
    try:
        m, summary = _mixture_density_summary(f)
        report["closed_form"] = summary
        p = m.pdf(x)
        passed = summary["pass"]
        if args.numeric:
            nd = numeric_inversion(f, x)
            report["numeric"] = {"max_abs_diff": float(np.max(np.abs(nd.p - p))), "warning": nd.warning}
    except (StructureError, ConjugatePairError, MultiplicityError) as exc:
        # no Laplace-mixture expansion: fall back to quadrature
        nd = numeric_inversion(f, x)
        rep = positivity_report(nd)
        p = nd.p
        report["closed_form"] = None
        report["closed_form_error"] = f"{type(exc).__name__}: {exc}"
        report["numeric"] = {"grid_min": rep.grid_min, "argmin": rep.argmin,
                             "error_estimate": nd.error_estimate, "warning": nd.warning, "pass": rep.passed}
        passed = rep.passed
    report["pass"] = passed
    return Result(report, ["x", "p"], [[a, b] for a, b in zip(x, p)], passed)


_KERNELS = {"exp": lambda a: Exp(), "kac": lambda a: Kac(), "gamma": lambda a: GammaBeta(a.beta)}


def _mc_law(args):
    name = args.law
    if name == "exponential":
        return mc.Exponential(args.rate)
    if name == "laplace":
        return mc.Laplace(args.rate)
    if name == "exp-diff":
        return mc.ExpDifference(args.rate, args.rate2)
    if name == "two-sided-geometric":
        return mc.TwoSidedGeometric(args.r)
    if name == "gamma-normal-drift":
        return mc.GammaNormalDrift(args.beta, 1.0 if args.a is None else args.a, args.b)
    if name == "signed-mixture":
        f = mixture_pair(0.25 if args.a is None else args.a)[args.factor - 1]
        return mc.SignedMixture(density_from_even_rational(f))
    kernel = _KERNELS[args.kernel](args)
    return mc.SubordinatedSum(LKExponent(2.0 * args.a1), LKExponent(2.0 * args.a2), kernel)


def _mc_target(args, law):
    t = args.target
    if t == "law":
        return law.cf()
    if t == "exp-diff-f1":
        return make_counterexample(ExpDifference()).f1
    if t == "gamma-drift-f1":
        a = 1.0 if args.a is None else args.a
        return make_counterexample(GammaDrift(args.beta, a, a, args.b)).f1
    if t in ("mixture-f1", "mixture-f2"):
        return mixture_pair(0.25 if args.a is None else args.a)[int(t[-1]) - 1]
    return laplace(args.a1 + args.a2)


def cmd_montecarlo(args):
    grid = _grid(args, limit=64)
    law = _mc_law(args)
    target = _mc_target(args, law)
    r = mc.mc_validate(law, target, grid, args.n, args.seed, c=args.c)
    report = {"command": "montecarlo", "law": args.law, "target": args.target, "n": r.n, "seed": r.seed,
              "tolerance": r.tolerance, "max_error": float(r.errors.max()), "pass": r.passed}
    passed = r.passed
    if isinstance(law, mc.SignedMixture):
        batch = mc.sample(law, args.n, args.seed, stream=1)
        ks = mc.kolmogorov_distance(batch, law.mixture.cdf)
        report["acceptance"] = law.acceptance()
        report["kolmogorov"] = ks
        report["kolmogorov_bound"] = 2.0 / math.sqrt(args.n)
        passed = passed and ks < report["kolmogorov_bound"]
        report["pass"] = passed
    rows = [[x, e.real, e.imag, t.real, t.imag, d] for x, e, t, d in zip(grid, r.estimates, r.target, r.errors)]
    return Result(report, ["xi", "re_est", "im_est", "re_target", "im_target", "error"], rows, passed)


def _nonneg(rep):
    return {"min_coeff": rep.min_coeff, "argmin": rep.argmin, "partial_mass": rep.partial_mass,
            "lower_bound_holds": rep.lower_bound_holds, "pass": rep.passed}


def _affine(rep):
    return {"residual": rep.residual, "in_family": rep.in_family}


def cmd_pgf(args):
    rep = pgf.discrete_report(args.lam, args.theta, args.n, order=args.order)
    pair = rep.pair
    passed = rep.passed and rep.nonneg2.lower_bound_holds is not False
    report = {
        "command": "pgf",
        "lambda": args.lam,
        "theta": args.theta,
        "n": args.n,
        "base": {"r": pair.r, "p": pair.p, "q": pair.q, "A": pair.A, "B": pair.B},
        "identity_residual": rep.identity_residual,
        "g1": {"nonneg": _nonneg(rep.nonneg1), "affine": _affine(rep.affine1), "value_at_0": pair.g1(0.0)},
        "g2": {"nonneg": _nonneg(rep.nonneg2), "affine": _affine(rep.affine2), "value_at_0": pair.g2(0.0)},
        "pass": passed,
    }
    coeffs = (rep.nonneg1 if args.series == "g1" else rep.nonneg2).coeffs
    return Result(report, ["k", "coeff"], [[k, float(c)] for k, c in enumerate(coeffs)], passed)


def cmd_limit_scan(args):
    if args.indices is None:
        args.indices = [1, 10, 100, 1000] if args.family == "power" else [16, 64, 256, 1024, 4096]
    if args.threshold is None:
        args.threshold = 0.01 if args.family == "power" else 0.05
    rep = gaussian_limit_scan(args.family, args.indices, a=args.a, theta=args.theta, a1=args.a1, a2=args.a2,
                              threshold=args.threshold)
    report = {"command": "limit-scan", "family": args.family, "indices": list(rep.indices), "sups1": rep.sups1,
              "sups2": rep.sups2, "monotone": rep.monotone, "threshold": rep.threshold,
              "final_below": rep.final_below, "pass": rep.passed}
    if args.family == "gamma-drift":
        report["b"] = [gamma_drift_default_b(float(i)) for i in rep.indices]
    rows = [[int(i), s1, s2] for i, s1, s2 in zip(rep.indices, rep.sups1, rep.sups2)]
    return Result(report, ["index", "sup1", "sup2"], rows, rep.passed)


def cmd_recover(args):
    L = _KERNELS[args.kernel](args)
    atoms = tuple(args.atom or ())
    if args.space == "continuous":
        psi = LKExponent(2.0 if args.sigma2 is None else args.sigma2, atoms)
        f = compose(L, args.a, psi)
        a_hat = factor_recover(L, psi, f)
    else:
        eta = pgf.BernsteinFn(1.0 if args.b is None else args.b, atoms)
        G = pgf.ComposedZ(L, args.a, eta)
        a_hat = pgf.discrete_factor_recover(L, eta, G)
    err = abs(a_hat - args.a)
    report = {"command": "recover", "space": args.space, "kernel": args.kernel, "a": args.a,
              "recovered": a_hat, "abs_error": err}
    passed = err < 1e-10
    # counterexample factors must be rejected by the same routine
    power = {"kac": 1, "gamma": args.beta}.get(args.kernel)
    if power is not None and float(power).is_integer() and not atoms:
        n = int(power)
        try:
            if args.space == "continuous":
                f1 = make_counterexample(PowerFamily(1.0, n, 0.25)).f1
                factor_recover(L, LKExponent(2.0), f1)
            else:
                g1 = pgf.discrete_counterexample(1.0, 0.25, n).g1
                pgf.discrete_factor_recover(L, pgf.IDENTITY, g1)
            report["counterexample_rejected"] = False
        except StructureError as exc:
            report["counterexample_rejected"] = True
            report["counterexample_residual"] = exc.residual
        passed = passed and report["counterexample_rejected"]
    report["pass"] = passed
    return Result(report, ["a", "recovered", "abs_error"], [[args.a, a_hat, err]], passed)


# --- parser -------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="chfn", description=__doc__.splitlines()[0])
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--seed", type=_seed, default=None, help="RNG seed (default: $CHFN_SEED or 0)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("verify-kac", help="check Kac's identity on a pair")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--laplace", nargs=2, type=float, metavar=("A1", "A2"))
    g.add_argument("--kind", choices=("exp-diff", "mixture"))
    p.add_argument("--a", type=float, default=0.25)
    p.add_argument("--tol", type=_positive, default=1e-10)
    _add_grid(p, -20.0, 20.0, 401)
    p.set_defaults(func=cmd_verify_kac)

    p = sub.add_parser("counterexample", help="build, verify, invert and certify a counterexample pair")
    p.add_argument("--kind", required=True, choices=("exp-diff", "mixture", "gamma-drift", "power"))
    p.add_argument("--a", type=float)
    p.add_argument("--beta", type=float, default=3.0)
    p.add_argument("--a1", type=float, default=1.0)
    p.add_argument("--a2", type=float, default=2.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--theta", type=float, default=0.25)
    p.add_argument("--mc-n", type=int, default=0, help="Monte Carlo sample size (0 skips)")
    p.add_argument("--tol", type=_positive, default=1e-10)
    _add_grid(p, -20.0, 20.0, 401)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("classify", help="classify a rational pair solving Kac's equation")
    p.add_argument("--preset", choices=("laplace", "exp-diff", "mixture"), default="laplace")
    p.add_argument("--a1", type=float, default=0.3)
    p.add_argument("--a", type=float, default=0.25)
    for name in ("f1-num", "f1-den", "f2-num", "f2-den"):
        p.add_argument(f"--{name}", nargs="+", type=complex, metavar="C")
    p.add_argument("--symmetry", choices=[s.value for s in Symmetry], default="none")
    _add_grid(p, -20.0, 20.0, 401)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("indecomposable", help="classify an exponent or Bernstein function")
    p.add_argument("space", choices=("lk", "bernstein"))
    p.add_argument("--sigma2", type=float, default=0.0)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--atom", type=_atom, action="append", metavar="LOC:WEIGHT")
    p.set_defaults(func=cmd_indecomposable)

    p = sub.add_parser("invert", help="invert an even rational characteristic function")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--laplace", type=float, metavar="A")
    g.add_argument("--num", nargs="+", type=float, metavar="C")
    p.add_argument("--den", nargs="+", type=float, metavar="C")
    p.add_argument("--a", type=float, default=0.25)
    p.add_argument("--factor", type=int, choices=(1, 2), default=2)
    p.add_argument("--numeric", action="store_true", help="also run quadrature inversion")
    p.add_argument("--x-max", type=_positive, default=10.0)
    p.add_argument("--x-count", type=int, default=201)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("montecarlo", help="empirical characteristic function against a target")
    p.add_argument("--law", required=True, choices=("exponential", "laplace", "exp-diff", "two-sided-geometric",
                                                    "gamma-normal-drift", "signed-mixture", "subordinated"))
    p.add_argument("--target", default="law", choices=("law", "exp-diff-f1", "gamma-drift-f1", "mixture-f1",
                                                       "mixture-f2", "laplace-sum"))
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--c", type=_positive, default=5.0)
    p.add_argument("--rate", type=_positive, default=1.0)
    p.add_argument("--rate2", type=_positive, default=2.0)
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--beta", type=_positive, default=3.0)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--factor", type=int, choices=(1, 2), default=2)
    p.add_argument("--a1", type=float, default=0.3)
    p.add_argument("--a2", type=float, default=0.7)
    p.add_argument("--kernel", choices=("exp", "kac", "gamma"), default="kac")
    _add_grid(p, -5.0, 5.0, 21)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("pgf", help="discrete counterexample pair and its coefficient certificate")
    p.add_argument("--lambda", dest="lam", type=_positive, default=1.0)
    p.add_argument("--theta", type=float, default=0.25)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--order", type=int, default=200)
    p.add_argument("--series", choices=("g1", "g2"), default="g2", help="series written in CSV mode")
    p.set_defaults(func=cmd_pgf)

    p = sub.add_parser("limit-scan", help="distance of counterexample factors to their Gaussian limits")
    p.add_argument("--family", choices=("power", "gamma-drift"), default="power")
    p.add_argument("--indices", nargs="+", type=float)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=0.25)
    p.add_argument("--a1", type=float, default=1.0)
    p.add_argument("--a2", type=float, default=1.0)
    p.add_argument("--threshold", type=_positive)
    p.set_defaults(func=cmd_limit_scan)

    p = sub.add_parser("recover", help="recover the mixing coefficient of a composed factor")
    p.add_argument("space", choices=("continuous", "discrete"))
    p.add_argument("--kernel", choices=("exp", "kac", "gamma"), default="kac")
    p.add_argument("--beta", type=_positive, default=2.0)
    p.add_argument("--a", type=float, default=0.4)
    p.add_argument("--sigma2", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--atom", type=_atom, action="append", metavar="LOC:WEIGHT")
    p.set_defaults(func=cmd_recover)
    return parser


def render(result, fmt):
    if fmt == "csv":
        return to_csv(result.header, result.rows)
    return to_json({**result.report, "pass": result.passed})


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        try:
            args.seed = _default_seed()
        except (argparse.ArgumentTypeError, ValueError) as exc:
            parser.error(f"CHFN_SEED: {exc}")
    try:
        result = args.func(args)
    except (ParameterError, DomainError) as exc:
        print(f"chfn: error: {exc}", file=sys.stderr)
        return 2
    except ChfnError as exc:
        print(f"chfn: check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text = render(result, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())
