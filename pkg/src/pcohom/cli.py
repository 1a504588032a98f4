"""Command-line front end: JSON in, sorted-key JSON out.

Exit codes: 0 when the command succeeds or the checked property holds, 1
when a checked mathematical property fails, 2 for malformed input, an
invalid action, or a refused request.
"""

from __future__ import annotations

import argparse
import random
import sys

from .action import is_transitive, orbits, validate
from .cochain import cocycle_violation, delta, explicit_cocycle_check
from .cohomology import BRUTEFORCE_BOUND, cohomology, cohomology_bruteforce, present_cochain_group, solve_coboundary
from .errors import InternalError, NotCohomologous, PartialCohomologyError, TooLarge
from .globalize import build_enveloping, compare_globalizations, globalize, lift_global, transport, w_tilde
from .serialize import dumps, load_action, load_cochain
from .verify import MAX_DEGREE, verify

OK, PROPERTY_FAILS, BAD_INPUT = 0, 1, 2


class UsageError(PartialCohomologyError):
    pass


def _degree(n: int) -> int:
    if not 0 <= n <= MAX_DEGREE:
        raise UsageError(f"degree {n} outside 0..{MAX_DEGREE}")
    return n


def _degree_list(text: str) -> list[int]:
    try:
        out = [int(d) for d in text.split(",") if d.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated degrees, got {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("no degrees given")
    return out


def _valid_action(path):
    pa = load_action(path)
    bad = validate(pa)
    if bad:
        raise UsageError(f"{path}: not a partial action ({bad[0]['axiom']} fails); run validate for details")
    return pa


def _cochain(pa, path):
    f = load_cochain(pa, path)
    _degree(f.degree)
    return f


def cmd_validate(args):
    pa = load_action(args.action)
    violations = validate(pa)
    report = {"valid": not violations, "violations": violations}
    if not violations:
        report["global"] = pa.is_global
        report["orbits"] = orbits(pa)
        report["transitive"] = is_transitive(pa)
    return report, OK if not violations else PROPERTY_FAILS


def cmd_delta(args):
    pa = _valid_action(args.action)
    f = _cochain(pa, args.cochain)
    _degree(f.degree + 1)
    return delta(pa, f).to_json(), OK


def cmd_check_cocycle(args):
    pa = _valid_action(args.action)
    f = _cochain(pa, args.cochain)
    bad = cocycle_violation(pa, f)
    report = {"degree": f.degree, "cocycle": bad is None, "violation": None if bad is None else list(bad)}
    if args.oracle and f.degree <= 2:
        report["explicit_agrees"] = explicit_cocycle_check(pa, f) == (bad is None)
        if not report["explicit_agrees"]:
            return report, PROPERTY_FAILS
    return report, OK if bad is None else PROPERTY_FAILS


def cmd_coboundary_witness(args):
    pa = _valid_action(args.action)
    f = _cochain(pa, args.cochain)
    xi = solve_coboundary(pa, f)
    report = {"degree": f.degree, "coboundary": xi is not None, "witness": None if xi is None else xi.to_json()}
    if args.oracle:
        brute = solve_coboundary(pa, f, method="bruteforce", bound=args.bound)
        report["oracle_agrees"] = (brute is None) == (xi is None)
        if not report["oracle_agrees"]:
            return report, PROPERTY_FAILS
    return report, OK if xi is not None else PROPERTY_FAILS


def cmd_cohomologous(args):
    pa = _valid_action(args.action)
    f1, f2 = _cochain(pa, args.first), _cochain(pa, args.second)
    if f1.degree != f2.degree:
        raise UsageError("cochains have different degrees")
    for name, f in (("first", f1), ("second", f2)):
        bad = cocycle_violation(pa, f)
        if bad is not None:
            report = {"cohomologous": False, "witness": None, "not_a_cocycle": name, "violation": list(bad)}
            return report, PROPERTY_FAILS
    if f1.degree == 0:
        same = f1 == f2
        return {"degree": 0, "cohomologous": same, "witness": None}, OK if same else PROPERTY_FAILS
    xi = solve_coboundary(pa, f2 / f1)
    report = {"degree": f1.degree, "cohomologous": xi is not None, "witness": None if xi is None else xi.to_json()}
    return report, OK if xi is not None else PROPERTY_FAILS


def cmd_globalize(args):
    pa = _valid_action(args.action)
    w = _cochain(pa, args.cochain)
    bad = cocycle_violation(pa, w)
    if bad is not None:
        return {"degree": w.degree, "cocycle": False, "violation": list(bad)}, PROPERTY_FAILS
    rep = globalize(pa, w)
    out = rep.to_json()
    if len(rep.orbits) == 1:
        o = out["orbits"][0]
        out["envelope"] = o["envelope"]
        out["u"] = o["u"]
    return out, OK if rep.valid else PROPERTY_FAILS


def cmd_compare(args):
    """Globalise w on two transversal orderings and certify the results cohomologous."""
    pa = _valid_action(args.action)
    w = _cochain(pa, args.cochain)
    if w.degree < 1:
        raise UsageError("compare needs degree >= 1; degree-0 globalizations are unique")
    bad = cocycle_violation(pa, w)
    if bad is not None:
        return {"degree": w.degree, "cocycle": False, "violation": list(bad)}, PROPERTY_FAILS
    rng = random.Random(args.seed)
    rep = globalize(pa, w)
    entries = []
    ok = True
    for o in rep.orbits:
        order = list(o.action.group.elements)
        rng.shuffle(order)
        env2 = build_enveloping(o.action, order=order)
        g2 = lift_global(env2, w_tilde(env2.td, o.w))
        u2 = transport(env2, o.envelope, g2.u)
        entry = {"blocks": o.blocks, "order": order, "transversals": [list(o.envelope.transversal),
                                                                      list(env2.transversal)]}
        try:
            cmp = compare_globalizations(o.envelope, o.u, u2)
            verified = o.u * delta(o.envelope.action, cmp.witness) == u2
            entry.update(method=cmp.method, witness=cmp.witness.to_json(), verified=verified)
            ok = ok and verified
        except NotCohomologous as exc:
            entry.update(method=None, witness=None, verified=False, error=str(exc))
            ok = False
        entries.append(entry)
    return {"degree": w.degree, "seed": args.seed, "orbits": entries, "cohomologous": ok}, OK if ok else PROPERTY_FAILS


def cmd_cohomology(args):
    pa = _valid_action(args.action)
    n = _degree(args.degree)
    res = cohomology(pa, n)
    report = {"n": n, "invariant_factors": list(res.invariant_factors), "order": res.order, "method": "snf"}
    size = present_cochain_group(pa, n).order
    if args.oracle or size <= args.bound:
        try:
            brute = cohomology_bruteforce(pa, n, args.bound)
        except TooLarge:
            if args.oracle:
                raise
            brute = None
        report["oracle_agrees"] = None if brute is None else brute.invariant_factors == res.invariant_factors
    else:
        report["oracle_agrees"] = None
    return report, PROPERTY_FAILS if report["oracle_agrees"] is False else OK


def cmd_verify(args):
    pa = _valid_action(args.action)
    degrees = [_degree(d) for d in args.degrees]
    report = verify(pa, degrees, args.trials, args.seed, oracle=args.oracle, bound=args.bound)
    return report, OK if report["pass"] else PROPERTY_FAILS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pcohom", description="Partial group cohomology over block products.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the JSON report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--bound", type=int, default=BRUTEFORCE_BOUND, help="brute-force size limit")
    common.add_argument("--oracle", action="store_true", help="force brute-force cross-checks")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, *positionals, help=None):
        sp = sub.add_parser(name, parents=[common], help=help)
        for pos in positionals:
            sp.add_argument(pos)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "action", help="check the partial-action axioms")
    add("delta", cmd_delta, "action", "cochain", help="print the coboundary of a cochain")
    add("check-cocycle", cmd_check_cocycle, "action", "cochain", help="test the cocycle identity")
    add("coboundary-witness", cmd_coboundary_witness, "action", "cochain", help="find xi with delta(xi) = f")
    add("cohomologous", cmd_cohomologous, "action", "first", "second", help="certify two cocycles cohomologous")
    add("globalize", cmd_globalize, "action", "cochain", help="lift a partial cocycle to the envelope")
    add("compare", cmd_compare, "action", "cochain", help="compare globalizations over two transversals")
    sp = add("cohomology", cmd_cohomology, "action", help="invariant factors of H^n")
    sp.add_argument("-n", "--degree", type=int, required=True)
    sp = add("verify", cmd_verify, "action", help="run the seeded theorem suite")
    sp.add_argument("--trials", type=int, default=25)
    sp.add_argument("--degrees", type=_degree_list, default=[1, 2])
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        report, code = args.func(args)
    except InternalError as exc:
        print(f"error: identity check failed: {exc}", file=sys.stderr)
        return PROPERTY_FAILS
    except PartialCohomologyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    text = dumps(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
