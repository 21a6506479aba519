"""Command-line front end: list identities, verify single cases, run
parameter sweeps, run the quick oracle selftest.

Exit codes: 0 all verifications equal, 1 any mismatch or failed selftest
check, 2 usage or parameter errors.
"""

import argparse
import json
import sys

from .series import BadParams, QSeriesError, W_MODES
from . import identities


PARAM_FLAGS = ("k", "i", "t", "s", "m")


def build_parser():
    p = argparse.ArgumentParser(
        prog="qnahm",
        description="verify truncated q-series identities exactly")
    sub = p.add_subparsers(dest="command", required=True)

    lp = sub.add_parser("list", help="list registered identity families")
    lp.add_argument("--format", choices=("text", "json"), default="text")

    for name, hlp in (("verify", "verify one identity case"),
                      ("sweep", "verify a Cartesian parameter grid")):
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("--id", required=True, help="identity family key")
        for f in PARAM_FLAGS:
            sp.add_argument("--" + f, help="integer"
                            + (", range a..b or 'all'" if name == "sweep"
                               else ""))
        sp.add_argument("--w", choices=W_MODES, help="w specialization")
        sp.add_argument("--order", type=int, help="truncation order")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--jobs", type=int, default=1,
                        help="worker pool size for sweeps")
        sp.add_argument("--no-timing", action="store_true",
                        help="omit elapsed times from output")

    st = sub.add_parser("selftest", help="run the quick oracle suite")
    st.add_argument("--format", choices=("text", "json"), default="text")
    st.add_argument("--corrupt-dp", action="store_true",
                    help=argparse.SUPPRESS)
    return p


def _parse_single(name, raw):
    try:
        return int(raw)
    except ValueError:
        raise BadParams("parameter %s must be an integer, got %r"
                        % (name, raw))


def _parse_range(name, raw):
    if raw == "all":
        return "all"
    if ".." in raw:
        lo, _, hi = raw.partition("..")
        try:
            lo, hi = int(lo), int(hi)
        except ValueError:
            raise BadParams("bad range %r for %s" % (raw, name))
        if hi < lo:
            raise BadParams("empty range %r for %s" % (raw, name))
        return list(range(lo, hi + 1))
    return [_parse_single(name, raw)]


def _report_dict(r, timing):
    d = {"id": r.id, "params": dict(r.params), "order": r.order,
         "grain": r.grain, "status": r.status,
         "first_mismatch": r.first_mismatch}
    if timing:
        d["elapsed_ms"] = round(r.elapsed_ms, 3)
    return d


def _coeff_str(c):
    if isinstance(c, dict):
        return "{" + ", ".join("%d: %d" % (e, v)
                               for e, v in sorted(c.items())) + "}"
    return str(c)


def _report_line(r, timing):
    ps = " ".join("%s=%s" % (n, r.params[n]) for n in sorted(r.params))
    head = r.id + (" " + ps if ps else "")
    tail = " [%.1f ms]" % r.elapsed_ms if timing else ""
    if r.status == "equal":
        return "%s order=%d: equal%s" % (head, r.order, tail)
    fm = r.first_mismatch
    where = ("exponent %d (grain %d, q^%d/%d)"
             % (fm["exponent"], r.grain, fm["exponent"], r.grain)
             if r.grain == 2 else "exponent %d" % fm["exponent"])
    return ("%s order=%d: MISMATCH at %s: lhs=%s rhs=%s%s"
            % (head, r.order, where, _coeff_str(fm["lhs"]),
               _coeff_str(fm["rhs"]), tail))


def _emit_reports(reports, fmt, timing, out):
    if fmt == "json":
        doc = {"reports": [_report_dict(r, timing) for r in reports]}
        print(json.dumps(doc, sort_keys=True, indent=2), file=out)
    else:
        for r in reports:
            print(_report_line(r, timing), file=out)
    return 0 if all(r.status == "equal" for r in reports) else 1


def _cmd_list(args, out):
    if args.format == "json":
        doc = {"identities": [
            {"id": id, "params": list(identities.REGISTRY[id].param_names),
             "grain": identities.REGISTRY[id].grain,
             "summary": identities.REGISTRY[id].summary}
            for id in identities.list_identities()]}
        print(json.dumps(doc, sort_keys=True, indent=2), file=out)
    else:
        for id in identities.list_identities():
            case = identities.REGISTRY[id]
            ps = ",".join(case.param_names) if case.param_names else "-"
            print("%-16s params: %-10s %s" % (id, ps, case.summary), file=out)
    return 0


def _cmd_verify(args, out):
    params = {}
    for f in PARAM_FLAGS:
        raw = getattr(args, f)
        if raw is not None:
            params[f] = _parse_single(f, raw)
    if args.w is not None:
        params["w"] = args.w
    if args.order is not None and args.order < 1:
        raise BadParams("order must be >= 1")
    r = identities.verify(args.id, params, args.order)
    return _emit_reports([r], args.format, not args.no_timing, out)


def _cmd_sweep(args, out):
    ranges = {}
    for f in PARAM_FLAGS:
        raw = getattr(args, f)
        if raw is not None:
            ranges[f] = _parse_range(f, raw)
    if args.w is not None:
        ranges["w"] = (args.w,)
    if args.order is not None and args.order < 1:
        raise BadParams("order must be >= 1")
    if args.jobs < 1:
        raise BadParams("jobs must be >= 1")
    reports = identities.sweep(args.id, ranges, args.order, jobs=args.jobs)
    return _emit_reports(reports, args.format, not args.no_timing, out)


def _cmd_selftest(args, out):
    checks = identities.selftest(corrupt_dp=args.corrupt_dp)
    passed = sum(1 for _, ok in checks if ok)
    failed = len(checks) - passed
    if args.format == "json":
        doc = {"selftest": {"passed": passed, "failed": failed,
                            "checks": [{"name": n, "passed": ok}
                                       for n, ok in checks]}}
        print(json.dumps(doc, sort_keys=True, indent=2), file=out)
    else:
        for n, ok in checks:
            print("%-24s %s" % (n, "pass" if ok else "FAIL"), file=out)
        print("%d passed, %d failed" % (passed, failed), file=out)
    return 0 if failed == 0 else 1


def run(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "list":
            return _cmd_list(args, out)
        if args.command == "verify":
            return _cmd_verify(args, out)
        if args.command == "sweep":
            return _cmd_sweep(args, out)
        return _cmd_selftest(args, out)
    except QSeriesError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
