"""Command-line front end.

Exit codes: 0 success, 1 a check ran and failed, 2 domain error, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from fractions import Fraction
from pathlib import Path

import mpmath

from . import forms
from .cache import ExpansionCache, default_root
from .errors import HMFError
from .hecke import eigenforms, is_normalized_eigenform
from .numbers import CoeffNumber, rational_str
from .quadfield import make_field
from .recheck import recheck
from .search import ExclusionCertificate, bound_scan, classify
from .specialvalues import precision_bits, zeta_special, zeta_special_numeric

EXIT_FAIL = 1
EXIT_DOMAIN = 2
EXIT_USAGE = 64

log = logging.getLogger("hmf")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + ("" if text.endswith("\n") else "\n"), encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def _cache(args) -> ExpansionCache | None:
    root = Path(args.cache_dir) if args.cache_dir else default_root()
    return ExpansionCache(root) if root else None


# ------------------------------------------------------------ subcommands


def cmd_zeta(args) -> int:
    if args.numeric:
        prec = args.prec or precision_bits()
        v = zeta_special_numeric(args.d if args.d % 4 == 1 else 4 * args.d, args.k, prec)
        with mpmath.workprec(prec):
            print(mpmath.nstr(v, max(15, int(prec * 0.30103) - 5)))
        return 0
    print(rational_str(zeta_special(make_field(args.d), args.k)))
    return 0


def cmd_eis(args) -> int:
    ctx = make_field(args.d)
    cache = _cache(args)
    compute = lambda: forms.eisenstein(ctx, args.k, args.bound)  # noqa: E731
    if cache:
        f = cache.get_or_compute({"d": args.d, "kind": "eisenstein", "weight": args.k}, args.bound, compute)
    else:
        f = compute()
    _emit(forms.to_json(f), args.out)
    return 0


def cmd_product(args) -> int:
    f, h = forms.load(args.lhs), forms.load(args.rhs)
    _emit(forms.to_json(forms.product(f, h, args.bound)), args.out)
    return 0


_TERM = re.compile(r"\s*([+-])?\s*(?:([0-9]+(?:/[0-9]+)?)\s*\*\s*)?([A-Za-z_]\w*)\s*")


def parse_combination(spec: str) -> list[tuple[Fraction, str]]:
    """Parse "c1*A + c2*B - C" into [(c1, "A"), (c2, "B"), (-1, "C")]."""
    pos, terms = 0, []
    while pos < len(spec):
        m = _TERM.match(spec, pos)
        if not m or m.end() == pos:
            raise UsageError(f"cannot parse combination at {spec[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        if terms and m.group(1) is None:
            raise UsageError(f"missing operator before {m.group(3)!r}")
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        terms.append((sign * coef, m.group(3)))
        pos = m.end()
    if not terms:
        raise UsageError("empty combination")
    return terms


def cmd_combine(args) -> int:
    named = {}
    for item in args.form or []:
        name, sep, path = item.partition("=")
        if not sep:
            raise UsageError(f"--form expects NAME=PATH, got {item!r}")
        named[name] = forms.load(path)
    terms = parse_combination(args.spec)
    missing = sorted({n for _, n in terms} - set(named))
    if missing:
        raise UsageError(f"no --form given for {', '.join(missing)}")
    f = forms.linear_combination([(CoeffNumber(c), named[n]) for c, n in terms])
    _emit(forms.to_json(f), args.out)
    return 0


def _file_label(label: str) -> str:
    return label.replace("'", "p")


def cmd_eigenforms(args) -> int:
    ctx = make_field(args.d)
    recs = eigenforms(ctx, args.k, args.bound)
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    for r in recs:
        if out_dir:
            path = out_dir / f"{_file_label(r.label)}.json"
            forms.save(r.expansion, path)
            print(f"{r.label} {path}")
        else:
            print(forms.to_json(r.expansion))
    return 0


def cmd_eigencheck(args) -> int:
    f = forms.load(args.form)
    res = is_normalized_eigenform(f, args.weight, args.bound)
    if res.ok:
        print(f"pass checked={res.checked}")
        return 0
    print(f"fail witness={list(res.witness.key)} reason={res.reason} lhs={res.lhs} rhs={res.rhs}")
    return EXIT_FAIL


def cmd_search(args) -> int:
    rep = classify(make_field(args.d), args.max_weight, args.bound)
    _emit(_dumps(rep.to_obj()), args.out)
    return 0


def cmd_bounds(args) -> int:
    certs, unresolved = bound_scan(args.dmin, args.dmax, args.max_weight)
    obj = {
        "certificates": [c.to_obj() for c in certs],
        "unresolved": [{"D": t.D, "kind": t.kind, "k1": t.k1, "k2": t.k2, "reason": r} for t, r in unresolved],
    }
    _emit(_dumps(obj), args.out)
    return 0


def cmd_verify(args) -> int:
    obj = json.loads(Path(args.certs).read_text(encoding="utf-8"))
    items = obj.get("certificates", obj.get("exclusions", []))
    bad = 0
    for it in items:
        cert = ExclusionCertificate.from_obj(it)
        if not recheck(cert, args.bound):
            bad += 1
            t = cert.triple
            print(f"FAIL D={t.D} {t.kind} k1={t.k1} k2={t.k2} {t.h} rule={cert.rule}")
    print(f"checked={len(items)} failed={bad}")
    return EXIT_FAIL if bad else 0


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hmf", description="Exact Hilbert modular form expansions and product identities.")
    p.add_argument("--cache-dir", help="expansion cache directory (default: $HMF_CACHE)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("zeta", help="zeta_F(1-k)")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--numeric", action="store_true", help="evaluate through the functional equation")
    s.add_argument("--prec", type=int, help="working precision in bits")
    s.set_defaults(func=cmd_zeta)

    s = sub.add_parser("eis", help="Eisenstein series expansion")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--bound", type=int, default=200)
    s.add_argument("--out")
    s.set_defaults(func=cmd_eis)

    s = sub.add_parser("product", help="product of two expansion files")
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs", required=True)
    s.add_argument("--bound", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("combine", help='linear combination, e.g. --spec "268/3*A-7/60*B"')
    s.add_argument("--spec", required=True)
    s.add_argument("--form", action="append", metavar="NAME=PATH")
    s.add_argument("--out")
    s.set_defaults(func=cmd_combine)

    s = sub.add_parser("eigenforms", help="normalized cusp eigenforms (D=5)")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--bound", type=int, default=200)
    s.add_argument("--out-dir")
    s.set_defaults(func=cmd_eigenforms)

    s = sub.add_parser("eigencheck", help="test the Hecke relations on an expansion file")
    s.add_argument("--form", required=True)
    s.add_argument("--weight", type=int)
    s.add_argument("--bound", type=int)
    s.set_defaults(func=cmd_eigencheck)

    s = sub.add_parser("search", help="classify product identities over one field")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--max-weight", type=int, default=20)
    s.add_argument("--bound", type=int, default=200)
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("bounds", help="bound-only certificates over a discriminant range")
    s.add_argument("--dmin", type=int, default=5)
    s.add_argument("--dmax", type=int, required=True)
    s.add_argument("--max-weight", type=int, default=30)
    s.add_argument("--out")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("verify", help="re-evaluate certificates from a search or bounds file")
    s.add_argument("--certs", required=True)
    s.add_argument("--bound", type=int, default=100, help="expansion bound for Hecke-relation rechecks")
    s.set_defaults(func=cmd_verify)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (HMFError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


def main(argv=None) -> None:
    sys.exit(run(argv))
