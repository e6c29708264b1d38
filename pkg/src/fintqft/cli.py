"""Command-line front end.

Exit status: 0 on success, 1 on user error (syntax, arity, validation,
missing files, bad flags), 2 when a resource cap is hit.
"""

import argparse
import json
import sys

from .cobordism import normalize
from .config import ResourceLimitError, TQFTError
from .dsl import parse, pretty, to_tree
from .frobenius import center_of_group_algebra, evaluate, load_algebra, validate
from .groups import group_by_name, parse_presentation
from .invariants import BACKENDS, custom, invariant, lens, oracle_report, surface_invariant, torus3
from .linalg import format_rational
from .spans import quantize


class UsageError(TQFTError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    p = _Parser(prog="fintqft", description="Finite-group 2d TQFT workbench")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--format", choices=("tsv", "json"), default="tsv")
        return sp

    sp = add("parse", "parse an expression and echo its tree")
    sp.add_argument("--expr", required=True)

    sp = add("normalize", "print the topological normal form")
    sp.add_argument("--expr", required=True)

    sp = add("validate", "check the Frobenius algebra axioms of an algebra file")
    sp.add_argument("--algebra", required=True)

    sp = add("eval", "evaluate a cobordism through a Frobenius algebra")
    sp.add_argument("--expr", required=True)
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--algebra")
    src.add_argument("--group")

    sp = add("quantize", "evaluate a cobordism through spans of groupoids")
    sp.add_argument("--expr", required=True)
    sp.add_argument("--group", required=True)

    sp = add("invariant", "closed-manifold invariant")
    which = sp.add_mutually_exclusive_group(required=True)
    which.add_argument("--genus", type=int)
    which.add_argument("--lens", metavar="P,Q")
    which.add_argument("--torus3", action="store_true")
    which.add_argument("--presentation", metavar="FILE")
    sp.add_argument("--group", required=True)
    sp.add_argument("--backend", choices=BACKENDS + ("all",), default="count")

    sp = add("oracle", "compare all backends on closed surfaces")
    sp.add_argument("--group", required=True)
    sp.add_argument("--max-genus", type=int, required=True)
    return p


def _emit(out, fmt, header, rows, doc):
    if fmt == "json":
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        if header:
            out.write("\t".join(header) + "\n")
        for row in rows:
            out.write("\t".join(str(x) for x in row) + "\n")


def _cmd_parse(args, out):
    term = parse(args.expr)
    _emit(out, args.format, None,
          [("term", pretty(term)), ("in", term.inputs), ("out", term.outputs)], to_tree(term))


def _cmd_normalize(args, out):
    nf = normalize(parse(args.expr))
    ports = lambda p: ",".join(map(str, p)) or "-"  # noqa: E731
    rows = [("component", c.n_in, c.n_out, c.genus, ports(c.in_ports), ports(c.out_ports)) for c in nf.components]
    rows += [("closed", 0, 0, genus, "-", "-") for genus in nf.closed]
    _emit(out, args.format, ("kind", "in", "out", "genus", "in_ports", "out_ports"), rows, nf.to_dict())


def _cmd_validate(args, out):
    report = validate(load_algebra(args.algebra))
    status = {True: "pass", False: "fail", None: "skip"}
    rows = []
    doc = {"algebra": report.algebra, "ok": report.ok, "checks": []}
    for c in report.checks:
        witness = ",".join(map(str, c.witness)) if c.witness is not None else "-"
        rows.append((c.name, status[c.passed], witness))
        doc["checks"].append({"axiom": c.name, "status": status[c.passed],
                              "witness": None if c.witness is None else list(map(str, c.witness)),
                              "detail": c.detail})
    _emit(out, args.format, ("axiom", "status", "witness"), rows, doc)
    return 0 if report.ok else 1


def _emit_map(out, fmt, m):
    if fmt == "json":
        out.write(json.dumps(m.to_json(), indent=2) + "\n")
    else:
        out.write(m.to_tsv())


def _cmd_eval(args, out):
    term = parse(args.expr)
    algebra = load_algebra(args.algebra) if args.algebra else center_of_group_algebra(group_by_name(args.group))
    _emit_map(out, args.format, evaluate(term, algebra))


def _cmd_quantize(args, out):
    _emit_map(out, args.format, quantize(parse(args.expr), group_by_name(args.group)))


def _manifold(args):
    if args.lens is not None:
        try:
            p, q = (int(x) for x in args.lens.split(","))
        except ValueError:
            raise UsageError(f"--lens expects P,Q, got {args.lens!r}") from None
        return lens(p, q)
    if args.torus3:
        return torus3()
    try:
        with open(args.presentation) as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read presentation: {e}") from None
    return custom(parse_presentation(text, args.presentation))


def _cmd_invariant(args, out):
    g = group_by_name(args.group)
    if args.genus is not None:
        if args.genus < 0:
            raise UsageError("--genus must be non-negative")
        backends = BACKENDS if args.backend == "all" else (args.backend,)
        values = [surface_invariant(args.genus, g, b) for b in backends]
    else:
        if args.backend in ("frobenius", "span"):
            raise UsageError(f"backend {args.backend!r} only handles closed surfaces (--genus)")
        backends = ("count",)
        values = [invariant(_manifold(args), g)]
    shown = [format_rational(v) for v in values]
    doc = dict(zip(backends, shown))
    if len(values) > 1:
        doc["all_equal"] = len(set(values)) == 1
    _emit(out, args.format, backends, [shown], doc)


def _cmd_oracle(args, out):
    rows = oracle_report(group_by_name(args.group), args.max_genus)
    table = [(r.genus, format_rational(r.count), format_rational(r.frobenius), format_rational(r.span),
              str(r.all_equal).lower()) for r in rows]
    doc = [{"genus": r.genus, "count": t[1], "frobenius": t[2], "span": t[3], "all_equal": r.all_equal}
           for r, t in zip(rows, table)]
    _emit(out, args.format, ("genus", "count", "frobenius", "span", "all_equal"), table, doc)


COMMANDS = {
    "parse": _cmd_parse,
    "normalize": _cmd_normalize,
    "validate": _cmd_validate,
    "eval": _cmd_eval,
    "quantize": _cmd_quantize,
    "invariant": _cmd_invariant,
    "oracle": _cmd_oracle,
}


def run(argv=None, out=None, err=None):
    """Run one command; returns the exit status."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out) or 0
    except SystemExit as e:  # --help
        return e.code or 0
    except ResourceLimitError as e:
        err.write(f"error: {e}\n")
        return 2
    except TQFTError as e:
        err.write(f"error: {e}\n")
        return 1
    except OSError as e:
        err.write(f"error: {e}\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
