"""Command-line front end: likarr {prelikelihood, likelihood, graphic}."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import graphic as gr
from ._engine import budget
from .errors import BudgetExceeded, ConsistencyError, ParseError
from .groebner import codim, minimal_generators
from .likelihood import INCONCLUSIVE, is_gentle, parse_arrangement, pre_likelihood_ideal, presentation
from .multidegree import ml_degree, multidegree
from .poly import BIGREVLEX, GREVLEX

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_CONSISTENCY = 0, 2, 3, 4
ORDERS = {"bigrevlex": BIGREVLEX, "grevlex": GREVLEX}


class Inconclusive(Exception):
    def __init__(self, report):
        super().__init__(report.get("error", "inconclusive"))
        self.report = report


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _load_arrangement(args):
    try:
        return parse_arrangement(_read(args.file), check_coprime=not args.allow_common_factors)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _gen_entries(polys) -> list:
    polys = sorted(polys, key=lambda g: (g.total_degree(), str(g)))
    return [{"poly": str(g), "bidegree": list(g.bidegree() or (None, None))} for g in polys]


def _ring_entry(ring) -> dict:
    return {"x": list(ring.x_vars), "s": list(ring.s_vars)}


def cmd_prelikelihood(args) -> dict:
    arr = _load_arrangement(args)
    pres = presentation(arr)
    I0 = pre_likelihood_ideal(arr, pres)
    gens = minimal_generators(I0)
    return {
        "ring": _ring_entry(arr.s_ring),
        "kernel_generators": pres.l,
        "generators": _gen_entries(gens),
    }


def cmd_likelihood(args) -> dict:
    arr = _load_arrangement(args)
    witness = None
    if args.witness:
        witness = arr.ring.parse(args.witness)
    verdict = is_gentle(arr, witness=witness, skip_minors=args.skip_minors)
    report = {
        "ring": _ring_entry(arr.s_ring),
        "verdict": verdict.status,
        "witness": str(verdict.witness) if verdict.witness is not None else None,
        "passes": verdict.passes,
    }
    if verdict.status == INCONCLUSIVE:
        report["error"] = verdict.error
        raise Inconclusive(report)
    I = verdict.ideal
    form = multidegree(I, ORDERS[args.order])
    report.update(
        {
            "generators": _gen_entries(minimal_generators(I)),
            "codim": codim(I),
            "multidegree": {"form": str(form), "coefficients": {str(k): v for k, v in sorted(form.as_dict().items())}},
            "ml_degree": ml_degree(form),
        }
    )
    return report


def cmd_graphic(args) -> dict:
    G = gr.parse_graph(_read(args.file))
    sub = args.subcommand
    report = {"n": G.n, "edges": [list(e) for e in G.edges]}
    if sub == "arrangement":
        arr = gr.graphic_arrangement(G, drop_last=args.drop_last)
        report["forms"] = [str(f) for f in arr.polys]
    elif sub == "chordal":
        report["chordal"] = gr.is_chordal(G)
    elif sub == "separators":
        report["separators"] = [
            {"T": list(s.T), "components": [list(c) for c in s.components]} for s in gr.minimal_separators(G)
        ]
    elif sub == "generators":
        report["generators"] = _gen_entries(gr.graphic_prelikelihood_generators(G))
    elif sub == "obstruction":
        report["obstruction"] = gr.octahedron_obstruction(G)
    elif sub == "gentle":
        arr = gr.graphic_arrangement(G, drop_last=args.drop_last)
        verdict = is_gentle(arr, witness=None, skip_minors=args.skip_minors)
        report["verdict"] = verdict.status
        report["witness"] = str(verdict.witness) if verdict.witness is not None else None
        if verdict.status == INCONCLUSIVE:
            report["error"] = verdict.error
            raise Inconclusive(report)
    return report


def render_text(report: dict) -> str:
    out = [f"command: {report['command']}"]
    for key, value in report.items():
        if key in ("command", "stats"):
            continue
        if key == "generators":
            out.append(f"generators ({len(value)}):")
            out += [f"  ({g['bidegree'][0]},{g['bidegree'][1]})  {g['poly']}" for g in value]
        elif key == "separators":
            out.append(f"separators ({len(value)}):")
            out += [f"  T={{{','.join(map(str, s['T']))}}}  components={s['components']}" for s in value]
        elif key == "multidegree":
            out.append(f"multidegree: {value['form']}")
        elif key == "ring":
            out.append(f"ring: {' '.join(value['x'])} | {' '.join(value['s'])}")
        elif key == "forms":
            out.append(f"forms ({len(value)}):")
            out += [f"  {f}" for f in value]
        elif key == "edges":
            out.append(f"edges: {' '.join(f'{i}-{j}' for i, j in value)}")
        elif isinstance(value, bool) or value is None:
            out.append(f"{key}: {json.dumps(value)}")
        else:
            out.append(f"{key}: {value}")
    if "stats" in report:
        out.append(f"seconds: {report['stats']['seconds']}")
    return "\n".join(out) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", choices=sorted(ORDERS), default="bigrevlex", help="term order for the multidegree")
    common.add_argument("--max-pairs", type=int, help="cap on S-pairs per Groebner run")
    common.add_argument("--max-degree", type=int, help="cap on S-pair sugar degree")
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identical output)")
    common.add_argument("-v", "--verbose", action="store_true", help="log Groebner statistics to stderr")

    arrangement = argparse.ArgumentParser(add_help=False)
    arrangement.add_argument("file", help="arrangement file")
    arrangement.add_argument(
        "--allow-common-factors", action="store_true", help="skip the pairwise coprimality check"
    )

    p = argparse.ArgumentParser(prog="likarr", description="Likelihood ideals of hypersurface arrangements.")
    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("prelikelihood", parents=[common, arrangement], help="pre-likelihood ideal")
    sp.set_defaults(func=cmd_prelikelihood)
    sl = sub.add_parser("likelihood", parents=[common, arrangement], help="likelihood ideal, multidegree, ML degree")
    sl.add_argument("--witness", help="polynomial to saturate at first")
    sl.add_argument("--skip-minors", action="store_true", help="saturate only at the f_i (and --witness)")
    sl.set_defaults(func=cmd_likelihood)
    sg = sub.add_parser("graphic", parents=[common], help="graphic arrangements")
    sg.add_argument(
        "subcommand", choices=["arrangement", "chordal", "separators", "generators", "obstruction", "gentle"]
    )
    sg.add_argument("file", help="graph file")
    sg.add_argument("--drop-last", action="store_true", help="set x_n = 0")
    sg.add_argument("--skip-minors", action="store_true", help="saturate only at the edge forms")
    sg.set_defaults(func=cmd_graphic)
    return p


def _emit(report, args):
    if args.json:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(render_text(report))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.ERROR, format="%(name)s: %(message)s")
    echo = " ".join([args.command] + ([args.subcommand] if args.command == "graphic" else []) + [args.file])
    start = time.perf_counter()
    code = EXIT_OK
    try:
        with budget(args.max_pairs, args.max_degree):
            report = args.func(args)
    except Inconclusive as exc:
        report, code = exc.report, EXIT_BUDGET
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        report, code = {"verdict": INCONCLUSIVE, "error": str(exc)}, EXIT_BUDGET
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report = {"command": echo, **report}
    if args.timing:
        report["stats"] = {"seconds": round(time.perf_counter() - start, 3)}
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
