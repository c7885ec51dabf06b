"""Command-line front end.

Targets are preset names (see ``nodalcones lattice --help``) or paths to JSON
lattice files.  Exit codes: 0 success, 2 invalid input, 3 bound or iteration
limit too small, 4 refused because required hypotheses were not asserted.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import cone_engine as ce
from . import cubic
from .beauville import c2_pairing, riemann_roch
from .pell import pell_family
from .presets import Preset, load_lattice_file, registry_names, resolve
from .qlattice import LatticeError, determinant, discriminant_group, signature
from .report import (
    CONJECTURAL,
    CONJECTURAL_FIBRATION,
    ReportEnvelope,
    eclass_payload,
    sector_payload,
    vector_payload,
)

EXIT_VALIDATION = 2
EXIT_UNSTABLE = 3
EXIT_REFUSED = 4


def _int_pair(text: str) -> tuple[int, int]:
    parts = text.replace("(", "").replace(")", "").split(",")
    try:
        x, y = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'x,y', got {text!r}") from None
    return x, y


def _target(args) -> Preset:
    name = args.target
    pol = getattr(args, "polarization", None)
    if Path(name).suffix == ".json" or Path(name).is_file():
        return load_lattice_file(name, pol)
    preset = resolve(name)
    if pol is not None:
        if preset.config is None:
            raise LatticeError(f"'{name}' has no rank-2 configuration to re-polarize")
        preset = Preset(
            preset.name, preset.lattice, preset.profile, preset.display,
            ce.Rank2Config(preset.lattice, preset.config.profile, pol, preset.name),
            preset.cubic, preset.note,
        )
    return preset


def _cone_params(args, cfg) -> dict:
    return {"bound": args.bound, "polarization": list(cfg.g)}


# --- commands -------------------------------------------------------------

def cmd_lattice(args):
    p = _target(args)
    L = p.lattice
    res = {
        "rank": L.rank,
        "labels": list(L.basis_labels),
        "gram": [list(r) for r in L.gram],
        "even": L.is_even,
        "signature": list(signature(L)),
        "determinant": determinant(L),
        "profile": None if p.profile is None else list(p.profile.divisors),
    }
    if L.is_even:
        res["discriminant_group"] = discriminant_group(L).describe()
    if p.config is not None:
        res["polarization"] = vector_payload(p, p.config.g)
    return ReportEnvelope.for_preset("lattice", p, {}, res)


def cmd_disc_group(args):
    p = _target(args)
    D = discriminant_group(p.lattice)
    res = {
        "order": D.order,
        "cyclic_orders": list(D.cyclic_orders),
        "q_values": list(D.q_values),
        "description": D.describe(),
    }
    return ReportEnvelope.for_preset("disc-group", p, {}, res)


def cmd_enumerate(args):
    p = _target(args)
    cfg = p.require_rank2()
    vecs = ce.enumerate_square(cfg, args.square, args.bound)
    res = [dict(vector_payload(p, v), divisibility=ce.divisibility(v, cfg.profile), kind=cfg.kind(v)) for v in vecs]
    return ReportEnvelope.for_preset("enumerate", p, dict(_cone_params(args, cfg), square=args.square), res)


def cmd_nodal(args):
    p = _target(args)
    cfg = p.require_rank2()
    classes = ce.e_classes(cfg, args.bound)
    res = {
        "e_classes": [eclass_payload(cfg, p, e) for e in classes],
        "nodal": [eclass_payload(cfg, p, e) for e in classes if e.nodal],
    }
    return ReportEnvelope.for_preset("nodal", p, _cone_params(args, cfg), res, [CONJECTURAL])


def cmd_ample(args):
    p = _target(args)
    cfg = p.require_rank2()
    res = {
        "positive_cone": sector_payload(cfg, p, ce.positive_cone(cfg)),
        "ample_cone": sector_payload(cfg, p, ce.ample_cone(cfg, args.bound)),
        "nodal": [eclass_payload(cfg, p, e) for e in ce.nodal_classes(cfg, args.bound)],
    }
    return ReportEnvelope.for_preset("ample", p, _cone_params(args, cfg), res, [CONJECTURAL])


def cmd_chambers(args):
    p = _target(args)
    cfg = p.require_rank2()
    dec = ce.chambers(cfg, args.bound)
    warnings = [CONJECTURAL]
    for side, flag in (("lower", dec.truncated_lo), ("upper", dec.truncated_hi)):
        if flag:
            warnings.append(
                f"walls accumulate toward the {side} irrational boundary; chambers beyond bound {args.bound} are not listed"
            )
    res = {
        "fundamental_domain": sector_payload(cfg, p, dec.domain),
        "walls": [vector_payload(p, w) for w in dec.walls],
        "chambers": [
            dict(
                sector_payload(cfg, p, ch.sector),
                contains_g=ch.contains_g,
                boundary_squares=list(ch.boundary_squares),
            )
            for ch in dec.chambers
        ],
        "truncated": {"lo": dec.truncated_lo, "hi": dec.truncated_hi},
    }
    return ReportEnvelope.for_preset("chambers", p, _cone_params(args, cfg), res, warnings)


def cmd_reduce(args):
    p = _target(args)
    cfg = p.require_rank2()
    try:
        v, word = ce.reduce_to_fundamental(cfg, args.vector, args.max_iters)
    except ce.IterationCapError as exc:
        exc.args = (f"{exc.args[0]}; partial word: {[p.display.expr(r) for r in exc.partial[:20]]}...",)
        raise
    res = {
        "input": vector_payload(p, args.vector),
        "reduced": vector_payload(p, v),
        "word": [vector_payload(p, r) for r in word],
        "length": len(word),
    }
    params = {"max_iters": args.max_iters, "polarization": list(cfg.g)}
    return ReportEnvelope.for_preset("reduce", p, params, res)


def cmd_zero(args):
    p = _target(args)
    cfg = p.require_rank2()
    res = [vector_payload(p, v) for v in ce.square_zero_classes(cfg)]
    return ReportEnvelope.for_preset("zero", p, {"polarization": list(cfg.g)}, res, [CONJECTURAL_FIBRATION])


def cmd_decompose(args):
    p = _target(args)
    cfg = p.require_rank2()
    d = ce.is_decomposable_in_monoid(cfg, args.vector, args.bound)
    res = {
        "vector": vector_payload(p, args.vector),
        "curve_class": [str(c) for c in d.curve],
        "decomposable": d.decomposable,
        "witness": None if d.witness is None else [[str(c) for c in part] for part in d.witness],
        "search_complete": d.complete,
    }
    warnings = [CONJECTURAL]
    if not d.complete:
        warnings.append(f"search box clipped at bound {args.bound}; a negative answer is not conclusive")
    return ReportEnvelope.for_preset("decompose", p, _cone_params(args, cfg), res, warnings)


def _cubic_data(args) -> tuple[Preset | None, cubic.CubicLatticeData]:
    if args.target is not None:
        p = resolve(args.target)
        if p.cubic is None:
            raise LatticeError(f"'{args.target}' is not a cubic fourfold preset")
        return p, p.cubic
    if args.b is None or args.tsq is None:
        raise LatticeError("give a cubic preset or both --b and --tsq")
    return None, cubic.CubicLatticeData(args.b, args.tsq)


def cmd_fano(args):
    p, K = _cubic_data(args)
    gram, profile = cubic.abel_jacobi_transfer(K)
    res = {
        "b": K.b,
        "t_sq": K.t_sq,
        "disc": K.disc,
        "gram": [list(r) for r in gram.gram],
        "determinant": determinant(gram),
        "profile": list(profile.divisors),
        "profile_note": "divisibility profile (2,1) on (g, tau) is inferred, not stated",
    }
    return ReportEnvelope.for_preset("fano", p, {"b": K.b, "t_sq": K.t_sq}, res)


def cmd_ruling(args):
    p = resolve(args.target)
    cfg = p.require_rank2()
    rho = cubic.ruling_class(cfg, args.n, args.t)
    res = {"rho": vector_payload(p, rho)}
    nodal = ce.nodal_classes(cfg, args.bound)
    if len(nodal) == 2:
        dec = cubic.decompose_in_nodal_basis(rho, (nodal[0].vector, nodal[1].vector))
        res["nodal_basis"] = [vector_payload(p, e.vector) for e in nodal]
        res["coefficients"] = [dec.a, dec.b]
        res["verdict"] = dec.verdict
    return ReportEnvelope.for_preset(
        "ruling", p, {"n": args.n, "t": args.t, "bound": args.bound}, res, [CONJECTURAL]
    )


def cmd_scrolls(args):
    if args.row is not None:
        n, delta = args.row
        rows = [cubic.scroll_record(n, delta)]
    else:
        rows = cubic.nodal_scroll_table(args.nmax, args.speculative)
    params = {"nmax": args.nmax, "speculative": args.speculative, "row": args.row}
    warnings = ["speculative rows are not predicted by nodal classes"] if args.speculative else []
    return ReportEnvelope.for_preset("scrolls", None, params, [r.as_dict() for r in rows], warnings), rows


def cmd_unirat(args):
    deg = cubic.unirational_degree(args.n, args.delta, args.assume_not_cone, args.assume_isolated)
    warnings = []
    if (args.n, args.delta) in cubic.KNOWN_NONEXISTENT:
        warnings.append(cubic.KNOWN_NONEXISTENT[(args.n, args.delta)])
    res = {"degree": deg, "r_square": cubic.ruling_r_square(args.n, args.delta)}
    params = {"n": args.n, "delta": args.delta, "assume_not_cone": True, "assume_isolated": True}
    return ReportEnvelope.for_preset("unirat", None, params, res, warnings)


def cmd_rr(args):
    res = {"q": args.q, "chi": riemann_roch(args.q), "c2_pairing": c2_pairing(args.q)}
    return ReportEnvelope.for_preset("rr", None, {"q": args.q}, res)


def cmd_pell(args):
    fam = pell_family(args.n, args.c)
    res = {
        "fundamental": [list(s) for s in fam.fundamental],
        "seeds": [list(s) for s in fam.seeds],
        "matrix": [list(r) for r in fam.matrix],
        "solutions": [list(s) for s in fam.solutions(args.bound)],
    }
    return ReportEnvelope.for_preset("pell", None, {"n": args.n, "c": args.c, "bound": args.bound}, res)


# --- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print JSON")
    common.add_argument("--tsv", action="store_true", default=argparse.SUPPRESS, help="print TSV (tables only)")
    common.add_argument("--bound", type=int, default=argparse.SUPPRESS, help="enumeration bound (default 200)")
    common.add_argument("--max-iters", type=int, default=argparse.SUPPRESS, help="reflection cap (default 10000)")

    parser = argparse.ArgumentParser(
        prog="nodalcones",
        description="Exact lattice computations for hyperkaehler fourfolds of K3^[2] type.",
        epilog="presets: " + ", ".join(registry_names()),
    )
    parser.add_argument("--json", action="store_true", default=False, help="print JSON")
    parser.add_argument("--tsv", action="store_true", default=False, help="print TSV (tables only)")
    parser.add_argument("--bound", type=int, default=ce.DEFAULT_BOUND, help="enumeration bound (default 200)")
    parser.add_argument("--max-iters", type=int, default=ce.DEFAULT_MAX_ITERS, help="reflection cap (default 10000)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, target=True, rank2=False):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if target:
            sp.add_argument("target", help="preset name or lattice JSON file")
        if rank2:
            sp.add_argument("--polarization", type=_int_pair, help="polarization 'x,y' (needed for files)")
        sp.set_defaults(func=func)
        return sp

    add("lattice", cmd_lattice, "rank, Gram, signature, determinant, discriminant group")
    add("disc-group", cmd_disc_group, "discriminant group and its quadratic form")
    sp = add("enumerate", cmd_enumerate, "primitive classes of given square", rank2=True)
    sp.add_argument("--square", type=int, required=True, help="the square c")
    add("nodal", cmd_nodal, "E-classes and nodal classes", rank2=True)
    add("ample", cmd_ample, "positive cone and predicted ample cone", rank2=True)
    add("chambers", cmd_chambers, "fundamental domain and its chambers", rank2=True)
    sp = add("reduce", cmd_reduce, "reflect a class into the fundamental domain", rank2=True)
    sp.add_argument("vector", type=_int_pair, help="'x,y' (use -- before negative entries)")
    add("zero", cmd_zero, "integral square-zero classes", rank2=True)
    sp = add("decompose", cmd_decompose, "split a curve class in the effective monoid", rank2=True)
    sp.add_argument("vector", type=_int_pair, help="'x,y' divisor class; its curve class is tested")
    sp = add("ruling", cmd_ruling, "divisor class of a ruling from its pairings", rank2=False)
    sp.add_argument("n", type=int)
    sp.add_argument("t", type=int)

    sp = add("scrolls", cmd_scrolls, "table of scrolls with nodal ruling classes", target=False)
    sp.add_argument("--nmax", type=int, default=11)
    sp.add_argument("--speculative", action="store_true", help="also list non-nodal delta values")
    sp.add_argument("--row", type=_int_pair, help="a single 'n,delta' record")
    sp = add("fano", cmd_fano, "transfer <h^2, T> to the Fano variety", target=False)
    sp.add_argument("target", nargs="?", help="cubic preset")
    sp.add_argument("--b", type=int)
    sp.add_argument("--tsq", type=int)
    sp = add("unirat", cmd_unirat, "degree of the unirational parametrization", target=False)
    sp.add_argument("n", type=int)
    sp.add_argument("delta", type=int)
    sp.add_argument("--assume-not-cone", action="store_true")
    sp.add_argument("--assume-isolated", action="store_true", help="isolated singularities")
    sp = add("rr", cmd_rr, "Euler characteristic of a line bundle of square q", target=False)
    sp.add_argument("q", type=int)
    sp = add("pell", cmd_pell, "solutions of 2n x^2 - 2y^2 = c", target=False)
    sp.add_argument("n", type=int)
    sp.add_argument("c", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.bound < 1:
            raise LatticeError(f"--bound must be positive, got {args.bound}")
        if args.max_iters < 0:
            raise LatticeError(f"--max-iters must be nonnegative, got {args.max_iters}")
        out = args.func(args)
        rows = None
        if isinstance(out, tuple):
            out, rows = out
        if args.tsv:
            if args.command == "scrolls":
                sys.stdout.write(cubic.records_to_tsv(rows))
                return 0
            if args.command == "enumerate":
                lines = ["x\ty\tsquare\tdivisibility\tkind"]
                for r in out.as_dict()["results"]:
                    lines.append(f"{r['raw'][0]}\t{r['raw'][1]}\t{r['square']}\t{r['divisibility']}\t{r['kind'] or ''}")
                print("\n".join(lines))
                return 0
            raise LatticeError("--tsv is only available for scrolls and enumerate")
        print(out.to_json() if args.json else out.to_text())
        return 0
    except cubic.AssumptionRequired as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (ce.InstabilityError, ce.IterationCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except (LatticeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
