"""Command line front end.  Every subcommand is a thin wrapper around the library."""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import coweights, lattices, modules, pairs, spaces, strata
from .errors import DlabError
from .field import FieldCtx
from .witt import WittCtx


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    precision: int | None = None
    max_enum: int | None = None
    fmt: str = "json"

    def apply(self) -> None:
        if self.max_enum is not None:
            os.environ["DLAB_MAX_ENUM"] = str(self.max_enum)


class SchemaError(DlabError):
    code = "schema"


def _read_json(path: str | None):
    text = open(path).read() if path and path != "-" else sys.stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"input is not JSON: {exc}") from exc


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.replace("(", "").replace(")", "").split(",") if t.strip()]


def _emit(obj) -> None:
    if isinstance(obj, str):
        print(obj)
    else:
        print(json.dumps(obj, sort_keys=True))


def _load_space(obj) -> spaces.DSpace:
    if obj.get("kind") == "module":
        return modules.module_from_json(obj).reduction()
    return spaces.from_json(obj)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_gen(args, cfg: RunConfig):
    p = args.p
    if args.kind in ("braid", "superspecial", "reference", "random-space"):
        d = 2 if args.field_degree is None else args.field_degree
        if args.module:
            ctx = WittCtx(p, d, cfg.precision or 2 * (args.n or args.m) + 8)
            if args.kind == "braid":
                mod = modules.make_braid_module(args.n, ctx)
            elif args.kind == "superspecial":
                mod = modules.make_superspecial_module(args.m, ctx)
            elif args.kind == "reference":
                mod = modules.reference_module(args.rho, args.n, ctx)
            else:
                mod = modules.random_symplectic_module_change(modules.reference_module(args.rho, args.n, ctx),
                                                              np.random.default_rng(cfg.seed))
            return modules.module_to_json(mod)
        ctx = FieldCtx(p, d)
        if args.kind == "braid":
            sp = spaces.make_braid(args.n, ctx=ctx)
        elif args.kind == "superspecial":
            sp = spaces.make_superspecial(args.m, ctx=ctx)
        elif args.kind == "reference":
            sp = spaces.reference_space(args.rho, args.n, ctx=ctx)
        else:
            sp, _, _ = spaces.random_symplectic_base_change(spaces.reference_space(args.rho, args.n, ctx=ctx),
                                                            np.random.default_rng(cfg.seed))
        return spaces.to_json(sp)
    if args.kind == "genbraid":
        gb = lattices.make_genbraid(args.m, args.l, args.a, p=p, prec=cfg.precision)
        N = gb.lattice()
        return {"kind": "genbraid", "m": gb.m, "l": gb.l, "a": gb.a, "p": gb.p,
                "lg_Nt_over_N": N.dual().length_over(N), "integral": gb.is_integral,
                "quasi_braid": gb.is_quasi_braid, "braid": gb.is_braid,
                "module": modules.module_to_json(gb.module())}
    if args.kind == "pair":
        ctx = FieldCtx(p, args.field_degree or 1)
        pm, _, _ = pairs.random_pair(ctx, args.n, args.m, args.l, np.random.default_rng(cfg.seed), c=args.c)
        return pm.to_json()
    raise SchemaError(f"unknown kind {args.kind}")


def cmd_classify(args, cfg):
    return str(spaces.classify(_load_space(_read_json(args.input))))


def cmd_slopes(args, cfg):
    obj = _read_json(args.input)
    if obj.get("kind") == "module":
        return modules.newton_slopes(modules.module_from_json(obj)).format()
    # a space determines the polygon through its class
    sp = spaces.from_json(obj)
    return strata.eo_to_polygon(spaces.classify(sp), sp.dim0).format()


def cmd_aut_count(args, cfg):
    sp = _load_space(_read_json(args.input))
    return str(spaces.isom_count(sp, sp, args.k))


def cmd_hom_count(args, cfg):
    return str(spaces.hom_gd_count(_load_space(_read_json(args.src)), _load_space(_read_json(args.dst)), args.k))


def cmd_strata_table(args, cfg):
    rows = strata.strata_table(args.n)
    if cfg.fmt == "tsv":
        lines = ["rho\tcodim\tsupersingular\tpolygon"]
        lines += [f"{r.rho}\t{r.codim}\t{str(r.supersingular).lower()}\t{r.polygon.format()}" for r in rows]
        return "\n".join(lines)
    return [r.to_json() for r in rows]


def cmd_normal_form(args, cfg):
    pm = pairs.PairModule.from_json(_read_json(args.input))
    psi, psi_p, nf = pairs.normal_form(pm)
    x = pairs.xi(pm)
    return {"xi": [x.m, x.l], "psi": psi.tolist(), "psi_prime": psi_p.tolist(), "normal": nf.to_json()}


def cmd_incidence_count(args, cfg):
    pm = pairs.PairModule.from_json(_read_json(args.input))
    return str(pairs.incidence_count(pm, args.q))


def cmd_enum_lattices(args, cfg):
    gb = lattices.make_genbraid(args.m, args.l, args.a, p=args.p, prec=cfg.precision)
    out = [{"alpha": e.alpha, "beta": e.beta, "lambda": e.lam} for e in lattices.enumerate_lattices(gb)]
    if cfg.fmt == "tsv":
        return "\n".join(["alpha\tbeta\tlambda"] + [f"{e['alpha']}\t{e['beta']}\t{e['lambda']}" for e in out])
    return out


def cmd_frob_type(args, cfg):
    res = coweights.frob_type_check(args.n, args.p, cfg.precision or 8)
    text = "(" + ",".join(map(str, res.coweight.x)) + ")"
    if not res.ok:
        raise DlabError(f"FAIL: {text}")
    return f"OK: {text}"


def cmd_inv(args, cfg):
    return str(coweights.inv_lattice_pair(_ints(args.g0), _ints(args.g1)).rep)


def cmd_dominance(args, cfg):
    a, b = coweights.Coweight(_ints(args.a)), coweights.Coweight(_ints(args.b))
    return "true" if coweights.dominance_leq(a, b) else "false"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dlab", description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--precision", type=int, default=None)
    ap.add_argument("--max-enum", type=int, default=None)
    ap.add_argument("--format", choices=("json", "tsv"), default="json")
    # the same options are accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS)
    common.add_argument("--max-enum", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", dest="fmt_local", choices=("json", "tsv"), default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name):
        return sub.add_parser(name, parents=[common])

    g = add("gen")
    g.add_argument("kind", choices=("braid", "superspecial", "reference", "random-space", "genbraid", "pair"))
    for name in ("n", "m", "l", "a", "rho"):
        g.add_argument(f"--{name}", type=int, default=0 if name in ("l", "a") else None)
    g.add_argument("--p", type=int, default=3)
    g.add_argument("--c", type=int, default=1)
    g.add_argument("--field-degree", type=int, default=None)
    g.add_argument("--module", action="store_true", help="emit a Witt-level module instead of a space")
    g.set_defaults(func=cmd_gen)

    for name, func in (("classify", cmd_classify), ("slopes", cmd_slopes), ("normal-form", cmd_normal_form)):
        s = add(name)
        s.add_argument("--input", default=None)
        s.set_defaults(func=func)

    s = add("aut-count")
    s.add_argument("--input", default=None)
    s.add_argument("--k", type=int, default=1)
    s.set_defaults(func=cmd_aut_count)

    s = add("hom-count")
    s.add_argument("--src", required=True)
    s.add_argument("--dst", required=True)
    s.add_argument("--k", type=int, default=1)
    s.set_defaults(func=cmd_hom_count)

    s = add("strata-table")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_strata_table)

    s = add("incidence-count")
    s.add_argument("--input", default=None)
    s.add_argument("--q", type=int, required=True)
    s.set_defaults(func=cmd_incidence_count)

    s = add("enum-lattices")
    for name in ("m", "l", "a"):
        s.add_argument(f"--{name}", type=int, required=name == "m", default=0)
    s.add_argument("--p", type=int, default=3)
    s.set_defaults(func=cmd_enum_lattices)

    s = add("frob-type")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int, default=3)
    s.set_defaults(func=cmd_frob_type)

    s = add("inv")
    s.add_argument("--g0", required=True)
    s.add_argument("--g1", required=True)
    s.set_defaults(func=cmd_inv)

    s = add("dominance")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.set_defaults(func=cmd_dominance)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = getattr(args, "fmt_local", None) or args.format
    cfg = RunConfig(args.seed, args.precision, args.max_enum, fmt)
    cfg.apply()
    try:
        _emit(args.func(args, cfg))
    except DlabError as exc:
        print(json.dumps({"error": exc.code, "detail": str(exc)}), file=sys.stderr)
        return exc.exit_code
    except (KeyError, ValueError, TypeError, IndexError, OSError) as exc:
        print(json.dumps({"error": "schema", "detail": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
