"""Command-line front end.

Exit codes: 0 success, 2 mathematically invalid input (e.g. a packing whose
claimed class fails certification), 1 usage or IO errors.

Inputs accept a file path, ``-`` for stdin, or an inline ``gen:`` spec:
``gen:complex:Q`` / ``gen:real:4`` for MUB families and
``gen:<family>:<params...>`` (e.g. ``gen:affine:2:1``) for designs.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import designs as dz
from . import hadamard as hd
from . import mubs as mb
from . import packing as pk
from . import recipe as rc
from .errors import (
    CapacityError,
    OgffError,
    ParseError,
    UnsupportedParameters,
)

TOL_ENV = "OGFF_TOL"

EXIT_OK, EXIT_USAGE, EXIT_INVALID = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


@dataclass
class RunConfig:
    command: str
    subcommand: str | None
    inputs: dict = field(default_factory=dict)
    out: str | None = None
    tol: float = pk.DEFAULT_TOL
    fmt: str = "json"

    def validate(self):
        if not self.tol > 0:
            raise UsageError(f"tolerance must be positive, got {self.tol}")
        for name, src in self.inputs.items():
            if src is None or src == "-" or str(src).startswith("gen:"):
                continue
            if not Path(src).is_file():
                raise UsageError(f"--{name}: no such file {src!r}")


def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return pk.DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={raw!r} is not a number") from None


def _read(src: str | None) -> str:
    if src is None or src == "-":
        return sys.stdin.read()
    return Path(src).read_text(encoding="utf-8")


def _write(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _text(rec: dict) -> str:
    def fmt(v):
        if v is None:
            return "none"
        if isinstance(v, bool):
            return str(v).lower()
        return str(v)

    return "\n".join(f"{k} {fmt(v)}" for k, v in rec.items())


def _gen_args(spec: str) -> list[str]:
    return spec.split(":")[1:]


def _ints(parts, what):
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise UsageError(f"bad {what} spec: parameters must be integers") from None


def load_mubs(src: str, tol: float) -> mb.MubFamily:
    if src.startswith("gen:"):
        parts = _gen_args(src)
        if len(parts) != 2 or parts[0] not in mb.FIELDS:
            raise UsageError(f"bad MUB spec {src!r}; expected gen:complex:Q or gen:real:M")
        (size,) = _ints(parts[1:], "MUB")
        return mb.gen_complex_mubs(size) if parts[0] == "complex" else mb.gen_real_mubs(size)
    return mb.import_mubs(_read(src), tol)


def load_design(src: str) -> dz.BlockDesign:
    if src.startswith("gen:"):
        parts = _gen_args(src)
        if not parts:
            raise UsageError(f"bad design spec {src!r}")
        return dz.generate(parts[0], *_ints(parts[1:], "design"))
    return dz.BlockDesign.from_json(_read(src))


def load_packing(src: str | None, tol: float) -> pk.Packing:
    return pk.Packing.from_json(_read(src), tol)


# -- handlers -----------------------------------------------------------------

def _mubs(args, cfg: RunConfig) -> int:
    if args.sub == "gen":
        fam = mb.gen_complex_mubs(args.m) if args.field == "complex" else mb.gen_real_mubs(args.m)
        _write(fam.to_json(), cfg.out)
        return EXIT_OK
    if args.sub == "verify":
        fam = mb.MubFamily.from_json(_read(args.input)) if not args.input.startswith("gen:") \
            else load_mubs(args.input, cfg.tol)
        rep = mb.verify_mubs(fam, cfg.tol)
        _write(json.dumps(rep, sort_keys=True), cfg.out)
        ok = rep["orthonormal"] and rep["unbiased"] and rep["bound_ok"]
        return EXIT_OK if ok else EXIT_INVALID
    # export re-serializes any source; import additionally demands a file
    fam = load_mubs(args.input, cfg.tol)
    _write(mb.export_mubs(fam), cfg.out)
    return EXIT_OK


def _design(args, cfg: RunConfig) -> int:
    if args.sub == "gen":
        d = dz.generate(args.family, *args.params)
        _write(d.to_json(), cfg.out)
        return EXIT_OK
    d = load_design(args.input)
    rep = dz.validate_design(d)
    if cfg.fmt == "text":
        rec = {k: v for k, v in rep.to_dict().items() if k != "parallel_classes"}
        _write(_text(rec), cfg.out)
    else:
        _write(json.dumps(rep.to_dict(), sort_keys=True), cfg.out)
    return EXIT_OK


def _hadamard(args, cfg: RunConfig) -> int:
    if args.sub == "gen":
        if (args.sylvester is None) == (args.regular is None):
            raise UsageError("hadamard gen needs exactly one of --sylvester K or --regular S")
        h = hd.sylvester(args.sylvester) if args.sylvester is not None else hd.regular_hadamard_power4(args.regular)
        if args.normalize:
            h = hd.normalize(h)
        _write(h.to_json(), cfg.out)
        return EXIT_OK
    h = hd.SignMatrix.from_json(_read(args.input))
    rep = hd.is_hadamard(h)
    _write(json.dumps({**rep, "order": h.order}, sort_keys=True), cfg.out)
    return EXIT_OK if rep["hadamard"] else EXIT_INVALID


def _assemble(args, cfg: RunConfig) -> int:
    fam = load_mubs(args.mubs, cfg.tol)
    d = load_design(args.design)
    bases = None if args.bases is None else _ints(args.bases.split(","), "--bases")
    p = rc.assemble_ogff(fam, d, bases=bases, override_cardinality=args.override_cardinality, tol=cfg.tol)
    _write(p.to_json(), cfg.out)
    return EXIT_OK


def _etff(args, cfg: RunConfig) -> int:
    d = load_design(args.design)
    basis, fld = None, args.field
    if args.mubs is not None:
        fam = load_mubs(args.mubs, cfg.tol)
        if not 0 <= args.basis_index < fam.K:
            raise UsageError(f"--basis-index must be in 0..{fam.K - 1}")
        basis, fld = fam.bases[args.basis_index], fam.field
    p = rc.etff_from_symmetric(d, basis, fld, tol=cfg.tol)
    _write(p.to_json(), cfg.out)
    return EXIT_OK


def _certify(args, cfg: RunConfig) -> int:
    p = load_packing(args.input, cfg.tol)
    cert = pk.certify(p, cfg.tol)
    if cfg.fmt == "text":
        body = _text(cert.to_dict())
    else:
        body = cert.to_json()
    if args.out:
        Path(f"{args.out}.json").write_text(cert.to_json() + "\n", encoding="utf-8")
        Path(f"{args.out}.csv").write_text(cert.to_csv(), encoding="utf-8")
        if cfg.fmt == "text":
            _write(body, None)
    else:
        _write(body, None)
        sys.stderr.write(cert.to_csv())

    failed = []
    claim = p.provenance.get("claim")
    if claim == "OGFF" and not cert.is_ogff:
        failed.append(f"claimed OGFF but certified {cert.classification}")
    if claim == "ETFF" and cert.classification != "ETFF":
        failed.append(f"claimed ETFF but certified {cert.classification}")
    if args.expect and cert.classification != args.expect:
        failed.append(f"expected {args.expect} but certified {cert.classification}")
    for msg in failed:
        sys.stderr.write(f"validation failed: {msg}\n")
    return EXIT_INVALID if failed else EXIT_OK


def _complement(args, cfg: RunConfig) -> int:
    p = load_packing(args.input, cfg.tol)
    _write(pk.spatial_complement(p, cfg.tol).to_json(), cfg.out)
    return EXIT_OK


def _embed(args, cfg: RunConfig) -> int:
    p = load_packing(args.input, cfg.tol)
    vecs = pk.embed_packing(p)
    out = {"field": p.field, "m": p.m, "l": p.l,
           "dim": pk.ambient_traceless_dim(p.m, p.field), "vectors": vecs.tolist()}
    _write(json.dumps(out, sort_keys=True, separators=(",", ":")), cfg.out)
    return EXIT_OK


def _bounds(args, cfg: RunConfig) -> int:
    b = pk.chordal_lower_bound(args.n, args.l, args.m, args.field)
    d = pk.ambient_traceless_dim(args.m, args.field)
    tau = pk.rankin_tau(args.n, d) if d >= 1 else None
    rec = {
        "simplex": b.simplex, "orthoplex": b.orthoplex, "eligible": b.eligible,
        "maximal_n": b.maximal_n, "d": d,
        "regime": None if tau is None else tau.regime,
        "simplex_exact": pk._fmt(b.simplex_exact), "orthoplex_exact": pk._fmt(b.orthoplex_exact),
    }
    if cfg.fmt == "json":
        _write(json.dumps(rec, sort_keys=True), cfg.out)
    else:
        _write(_text(rec), cfg.out)
    return EXIT_OK


def _catalog(args, cfg: RunConfig) -> int:
    entries = rc.family_catalog(args.max_m)
    if args.format == "csv":
        import csv
        import io
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=rc.CATALOG_COLUMNS, lineterminator="\n")
        w.writeheader()
        for e in entries:
            row = e.to_dict()
            row["params"] = ";".join(f"{k}={v}" for k, v in e.params.items())
            row["maximal"] = str(e.maximal).lower()
            row["constructible_in_v1"] = str(e.constructible_in_v1).lower()
            w.writerow(row)
        _write(buf.getvalue(), cfg.out)
    else:
        _write(json.dumps([e.to_dict() for e in entries], sort_keys=True, indent=1), cfg.out)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    root = _Parser(prog="ogff", description="Optimal fusion frames from MUBs and block designs.")
    root.add_argument("--tol", type=float, default=None,
                      help=f"numerical tolerance (default ${TOL_ENV} or {pk.DEFAULT_TOL})")
    cmds = root.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def out_opt(p):
        p.add_argument("--out", "-o", default=None, help="output path (default stdout)")

    m = cmds.add_parser("mubs", help="mutually unbiased bases").add_subparsers(dest="sub", required=True)
    g = m.add_parser("gen")
    g.add_argument("--field", choices=mb.FIELDS, default="complex")
    g.add_argument("--m", type=int, required=True, help="dimension (prime power; 4 for real)")
    out_opt(g)
    for name in ("verify", "export", "import"):
        s = m.add_parser(name)
        s.add_argument("input", help="file, '-' or gen:FIELD:M")
        out_opt(s)

    d = cmds.add_parser("design", help="block designs").add_subparsers(dest="sub", required=True)
    g = d.add_parser("gen")
    g.add_argument("family", choices=sorted(dz.GENERATORS))
    g.add_argument("params", type=int, nargs="+")
    out_opt(g)
    v = d.add_parser("validate")
    v.add_argument("input", help="file, '-' or gen:FAMILY:PARAMS")
    v.add_argument("--format", choices=("json", "text"), default="json")
    out_opt(v)

    h = cmds.add_parser("hadamard", help="Hadamard matrices").add_subparsers(dest="sub", required=True)
    g = h.add_parser("gen")
    g.add_argument("--sylvester", type=int, metavar="K")
    g.add_argument("--regular", type=int, metavar="S")
    g.add_argument("--normalize", action="store_true")
    out_opt(g)
    c = h.add_parser("check")
    c.add_argument("input")
    out_opt(c)

    def pack_commands(sub, with_catalog: bool):
        a = sub.add_parser("assemble", help="tight OGFF from MUBs x design")
        a.add_argument("--mubs", required=True)
        a.add_argument("--design", required=True)
        a.add_argument("--bases", default=None, help="comma-separated basis indices (default all)")
        a.add_argument("--override-cardinality", action="store_true")
        out_opt(a)
        e = sub.add_parser("etff", help="ETFF from a symmetric design")
        e.add_argument("--design", required=True)
        e.add_argument("--mubs", default=None, help="take the basis from this family")
        e.add_argument("--basis-index", type=int, default=0)
        e.add_argument("--field", choices=pk.FIELDS, default="complex")
        out_opt(e)
        if with_catalog:
            add_catalog(sub)

    p = cmds.add_parser("pack", help="packings").add_subparsers(dest="sub", required=True)
    pack_commands(p, with_catalog=False)
    c = p.add_parser("certify")
    c.add_argument("input", nargs="?", default="-")
    c.add_argument("--out", "-o", default=None, metavar="PREFIX",
                   help="write PREFIX.json and PREFIX.csv instead of stdout/stderr")
    c.add_argument("--expect", choices=pk.CLASSIFICATIONS, default=None)
    c.add_argument("--format", choices=("json", "text"), default="json")
    for name in ("complement", "embed"):
        s = p.add_parser(name)
        s.add_argument("input", nargs="?", default="-")
        out_opt(s)

    r = cmds.add_parser("recipe", help="alias group: assemble, etff, catalog")
    pack_commands(r.add_subparsers(dest="sub", required=True), with_catalog=True)

    b = cmds.add_parser("bounds", help="simplex and orthoplex coherence bounds")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--l", type=int, required=True)
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--field", choices=pk.FIELDS, default="complex")
    b.add_argument("--format", choices=("json", "text"), default="text")
    out_opt(b)

    add_catalog(cmds)
    return root


def add_catalog(sub):
    c = sub.add_parser("catalog", help="constructible OGFF families up to a dimension")
    c.add_argument("--max-m", type=int, required=True)
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--out", "-o", default=None)


HANDLERS = {
    ("mubs", None): _mubs,
    ("design", None): _design,
    ("hadamard", None): _hadamard,
    ("pack", "assemble"): _assemble,
    ("pack", "etff"): _etff,
    ("pack", "certify"): _certify,
    ("pack", "complement"): _complement,
    ("pack", "embed"): _embed,
    ("recipe", "assemble"): _assemble,
    ("recipe", "etff"): _etff,
    ("recipe", "catalog"): _catalog,
    ("bounds", None): _bounds,
    ("catalog", None): _catalog,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        tol = args.tol if args.tol is not None else _default_tol()
        sub = getattr(args, "sub", None)
        inputs = {k: getattr(args, k) for k in ("input", "mubs", "design") if isinstance(getattr(args, k, None), str)}
        cfg = RunConfig(args.command, sub, inputs, getattr(args, "out", None), tol,
                        getattr(args, "format", "json"))
        cfg.validate()
        handler = HANDLERS.get((args.command, sub)) or HANDLERS[(args.command, None)]
        return handler(args, cfg)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        if "usage:" not in str(exc):
            sys.stderr.write(parser.format_usage())
        return EXIT_USAGE
    except (ParseError, UnsupportedParameters, CapacityError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OgffError as exc:
        sys.stderr.write(f"invalid: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
