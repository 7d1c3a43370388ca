"""Command-line front end: ``hkimplosion <group> <command> [options]``.

Every leaf command reads one JSON document (``--input`` plus convenience
flags), validates it against ``schemas/<group>-<command>.json`` and prints
one JSON document.  Exit status: 0 ok, 1 failed property, 2 precondition,
3 schema, 4 numerical.
"""

from __future__ import annotations

import argparse
import csv
import functools
import json
import sys
import warnings
from importlib import resources

import jsonschema
import numpy as np

from . import (arrangement, contraction, hypertoric, jsonio, mtcat, nahm, quiver, rootsys,
               verify)
from .errors import ImplosionError, PreconditionError

EXIT_OK, EXIT_PROPERTY, EXIT_PRECONDITION, EXIT_SCHEMA, EXIT_NUMERICAL = 0, 1, 2, 3, 4
DEFAULT_SEED = 0


class SchemaError(Exception):
    pass


@functools.lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    path = resources.files("hkimplosion") / "schemas" / f"{name}.json"
    return json.loads(path.read_text())


def schema_names() -> list[str]:
    d = resources.files("hkimplosion") / "schemas"
    return sorted(p.name[:-5] for p in d.iterdir() if p.name.endswith(".json"))


def validate(name: str, doc) -> None:
    try:
        jsonschema.validate(doc, load_schema(name))
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise SchemaError(f"{path or '<root>'}: {exc.message}") from None


# -- decoding helpers -------------------------------------------------------

def _cvec(x) -> np.ndarray:
    return jsonio.decode_complex(x, 1)


def _cmat(x) -> np.ndarray:
    return jsonio.decode_complex(x, 2)


def _arrangement(doc):
    if "arrangement" in doc:
        a = doc["arrangement"]
        return None, arrangement.from_normals(a["rank"], a["normals"])
    rs = rootsys.parse_name(doc["root_system"])
    return rs, arrangement.Arrangement.from_root_system(rs)


def _root_system(doc):
    return rootsys.parse_name(doc["root_system"])


def _point(obj) -> hypertoric.HypertoricPoint:
    return hypertoric.HypertoricPoint(_cvec(obj["a"]), _cvec(obj["b"]))


def _h2(obj) -> quiver.H2Point:
    return quiver.H2Point(_cvec(obj["alpha"]), _cvec(obj["beta"]))


def _h2_json(p) -> dict:
    return {"alpha": jsonio.encode_complex(p[0]), "beta": jsonio.encode_complex(p[1])}


def _rep(obj) -> quiver.QuiverRep:
    return quiver.QuiverRep(obj["n"], tuple(_cmat(a) for a in obj["alphas"]),
                            tuple(_cmat(b) for b in obj["betas"]))


def _rep_json(rep) -> dict:
    return {"n": rep.n, "alphas": [jsonio.encode_complex(a) for a in rep.alphas],
            "betas": [jsonio.encode_complex(b) for b in rep.betas]}


def _cotangent(obj, tol) -> contraction.CotangentPoint:
    return contraction.CotangentPoint(_cmat(obj["k"]), _cmat(obj["v"]), tol)


def _flats_json(fs) -> list:
    return [{"index_set": arrangement.index_list(f.index_set), "subspace_dim": f.subspace_dim} for f in fs]


def _weyl_by_word(rs, word):
    target = tuple(j - 1 for j in word)
    m = tuple(tuple(int(i == j) for j in range(rs.rank)) for i in range(rs.rank))
    for j in target:
        if not 0 <= j < rs.rank:
            raise PreconditionError("simple reflection index out of range", code="bad_word")
        m = rootsys._matmul(m, rootsys.simple_reflection_matrix(rs, j))
    for w in rootsys.weyl_elements(rs):
        if w.matrix == m:
            return w
    raise AssertionError("Weyl group not closed")  # pragma: no cover


# -- handlers ---------------------------------------------------------------

def rootsys_build(doc, cfg):
    return rootsys.root_system_to_json(_root_system(doc))


def rootsys_weyl(doc, cfg):
    rs = _root_system(doc)
    ws = rootsys.weyl_elements(rs)
    return {"root_system": rs.name, "order": len(ws), "elements": [rootsys.weyl_to_json(w) for w in ws]}


def rootsys_chamber(doc, cfg):
    rs = _root_system(doc)
    kw = {"tol": cfg.tol} if cfg.tol else {}
    return {"member": rootsys.chamber_membership(rs, doc["xi"], doc.get("closed", True), **kw)}


def arrangement_flats(doc, cfg):
    _, arr = _arrangement(doc)
    fs = arrangement.flats(arr)
    return {"count": len(fs), "flats": _flats_json(fs)}


def arrangement_broad(doc, cfg):
    _, arr = _arrangement(doc)
    bs = arrangement.broad_subsets(arr)
    return {"count": len(bs), "broad_subsets": [arrangement.index_list(b.index_set) for b in bs]}


def arrangement_stratum(doc, cfg):
    _, arr = _arrangement(doc)
    p = _point(doc["point"])
    kw = {"tol": cfg.tol} if cfg.tol else {}
    s = arrangement.stratum_of(arr, p.a, p.b, **kw)
    return {"flat": _flats_json([s.flat])[0], "zero_pairs": arrangement.index_list(s.zero_pairs),
            "in_mg": s.in_mg, "in_open_stratum": s.in_open_stratum, "codimension": s.codimension}


def arrangement_restrict(doc, cfg):
    _, arr = _arrangement(doc)
    idx = frozenset(i - 1 for i in doc["flat"])
    if any(i >= arr.size for i in idx):
        raise PreconditionError("index out of range", code="bad_index")
    res, loc = arrangement.restriction_localization(arr, idx)
    return {"restriction": arrangement.to_json(res), "localization": arrangement.to_json(loc)}


def hypertoric_kernel(doc, cfg):
    _, arr = _arrangement(doc)
    return {"basis": [list(v) for v in hypertoric.kernel_lattice(arr).basis]}


def hypertoric_residuals(doc, cfg):
    _, arr = _arrangement(doc)
    c, r = hypertoric.l_moment_residuals(arr, _point(doc["point"]))
    return {"complex": c, "real": r}


def hypertoric_tmoment(doc, cfg):
    _, arr = _arrangement(doc)
    kw = {"tol": cfg.tol} if cfg.tol else {}
    tm = hypertoric.t_moment(arr, _point(doc["point"]), **kw)
    return {"xi_complex": tm.xi_complex, "xi_real": tm.xi_real}


def hypertoric_weylact(doc, cfg):
    rs = _root_system(doc)
    arr = arrangement.Arrangement.from_root_system(rs)
    w = _weyl_by_word(rs, doc.get("word", []))
    q = hypertoric.weyl_act(rs, arr, w, _point(doc["point"]))
    return {"point": hypertoric.point_to_json(q), **rootsys.weyl_to_json(w)}


def hypertoric_project(doc, cfg):
    _, arr = _arrangement(doc)
    v = frozenset(i - 1 for i in doc["broad"])
    kw = {"tol": cfg.tol} if cfg.tol else {}
    return {"point": hypertoric.point_to_json(hypertoric.core_projection(arr, v, _point(doc["point"]), **kw))}


def hypertoric_components(doc, cfg):
    rs = _root_system(doc)
    arr = arrangement.Arrangement.from_root_system(rs)
    rec = hypertoric.universal_components(rs, arr, _point(doc["point"]))
    comps = [{"word": [j + 1 for j in w], "point": hypertoric.point_to_json(p)}
             for w, p in rec.components.items()]
    return {"mu_complex": rec.mu_complex, "mu_real": rec.mu_real, "components": comps}


def hypertoric_embed(doc, cfg):
    return _h2_json(hypertoric.sl2_embed_quiver(_point(doc["point"])))


def quiver_moment(doc, cfg):
    lam, res = quiver.complex_moment(_rep(doc["rep"]))
    return {"lambda": lam, "residuals": res}


def quiver_act(doc, cfg):
    rep = _rep(doc["rep"])
    return {"rep": _rep_json(quiver.act(rep, [_cmat(g) for g in doc["gauge"]]))}


def quiver_real(doc, cfg):
    return {"residuals": quiver.real_moment(_rep(doc["rep"]), doc.get("mode", "SU"), doc.get("level"))}


def quiver_solve(doc, cfg):
    rep = _rep(doc["rep"])
    sol = quiver.solve_real_moment(rep, doc.get("mode", "SU"), max_iter=doc.get("max_iter", 10_000),
                                   tol=cfg.tol or 1e-10, level=doc.get("level"))
    lam, res = quiver.complex_moment(sol.rep)
    return {"rep": _rep_json(sol.rep), "iterations": sol.iterations, "residual": sol.residual,
            "lambda": lam, "complex_residuals": res}


def quiver_nilpotent(doc, cfg):
    kw = {"tol": cfg.tol} if cfg.tol else {}
    nil = quiver.end_matrix_nilpotency(_rep(doc["rep"]), **kw)
    return {"X": nil.X, "nilpotent": nil.nilpotent}


def quiver_gamma(doc, cfg):
    return _h2_json(quiver.sl2_gamma(_h2(doc["point"])))


def _ctol(cfg) -> float:
    return cfg.tol or contraction.DEFAULT_TOL


def contract_flow(doc, cfg):
    return {"matrix": contraction.su2_flow_closed_form(_cmat(doc["B"]), _ctol(cfg))}


def contract_ghflow(doc, cfg):
    b = _cmat(doc["B"])
    traj = contraction.gh_flow_numeric(b, steps=doc.get("steps"), tol=_ctol(cfg), trajectory=True)
    closed = contraction.su2_flow_closed_form(b, _ctol(cfg))
    out = {"matrix": traj.matrices[-1], "closed_form": closed,
           "deviation": float(np.abs(traj.matrices[-1] - closed).max())}
    if doc.get("trajectory"):
        out["trajectory"] = {"t": traj.t, "det": np.linalg.det(traj.matrices)}
    if cfg.csv:
        with open(cfg.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t"] + [f"{part}{i}{j}" for i in (1, 2) for j in (1, 2) for part in ("re", "im")])
            for t, m in zip(traj.t, traj.matrices):
                w.writerow([repr(float(t))] + [repr(float(f(x))) for x in m.ravel()
                                               for f in (np.real, np.imag)])
    return out


def contract_implode(doc, cfg):
    return {"z": contraction.implode_su2(_cmat(doc["k"]), doc["lam"])}


def contract_phi(doc, cfg):
    m = contraction.phi(_cotangent(doc["point"], _ctol(cfg)))
    return {"matrix": m, "quadric_defect": contraction.quadric_defect(m)}


def contract_equiv(doc, cfg):
    x, y = _cotangent(doc["x"], _ctol(cfg)), _cotangent(doc["y"], _ctol(cfg))
    return {"equivalent": contraction.equivalent(x, y, _ctol(cfg))}


def contract_psi(doc, cfg):
    h = _cmat(doc["h"]) if "h" in doc else None
    r = contraction.psi_sl2(_cmat(doc["g"]), _cmat(doc["v"]), _cvec(doc["line"]), h, _ctol(cfg))
    return {"right": _h2_json(r.right), "left": _h2_json(r.left), "invariants": r.invariants, "h": r.h}


def contract_invariants(doc, cfg):
    m = contraction.complex_invariants(_h2(doc["p1"]), _h2(doc["p2"]), _ctol(cfg))
    return {"matrix": m, "max_minor": contraction.max_minor(m), "trace": complex(np.trace(m)),
            "square_norm": float(np.linalg.norm(m @ m))}


def contract_swann(doc, cfg):
    return {"matrix": contraction.swann_weyl(_cmat(doc["M"]))}


def contract_qcirc(doc, cfg):
    p = _h2(doc["point"])
    return {"member": contraction.q_circ_membership(p, _ctol(cfg)), "moment": contraction.torus_moment(p)}


def _mt_errors(fn):
    @functools.wraps(fn)
    def wrapped(doc, cfg):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", mtcat.DegenerateCompositionWarning)
                return fn(doc, cfg)
        except (KeyError, ValueError) as exc:
            if isinstance(exc, ImplosionError):
                raise
            raise PreconditionError(str(exc).strip("'\""), code="bad_morphism") from None
    return wrapped


@_mt_errors
def mt_compose(doc, cfg):
    return mtcat.to_json(mtcat.compose_chain(mtcat.parse_morphism(m) for m in doc["chain"]))


@_mt_errors
def mt_tensor(doc, cfg):
    return mtcat.to_json(mtcat.tensor(mtcat.parse_morphism(doc["left"]), mtcat.parse_morphism(doc["right"])))


@_mt_errors
def mt_catalog(doc, cfg):
    return {"morphisms": [mtcat.to_json(m) for m in mtcat.catalog(mtcat.parse_group(doc["group"]))]}


def nahm_integrate(doc, cfg):
    init = np.stack([_cmat(m) for m in doc["initial"]])
    data = nahm.integrate(init, doc["interval"], doc.get("steps", 200))
    return {"data": nahm.to_json(data), "residual": nahm.residual(data)}


def nahm_residual(doc, cfg):
    return {"residual": nahm.residual(nahm.from_json(doc["data"]))}


def nahm_transform(doc, cfg):
    data = nahm.from_json(doc["data"])
    out = nahm.symmetry_transform(data, doc["kind"], doc.get("c", 1.0), doc.get("grid"))
    res = nahm.residual(out) if out.grid.size >= 3 else None
    return {"data": nahm.to_json(out), "residual": res}


COMMANDS = {
    "rootsys": {"build": rootsys_build, "weyl": rootsys_weyl, "chamber": rootsys_chamber},
    "arrangement": {"flats": arrangement_flats, "broad": arrangement_broad,
                    "stratum": arrangement_stratum, "restrict": arrangement_restrict},
    "hypertoric": {"kernel": hypertoric_kernel, "residuals": hypertoric_residuals,
                   "tmoment": hypertoric_tmoment, "weylact": hypertoric_weylact,
                   "project": hypertoric_project, "components": hypertoric_components,
                   "embed": hypertoric_embed},
    "quiver": {"moment": quiver_moment, "act": quiver_act, "real": quiver_real, "solve": quiver_solve,
               "nilpotent": quiver_nilpotent, "gamma": quiver_gamma},
    "contract": {"flow": contract_flow, "ghflow": contract_ghflow, "implode": contract_implode,
                 "phi": contract_phi, "equiv": contract_equiv, "psi": contract_psi,
                 "invariants": contract_invariants, "swann": contract_swann, "qcirc": contract_qcirc},
    "mt": {"compose": mt_compose, "tensor": mt_tensor, "catalog": mt_catalog},
    "nahm": {"integrate": nahm_integrate, "residual": nahm_residual, "transform": nahm_transform},
}


# -- argument handling ------------------------------------------------------

def _positive(x: str) -> float:
    v = float(x)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def _seed(x: str) -> int:
    v = int(x)
    if v < 0:
        raise argparse.ArgumentTypeError("seed must be a nonnegative integer")
    return v


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="JSON input document")
    p.add_argument("--output", help="write the result here instead of stdout")
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help="random seed (default 0)")
    p.add_argument("--tol", type=_positive, help="override the default tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hkimplosion", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)
    for group, cmds in COMMANDS.items():
        gp = groups.add_parser(group)
        sub = gp.add_subparsers(dest="command", required=True)
        for name in cmds:
            schema = load_schema(f"{group}-{name}")
            p = sub.add_parser(name, help=schema["description"], description=schema["description"])
            _common(p)
            props = schema["properties"]
            if "root_system" in props:
                p.add_argument("--family", choices=sorted(rootsys.SUPPORTED))
                p.add_argument("--rank", type=int)
                p.add_argument("--arrangement", metavar="NAME", help="Weyl arrangement by name, e.g. A2")
            if "point" in props:
                p.add_argument("--point", metavar="FILE", help="JSON file holding the point")
            if group == "mt":
                p.add_argument("--chain", metavar="FILE", help="JSON chain of morphisms")
                p.add_argument("--group", dest="group_name", metavar="G", help="group such as SL(2)")
            if group == "contract" and name == "ghflow":
                p.add_argument("--csv", metavar="FILE", help="write the trajectory as CSV")
    vp = groups.add_parser("verify", help="run a seeded property suite")
    vp.add_argument("suite", help="suite name or 'all'; see 'verify list'")
    vp.add_argument("--samples", type=int, help="override the per-suite sample count")
    _common(vp)
    mp = groups.add_parser("man", help="print the manual generated from the schemas")
    mp.add_argument("--output")
    return parser


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg})") from None
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc.strerror}", code="io") from None


def assemble(args) -> tuple[str, dict]:
    name = f"{args.group}-{args.command}"
    schema = load_schema(name)
    doc = _read_json(args.input) if args.input else {}
    required = schema.get("required", [])
    if not isinstance(doc, dict):
        if len(required) != 1:
            raise SchemaError("<root>: expected a JSON object")
        doc = {required[0]: doc}
    if getattr(args, "family", None) or getattr(args, "rank", None):
        if not (args.family and args.rank):
            raise SchemaError("--family and --rank go together")
        doc["root_system"] = f"{args.family}{args.rank}"
    if getattr(args, "arrangement", None):
        doc["root_system"] = args.arrangement
    if getattr(args, "point", None):
        doc["point"] = _read_json(args.point)
    if getattr(args, "chain", None):
        chain = _read_json(args.chain)
        doc["chain"] = chain["chain"] if isinstance(chain, dict) and "chain" in chain else chain
    if getattr(args, "group_name", None):
        doc["group"] = args.group_name
    return name, doc


def render_manual() -> str:
    lines = ["HKIMPLOSION(1)", "", "NAME", "    hkimplosion - implosion and contraction toolkit", "",
             "SYNOPSIS", "    hkimplosion GROUP COMMAND [--input FILE] [--output FILE] [--seed N] [--tol X]",
             "    hkimplosion verify SUITE [--seed N] [--samples N]", "",
             "EXIT STATUS", "    0 ok, 1 property failure, 2 precondition, 3 schema, 4 numerical", "",
             "COMPLEX NUMBERS", "    [re, im] pairs; matrices are row-major lists of rows", "", "COMMANDS"]
    for name in schema_names():
        s = load_schema(name)
        lines.append(f"    {name.replace('-', ' ', 1)}")
        lines.append(f"        {s['description']}")
        req = set(s.get("required", []))
        for key in sorted(s["properties"]):
            prop = s["properties"][key]
            if "$ref" in prop:
                kind = prop["$ref"].rsplit("/", 1)[-1]
            else:
                kind = prop.get("type") or "one of " + ", ".join(map(str, prop.get("enum", [])))
            lines.append(f"          {key}{'' if key in req else ' (optional)'}: {kind}")
        if s.get("anyOf"):
            alts = " | ".join(", ".join(alt["required"]) for alt in s["anyOf"])
            lines.append(f"          needs one of: {alts}")
        if "x-output" in s:
            lines.append(f"        output: {s['x-output']}")
    lines += ["", "VERIFY SUITES", "    " + ", ".join(sorted(verify.SUITES)) + ", all", ""]
    return "\n".join(lines)


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _error(code: str, message: str, details=None) -> str:
    return jsonio.dumps({"error": {"code": code, "message": message, "details": details or {}}})


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = getattr(args, "output", None)
    if args.group == "man":
        _emit(render_manual(), out)
        return EXIT_OK
    try:
        if args.group == "verify":
            if args.suite == "list":
                _emit(jsonio.dumps({"suites": sorted(verify.SUITES)}), out)
                return EXIT_OK
            report = verify.run(args.suite, args.seed, args.samples)
            _emit(jsonio.dumps(report), out)
            return EXIT_OK if report["passed"] else EXIT_PROPERTY
        name, doc = assemble(args)
        validate(name, doc)
        result = COMMANDS[args.group][args.command](doc, args)
        _emit(jsonio.dumps(result), out)
        return EXIT_OK
    except SchemaError as exc:
        _emit(_error("schema", str(exc)), out)
        return EXIT_SCHEMA
    except ImplosionError as exc:
        _emit(_error(exc.code, exc.message, exc.details), out)
        return exc.exit_status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
