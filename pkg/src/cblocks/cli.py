"""Command-line entry point: exact computations, JSON reports, verification runs.

Subcommands: blocks, verify-theorem, logbasis, svmap, residue, degree-lemma,
root-info.  Configuration is a JSON file with exact rationals (ints or "p/q"
strings); reports are deterministic JSON (timing only with --timing).
Exit code 0 iff every requested verification passes.
"""

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import linalg
from .admissible import MasterData, admissible_subspace
from .blocks import BlockInstance, conformal_blocks
from .degreelab import (DegreeProblem, MONOMIAL_CEILING, CeilingExceeded,
                        min_degree_certify, run_lemma_suite)
from .logforms import (MarkedPartition, enumerate_marked_partitions,
                       omega_basis_form, symmetrized_basis, sv_map)
from .ratfun import iterated_residue
from .repspace import TensorFunctional, weight_zero_basis
from .roots import check_pairwise_sums, parse_algebra, root_patterns


def _rat(x):
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def _rat_str(x):
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _functional_entry(func, basis):
    return [_rat_str(c) for c in func.vector(basis)]


def _form_entry(form):
    return {
        "variables": list(form.variables),
        "numerator": [
            {"exponents": list(e), "coeff": _rat_str(c)}
            for e, c in sorted(form.numerator.terms.items())
        ],
        "denominator": [
            {"factor": list(f), "multiplicity": m}
            for f, m in sorted(form.denominator.items())
        ],
    }


def load_config(path):
    with open(path) as fh:
        return json.load(fh)


def instance_from_config(cfg):
    rs = parse_algebra(cfg["algebra"])
    weights = [tuple(w) for w in cfg["weights"]]
    points = [_rat(p) for p in cfg["points"]]
    return rs, BlockInstance(rs, int(cfg["level"]), weights, points)


def cmd_blocks(cfg, opts):
    rs, inst = instance_from_config(cfg)
    beta = list(cfg["coloring"])
    space = conformal_blocks(inst, beta)
    return {
        "command": "blocks",
        "algebra": cfg["algebra"],
        "level": inst.k,
        "dim": space.dim,
        "basis_monomials": [list(map(list, m)) for m in space.monomials],
        "basis": [_functional_entry(f, space.monomials) for f in space.basis],
        "pass": True,
    }


def cmd_verify_theorem(cfg, opts):
    rs, inst = instance_from_config(cfg)
    beta = list(cfg["coloring"])
    space = conformal_blocks(inst, beta)
    md = MasterData(inst, beta)
    adm, stats = admissible_subspace(
        md, stratum_cap=opts.stratum_cap, with_stats=True)
    basis = space.monomials
    if basis:
        rows_b = [f.vector(basis) for f in space.basis]
        rows_a = [f.vector(basis) for f in adm]
        equal = linalg.spans_equal(rows_b, rows_a, len(basis))
    else:
        equal = len(adm) == 0
    ok = equal and space.dim == len(adm)
    return {
        "command": "verify-theorem",
        "algebra": cfg["algebra"],
        "level": inst.k,
        "dim_blocks": space.dim,
        "dim_admissible": len(adm),
        "subspaces_equal": equal,
        "constant_C": md.C,
        "kappa": _rat_str(md.kappa),
        "strata": [
            {
                "kind": s["stratum"].kind,
                "subset": list(s["stratum"].subset),
                "point": s["stratum"].point,
                "cutoff": s["cutoff"],
                "rows": s["rows"],
            }
            for s in stats
        ],
        "pass": ok,
    }


def cmd_logbasis(cfg, opts):
    M = int(cfg["M"])
    N = int(cfg["N"])
    mps = enumerate_marked_partitions(M, N)
    out = {
        "command": "logbasis",
        "M": M,
        "N": N,
        "count": len(mps),
        "partitions": [[list(c) for c in mp.pis] for mp in mps],
        "pass": True,
    }
    if "coloring" in cfg and "points" in cfg:
        beta = list(cfg["coloring"])
        points = [_rat(p) for p in cfg["points"]]
        sym = symmetrized_basis(beta, N, points)
        out["classes"] = [
            {"class": [list(w) for w in cls], "form": _form_entry(theta)}
            for cls, theta in sym
        ]
    return out


def cmd_svmap(cfg, opts):
    rs, inst = instance_from_config(cfg)
    beta = list(cfg["coloring"])
    basis = weight_zero_basis(rs, inst.weights, beta)
    coeffs = [_rat(c) for c in cfg["functional"]]
    if len(coeffs) != len(basis):
        raise ValueError(
            f"functional needs {len(basis)} coefficients, got {len(coeffs)}")
    psi = TensorFunctional(dict(zip(basis, coeffs)), inst.weights, beta)
    form = sv_map(psi, beta, inst.points)
    return {
        "command": "svmap",
        "basis_monomials": [list(map(list, m)) for m in basis],
        "form": _form_entry(form),
        "pass": True,
    }


def cmd_residue(cfg, opts):
    points = [_rat(p) for p in cfg["points"]]
    mp = MarkedPartition([tuple(c) for c in cfg["marked_partition"]])
    form = omega_basis_form(mp, points)
    res = iterated_residue(form, list(cfg["indices"]))
    return {
        "command": "residue",
        "indices": list(cfg["indices"]),
        "form": _form_entry(form),
        "residue": _form_entry(res),
        "pass": True,
    }


def cmd_degree_lemma(cfg, opts):
    if opts.suite:
        report = run_lemma_suite(ceiling=opts.monomial_ceiling)
        ok = all(
            res.get("verdict") in ("EMPTY", "DECOMPOSED")
            for res in report.values()
        )
        return {"command": "degree-lemma", "suite": report, "pass": ok}
    problem = DegreeProblem(
        cfg["variables"],
        [tuple(b) for b in cfg.get("symmetry", [])],
        [tuple(d) for d in cfg["vanishing"]],
        int(cfg["bound"]),
    )
    try:
        result = min_degree_certify(problem, ceiling=opts.monomial_ceiling)
    except CeilingExceeded as exc:
        return {"command": "degree-lemma", "error": str(exc), "pass": False}
    return {
        "command": "degree-lemma",
        "result": result,
        "pass": result["verdict"] == "EMPTY",
    }


def cmd_root_info(cfg, opts):
    rs = parse_algebra(cfg["algebra"])
    bounds = check_pairwise_sums(rs)
    return {
        "command": "root-info",
        "algebra": cfg["algebra"],
        "rank": rs.rank,
        "gram": [[_rat_str(x) for x in row] for row in rs.gram],
        "positive_roots": [list(r) for r in rs.positive_roots],
        "highest_root": list(rs.highest_root),
        "dual_coxeter": rs.dual_coxeter,
        "patterns_from_alpha1": [p["steps"] for p in root_patterns(rs, 1)],
        "pairwise_sum_ok": bounds["all_ok"],
        "pairwise_sum_min_margin": _rat_str(bounds["min_margin"]),
        "pass": bounds["all_ok"],
    }


COMMANDS = {
    "blocks": (cmd_blocks, True),
    "verify-theorem": (cmd_verify_theorem, True),
    "logbasis": (cmd_logbasis, True),
    "svmap": (cmd_svmap, True),
    "residue": (cmd_residue, True),
    "degree-lemma": (cmd_degree_lemma, False),
    "root-info": (cmd_root_info, True),
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cblocks",
        description="Exact conformal-block and log-form computations in genus 0",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, needs_config) in COMMANDS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON configuration file",
                       required=False)
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--stratum-cap", type=int,
                       default=int(os.environ.get("CBLOCKS_STRATUM_CAP", 6)))
        p.add_argument("--monomial-ceiling", type=int,
                       default=int(os.environ.get("CBLOCKS_MONOMIAL_CEILING",
                                                  MONOMIAL_CEILING)))
        p.add_argument("--timing", action="store_true",
                       help="include wall time in the report")
        if name == "degree-lemma":
            p.add_argument("--suite", action="store_true",
                           help="run the built-in lemma catalog")
    return parser


def main(argv=None):
    opts = build_parser().parse_args(argv)
    func, needs_config = COMMANDS[opts.command]
    if opts.command == "degree-lemma" and getattr(opts, "suite", False):
        cfg = {}
    elif opts.config:
        cfg = load_config(opts.config)
    elif needs_config:
        print("error: --config is required", file=sys.stderr)
        return 2
    else:
        print("error: need --config or --suite", file=sys.stderr)
        return 2
    start = time.monotonic()
    try:
        report = func(cfg, opts)
    except (ValueError, KeyError) as exc:
        report = {"command": opts.command, "error": str(exc), "pass": False}
    if opts.timing:
        report["seconds"] = round(time.monotonic() - start, 3)
    text = json.dumps(report, indent=2, sort_keys=True)
    if opts.out:
        with open(opts.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report.get("pass") else 1


if __name__ == "__main__":
    sys.exit(main())
