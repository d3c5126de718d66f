"""Command-line front end for the workbench.

Subcommands: enumerate (trees, configurations, graph elements), compose
(operadic composition), verify (the property suites), homology (exact
integral nerve homology), render (SVG drawings), and cache (managing the
result cache).

Reports are line-delimited; with ``--format records`` each line is a JSON
object carrying a schema version.  A fixed seed and fixed flags give
byte-identical output.  Exit codes: 0 on success, 1 when a verification or
other check fails, 2 on usage errors.  Every failure prints a one-line
``error: ...`` reason to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass

from . import cache as cachemod
from .cattop import (
    CategoryError,
    acyclicity_report,
    build_comma,
    build_hat_comma,
    comma_below,
    deletion_functor,
    fiber_adjoint_report,
    hat_comma_isomorphism,
    nerve_homology,
    poset_category,
)
from .circled import parse_config, random_config
from .kgraph import (
    KElt,
    block_perm,
    k_compose,
    k_enumerate,
    k_iota,
    k_leq,
    kelt_text,
    parse_kelt,
)
from .operad_h import (
    HOperation,
    complexity,
    compose,
    compose_terms,
    identity_op,
    operations,
    sigma_act,
)
from .render import clearance_violations, layout_config, render_layout
from .trees import LEAF, Node, ParseError, enumerate_trees
from .trees import leaves as tree_leaves
from .trees import parse_tree
from .trees import vertices as tree_vertices

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_USAGE = 2
SCHEMA = 1
CACHE_ENV = "CIRCLEOPS_CACHE"


class CheckFailure(Exception):
    """A verification or report-level check did not pass."""


@dataclass(frozen=True)
class RunConfig:
    """Global switches shared by all subcommands."""

    fmt: str = "text"
    seed: int = 0
    cache_dir: str | None = None
    r3: bool = True
    inclusive: bool = False
    max_dim: int = 3

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            fmt=args.format,
            seed=args.seed,
            cache_dir=args.cache_dir or os.environ.get(CACHE_ENV) or None,
            r3=not args.no_r3,
            inclusive=args.inclusive,
            max_dim=args.max_dim,
        )

    def flags(self) -> dict:
        return {
            "format": self.fmt,
            "r3": self.r3,
            "inclusive": self.inclusive,
            "max_dim": self.max_dim,
        }


def _render_records(cfg: RunConfig, records) -> str:
    """One line per record: plain text or JSON with a schema field."""
    if cfg.fmt == "records":
        lines = [
            json.dumps({"schema": SCHEMA, **fields}, sort_keys=True)
            for _, fields in records
        ]
    else:
        lines = [text for text, _ in records]
    return "\n".join(lines)


def _parse_tree_arg(text: str):
    try:
        return parse_tree(text)
    except ParseError as exc:
        raise ValueError(f"bad tree {text!r}: {exc}") from exc


def _parse_config_arg(text: str):
    try:
        return parse_config(text)
    except ParseError as exc:
        raise ValueError(f"bad configuration {text!r}: {exc}") from exc


def _parse_kelt_arg(text: str) -> KElt:
    try:
        return parse_kelt(text)
    except ValueError as exc:
        raise ValueError(f"bad graph element {text!r}: {exc}") from exc


# --- enumerate -----------------------------------------------------------------

def _enumerate_records(cfg: RunConfig, args):
    if args.what == "trees":
        out = []
        for t in enumerate_trees(args.max_vertices, args.max_leaves):
            fields = {
                "kind": "tree",
                "text": str(t),
                "vertices": tree_vertices(t),
                "leaves": tree_leaves(t),
            }
            out.append((str(t), fields))
        return out
    if args.what == "configs":
        tree = _parse_tree_arg(args.tree)
        from .circled import enumerate_configs

        return [
            (str(c), {"kind": "config", "tree": args.tree, "k": args.k,
                      "text": str(c)})
            for c in enumerate_configs(tree, args.k)
        ]
    cells = k_enumerate(args.m, args.k, inclusive=cfg.inclusive)
    return [
        (kelt_text(x), {"kind": "kelt", "m": args.m, "k": args.k,
                        "text": kelt_text(x)})
        for x in cells
    ]


def cmd_enumerate(cfg: RunConfig, args) -> int:
    key_fields = {
        "what": args.what,
        "max_vertices": getattr(args, "max_vertices", None),
        "max_leaves": getattr(args, "max_leaves", None),
        "tree": getattr(args, "tree", None),
        "k": getattr(args, "k", None),
        "m": getattr(args, "m", None),
        **cfg.flags(),
    }
    payload = _maybe_cached(
        cfg, cachemod.cache_key("enumerate", **key_fields),
        lambda: _render_records(cfg, _enumerate_records(cfg, args)),
    )
    print(payload)
    return EXIT_OK


# --- compose -------------------------------------------------------------------

def cmd_compose(cfg: RunConfig, args) -> int:
    if args.what == "config":
        outer = HOperation(_parse_config_arg(args.outer))
        inners = tuple(HOperation(_parse_config_arg(t)) for t in args.inner)
        if len(inners) != outer.k:
            raise ValueError(
                f"outer operation has {outer.k} white circles,"
                f" got {len(inners)} --inner arguments"
            )
        result = compose(outer, inners, r3=cfg.r3)
        text = str(result.term)
        fields = {"kind": "config", "text": text,
                  "target": str(result.target),
                  "sources": [str(s) for s in result.sources]}
    else:
        outer = _parse_kelt_arg(args.outer)
        inners = tuple(_parse_kelt_arg(t) for t in args.inner)
        if len(inners) != outer.k:
            raise ValueError(
                f"outer element has arity {outer.k},"
                f" got {len(inners)} --inner arguments"
            )
        result = k_compose(outer, inners)
        text = kelt_text(result)
        fields = {"kind": "kelt", "text": text}
    print(_render_records(cfg, [(text, fields)]))
    return EXIT_OK


# --- verify ---------------------------------------------------------------------

_CORPUS = ["|", "(|)", "(| |)", "((|))", "((|) |)", "((|) (|))"]


def _random_op(rng, t, k: int) -> HOperation:
    return HOperation(random_config(rng, t, k))


def _check(records, ok: bool, name: str, detail: str, **fields):
    status = "ok" if ok else "FAIL"
    records.append(
        (f"{status} {name} {detail}",
         {"kind": "check", "name": name, "ok": ok, "detail": detail, **fields})
    )
    if not ok:
        raise CheckFailure(f"{name}: {detail}")


def _suite_axioms(cfg: RunConfig, args, records):
    trees = [parse_tree(t) for t in _CORPUS]
    tiny = []
    for t in (LEAF, parse_tree("(|)")):
        for k in (1, 2):
            tiny.extend(operations(t, k))
    # Unit laws at the term level, so switching the reduction rule off shows
    # the genuine law failure instead of an invalid-term error.
    bad = 0
    for o in tiny:
        idents = tuple(identity_op(s).term for s in o.sources)
        if compose_terms(o.term, idents, r3=cfg.r3) != o.term:
            bad += 1
        elif compose_terms(identity_op(o.target).term, (o.term,), r3=cfg.r3) != o.term:
            bad += 1
    _check(records, bad == 0, "axioms/units-exhaustive",
           f"operations={len(tiny)} failures={bad}", r3=cfg.r3)

    rng = random.Random(cfg.seed)
    failures = 0
    for i in range(args.samples):
        o = _random_op(rng, trees[i % len(trees)], 1 + i % 3)
        ps = tuple(_random_op(rng, s, 1 + rng.randrange(2)) for s in o.sources)
        qss = tuple(
            tuple(_random_op(rng, s, 1 + rng.randrange(2)) for s in p.sources)
            for p in ps
        )
        flat = tuple(q for qs in qss for q in qs)
        lhs = compose(compose(o, ps, r3=cfg.r3), flat, r3=cfg.r3)
        rhs = compose(
            o, tuple(compose(p, qs, r3=cfg.r3) for p, qs in zip(ps, qss)),
            r3=cfg.r3,
        )
        if lhs != rhs:
            failures += 1
        if compose(o, tuple(identity_op(s) for s in o.sources), r3=cfg.r3) != o:
            failures += 1
        if compose(identity_op(o.target), (o,), r3=cfg.r3) != o:
            failures += 1
        sigma = list(range(1, o.k + 1))
        rng.shuffle(sigma)
        sigma = tuple(sigma)
        inv = tuple(sigma.index(v) + 1 for v in range(1, o.k + 1))
        gathered = tuple(_random_op(rng, s, 1 + rng.randrange(2))
                         for s in o.sources)
        bs = tuple(gathered[inv[v - 1] - 1] for v in range(1, o.k + 1))
        lhs = compose(sigma_act(sigma, o), bs, r3=cfg.r3)
        rho = block_perm(sigma, tuple(b.k for b in gathered))
        if lhs != sigma_act(rho, compose(o, gathered, r3=cfg.r3)):
            failures += 1
    _check(records, failures == 0, "axioms/randomized",
           f"samples={args.samples} failures={failures}", seed=cfg.seed)


def _suite_inequality(cfg: RunConfig, args, records):
    trees = [parse_tree(t) for t in _CORPUS]
    rng = random.Random(cfg.seed)
    failures = 0
    for i in range(args.samples):
        o = _random_op(rng, trees[i % len(trees)], 1 + i % 3)
        args_ops = tuple(
            _random_op(rng, s, 1 + rng.randrange(2)) for s in o.sources
        )
        lhs = complexity(compose(o, args_ops, r3=cfg.r3))
        rhs = k_compose(complexity(o), tuple(complexity(a) for a in args_ops))
        if not k_leq(lhs, rhs):
            failures += 1
    _check(records, failures == 0, "inequality",
           f"samples={args.samples} failures={failures}", seed=cfg.seed)


def _suite_lemma(cfg: RunConfig, args, records):
    tree = _parse_tree_arg(args.tree)
    for base in k_enumerate(2, args.k, inclusive=cfg.inclusive):
        cell = k_iota(base)
        report = acyclicity_report(comma_below(tree, cell), cfg.max_dim)
        _check(
            records, report.acyclic, "lemma",
            f"tree={args.tree} cell=[{kelt_text(cell)}]"
            f" objects={report.object_count} acyclic={report.acyclic}",
        )


def _suite_remark_linear(cfg: RunConfig, args, records):
    tree = LEAF
    for v in range(args.vertices + 1):
        for perm in ((1, 2), (2, 1)):
            cell = KElt(2, (0,), perm)
            size = len(comma_below(tree, cell).objects)
            _check(
                records, size == 0, "remark-linear",
                f"tree={tree} cell=[{kelt_text(cell)}] objects={size}",
            )
        tree = Node((tree,))


def _suite_grothendieck(cfg: RunConfig, args, records):
    tree = _parse_tree_arg(args.tree)
    iso = hat_comma_isomorphism(tree)
    objects_ok = len(set(iso.object_map.values())) == len(iso.object_map) and (
        len(iso.object_map) == len(iso.cod.objects)
    )
    arrows_ok = len(set(iso.arrow_map.values())) == len(iso.arrow_map) and (
        len(iso.arrow_map) == len(iso.cod.arrows)
    )
    _check(
        records, objects_ok and arrows_ok, "grothendieck",
        f"tree={args.tree} objects={len(iso.object_map)}"
        f" arrows={len(iso.arrow_map)}",
    )


def _suite_cowedge(cfg: RunConfig, args, records):
    trees = [parse_tree(t) for t in _CORPUS]
    rng = random.Random(cfg.seed)
    failures = 0
    for i in range(args.samples):
        o = _random_op(rng, trees[i % len(trees)], 1 + i % 3)
        fs = tuple(_random_op(rng, s, 1) for s in o.sources)
        xs = tuple(_random_op(rng, f.sources[0], 1) for f in fs)
        through_o = compose(compose(o, fs, r3=cfg.r3), xs, r3=cfg.r3)
        through_args = compose(
            o, tuple(compose(f, (x,), r3=cfg.r3) for f, x in zip(fs, xs)),
            r3=cfg.r3,
        )
        if through_o != through_args:
            failures += 1
    _check(records, failures == 0, "cowedge",
           f"samples={args.samples} failures={failures}", seed=cfg.seed)


def _suite_proof_structure(cfg: RunConfig, args, records):
    tree = _parse_tree_arg(args.tree)
    for base in k_enumerate(2, 2, inclusive=cfg.inclusive):
        cell = k_iota(base)
        F = deletion_functor(tree, cell)
        bad = []
        for target in F.cod.objects:
            if not fiber_adjoint_report(F, target).ok:
                bad.append(str(target))
        _check(
            records, not bad, "proof-structure",
            f"tree={args.tree} cell=[{kelt_text(cell)}]"
            f" targets={len(F.cod.objects)} failures={len(bad)}",
        )


_SUITES = {
    "axioms": _suite_axioms,
    "inequality": _suite_inequality,
    "lemma": _suite_lemma,
    "remark-linear": _suite_remark_linear,
    "grothendieck": _suite_grothendieck,
    "cowedge": _suite_cowedge,
    "proof-structure": _suite_proof_structure,
}


def cmd_verify(cfg: RunConfig, args) -> int:
    records = []
    try:
        _SUITES[args.suite](cfg, args, records)
    finally:
        if records:
            print(_render_records(cfg, records))
    return EXIT_OK


# --- homology -------------------------------------------------------------------

def _homology_records(cfg: RunConfig, args):
    if args.what == "kposet":
        C = poset_category(
            k_enumerate(args.m, args.k, inclusive=cfg.inclusive), k_leq
        )
        name = f"kposet m={args.m} k={args.k}"
    elif args.what == "comma":
        C = build_comma(_parse_tree_arg(args.tree), args.k)
        name = f"comma tree={args.tree} k={args.k}"
    elif args.what == "hat":
        C = build_hat_comma(_parse_tree_arg(args.tree), args.level, args.k)
        name = f"hat tree={args.tree} level={args.level} k={args.k}"
    else:
        C = comma_below(_parse_tree_arg(args.tree), _parse_kelt_arg(args.cell))
        name = f"below tree={args.tree} cell=[{args.cell}]"
    result = nerve_homology(C, cfg.max_dim)
    out = []
    for n in range(len(result.betti)):
        out.append(
            (f"H{n} = {result.group(n)}",
             {"kind": "homology", "of": name, "degree": n,
              "group": result.group(n), "rank": result.betti[n],
              "torsion": list(result.torsion[n])})
        )
    return out


def cmd_homology(cfg: RunConfig, args) -> int:
    key_fields = {
        "what": args.what,
        "m": getattr(args, "m", None),
        "k": getattr(args, "k", None),
        "tree": getattr(args, "tree", None),
        "level": getattr(args, "level", None),
        "cell": getattr(args, "cell", None),
        **cfg.flags(),
    }
    payload = _maybe_cached(
        cfg, cachemod.cache_key("homology", **key_fields),
        lambda: _render_records(cfg, _homology_records(cfg, args)),
    )
    print(payload)
    return EXIT_OK


# --- render and cache -------------------------------------------------------------

def cmd_render(cfg: RunConfig, args) -> int:
    config = _parse_config_arg(args.config)
    layout = layout_config(config)
    if args.check:
        violations = clearance_violations(layout)
        if violations:
            raise CheckFailure(
                f"render produced {len(violations)} curve intersections:"
                f" {violations[0]}"
            )
    svg = render_layout(layout)
    if args.out == "-":
        sys.stdout.write(svg)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(svg)
    return EXIT_OK


def cmd_cache(cfg: RunConfig, args) -> int:
    if cfg.cache_dir is None:
        raise ValueError(
            f"no cache directory: pass --cache-dir or set {CACHE_ENV}"
        )
    if args.action == "path":
        print(cfg.cache_dir)
        return EXIT_OK
    if args.action == "clear":
        removed = cachemod.clear(cfg.cache_dir)
        print(_render_records(cfg, [
            (f"cleared {removed} entries",
             {"kind": "cache", "action": "clear", "removed": removed})
        ]))
        return EXIT_OK
    ok, problems = cachemod.check(cfg.cache_dir)
    records = [
        (f"ok {ok} entries",
         {"kind": "cache", "action": "check", "ok": ok,
          "problems": len(problems)})
    ]
    records.extend(
        (f"FAIL {p}", {"kind": "cache", "action": "check", "problem": p})
        for p in problems
    )
    print(_render_records(cfg, records))
    if problems:
        raise CheckFailure(f"{len(problems)} corrupted cache entries")
    return EXIT_OK


def _maybe_cached(cfg: RunConfig, key: str, build) -> str:
    if cfg.cache_dir is None:
        return build()
    result = cachemod.fetch(cfg.cache_dir, key, build)
    if result.warning:
        print(f"warning: {result.warning}", file=sys.stderr)
    return result.payload


# --- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circleops",
        description="workbench for circled planar trees and their homology",
    )
    parser.add_argument("--format", choices=("text", "records"), default="text")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--cache-dir", default=None,
                        help=f"result cache directory (or ${CACHE_ENV})")
    parser.add_argument("--no-r3", action="store_true",
                        help="drop the black-circles-inside-white rule")
    parser.add_argument("--inclusive", action="store_true",
                        help="let stage-m graph labels run up to m inclusive")
    parser.add_argument("--max-dim", type=int, default=3)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list trees, configurations, or cells")
    ps = p.add_subparsers(dest="what", required=True)
    q = ps.add_parser("trees")
    q.add_argument("--max-vertices", type=int, required=True)
    q.add_argument("--max-leaves", type=int, required=True)
    q = ps.add_parser("configs")
    q.add_argument("--tree", required=True)
    q.add_argument("--k", type=int, required=True)
    q = ps.add_parser("kgraph")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("compose", help="operadic composition")
    ps = p.add_subparsers(dest="what", required=True)
    q = ps.add_parser("config")
    q.add_argument("--outer", required=True)
    q.add_argument("--inner", action="append", default=[], required=True)
    q = ps.add_parser("kgraph")
    q.add_argument("--outer", required=True)
    q.add_argument("--inner", action="append", default=[], required=True)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("verify", help="run a property suite")
    ps = p.add_subparsers(dest="suite", required=True)
    q = ps.add_parser("axioms")
    q.add_argument("--samples", type=int, default=200)
    q = ps.add_parser("inequality")
    q.add_argument("--samples", type=int, default=200)
    q = ps.add_parser("lemma")
    q.add_argument("--tree", required=True)
    q.add_argument("--k", type=int, default=2)
    q = ps.add_parser("remark-linear")
    q.add_argument("--vertices", type=int, default=3)
    q = ps.add_parser("grothendieck")
    q.add_argument("--tree", required=True)
    q = ps.add_parser("cowedge")
    q.add_argument("--samples", type=int, default=100)
    q = ps.add_parser("proof-structure")
    q.add_argument("--tree", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("homology", help="integral homology of a nerve")
    ps = p.add_subparsers(dest="what", required=True)
    q = ps.add_parser("kposet")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    q = ps.add_parser("comma")
    q.add_argument("--tree", required=True)
    q.add_argument("--k", type=int, required=True)
    q = ps.add_parser("hat")
    q.add_argument("--tree", required=True)
    q.add_argument("--level", type=int, default=2)
    q.add_argument("--k", type=int, default=2)
    q = ps.add_parser("below")
    q.add_argument("--tree", required=True)
    q.add_argument("--cell", required=True)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("render", help="draw a configuration as SVG")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--check", action="store_true",
                   help="fail if any curves intersect")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("cache", help="manage the result cache")
    p.add_argument("action", choices=("path", "check", "clear"))
    p.set_defaults(func=cmd_cache)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = RunConfig.from_args(args)
    try:
        return args.func(cfg, args)
    except CheckFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except CategoryError as exc:
        print(f"error: loop-free or category check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (ValueError, cachemod.CacheError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
