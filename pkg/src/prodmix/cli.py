"""Command line interface.

One subcommand per operation.  Every invocation prints (or writes) one JSON
report embedding the tool version and the full configuration, and exits
with 0 (pass / certified), 1 (a checked verdict failed or was refuted) or
2 (error).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import certify as cert
from . import chartable as ct
from . import mixing as mx
from .errors import ProdmixError
from .groups import DEFAULT_MAX_ORDER, is_simple
from .io import (char_table_to_dict, dump_char_table, dump_report, load_group, parse_certify_request,
                 parse_char_table_file, parse_set_spec)

COMMANDS = ("classes", "chartable", "zeta", "mindeg", "count", "prob", "frobenius", "gowers", "trick",
            "identities", "ratio-scan", "split", "bounds", "certify", "propagate", "report")


@dataclass
class RunConfig:
    command: str
    group: str | None = None
    table: str | None = None
    output: str = "-"
    params: dict = field(default_factory=dict)
    tol: float | None = None
    max_order: int = DEFAULT_MAX_ORDER

    def echo(self) -> dict:
        return {"command": self.command, "group": self.group, "table": self.table,
                "tol": self.tol, "max_order": self.max_order, **self.params}


class _Context:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self._G = self._T = None

    @property
    def G(self):
        if self._G is None:
            if self.cfg.group is None:
                raise ValueError("--group is required")
            self._G = load_group(self.cfg.group, self.cfg.max_order)
        return self._G

    @property
    def T(self):
        if self._T is None:
            if self.cfg.table:
                self._T = parse_char_table_file(self.cfg.table, self.G, self.cfg.tol)
            else:
                self._T = ct.dixon_char_table(self.G).validate(self.cfg.tol)
        return self._T

    def set(self, name):
        return parse_set_spec(self.cfg.params[name], self.G)


def _classes(ctx, p):
    G = ctx.G
    orders = G.element_orders()
    return 0, {
        "order": G.order,
        "num_classes": G.num_classes,
        "exponent": G.exponent(),
        "is_simple": is_simple(G),
        "classes": [{"index": K.index, "size": K.size, "representative": K.representative,
                     "element_order": int(orders[K.representative])} for K in G.classes],
    }


def _chartable(ctx, p):
    T = ctx.T
    doc = char_table_to_dict(T)
    doc["degrees"] = [int(d) for d in T.degrees]
    doc["residuals"] = T.residuals()
    return 0, doc


def _zeta(ctx, p):
    return 0, {"x": p["x"], "zeta": ct.witten_zeta(ctx.T, p["x"])}


def _mindeg(ctx, p):
    return 0, {"min_nontrivial_degree": ct.min_nontrivial_degree(ctx.T)}


def _count(ctx, p):
    G = ctx.G
    A, B, C = ctx.set("A"), ctx.set("B"), ctx.set("C")
    doc = {"sizes": [A.size, B.size, C.size], "count": mx.count_pairs(A, B, C, G)}
    if p.get("g") is not None:
        doc["g"] = p["g"]
        doc["triples"] = mx.count_triples_g(A, B, C, p["g"], G)
        doc["translated_count"] = mx.translated_count(A, B, C, p["g"], G)
        return int(doc["triples"] != doc["translated_count"]), doc
    return 0, doc


def _prob(ctx, p):
    A, B, C = ctx.set("A"), ctx.set("B"), ctx.set("C")
    pr = mx.prob(A, B, C, ctx.G)
    return 0, {"sizes": [A.size, B.size, C.size], "prob": pr, "prob_float": float(pr)}


def _frobenius(ctx, p):
    G, T = ctx.G, ctx.T
    m = G.num_classes
    if p.get("all"):
        triples = [(i, j, l) for i in range(m) for j in range(m) for l in range(m)]
    else:
        triples = [(p["i"], p["j"], p["l"])]
    rows, bad, drift = [], 0, 0.0
    for i, j, l in triples:
        f = mx.frobenius_count(i, j, l, G, T)
        b = mx.count_pairs(G.class_set(i), G.class_set(j), G.class_set(l), G)
        drift = max(drift, mx.frobenius_drift(i, j, l, T))
        bad += f != b
        row = {"classes": [i, j, l], "frobenius": f, "enumerated": b}
        if not p.get("all"):
            eb = mx.frobenius_error_bound(i, j, l, T, p["exponent"])
            row.update(deviation=eb.deviation, bound=eb.bound, bound_holds=eb.holds)
        rows.append(row)
    return int(bad > 0), {"triples": rows, "mismatches": bad, "max_drift": drift}


def _gowers(ctx, p):
    r = mx.gowers_check(ctx.set("A"), ctx.set("B"), ctx.set("C"), ctx.G, ctx.T, p.get("eta"))
    return int(not r.passed), r.to_dict()


def _trick(ctx, p):
    r = mx.gowers_trick_check(ctx.set("A"), ctx.set("B"), ctx.set("C"), p["g"], ctx.G, ctx.T, p.get("eta"))
    return int(not r.passed), r.to_dict()


def _identities(ctx, p):
    G = ctx.G
    rng = np.random.default_rng(p["seed"])
    failures = []
    for t in range(p["trials"]):
        A, B, C = (mx.random_subset(G, p["density"], rng, nonempty=False) for _ in range(3))
        v = mx.verify_triple_identities(A, B, C, G)
        X = mx.random_subset(G, p["density"], rng)
        Y = mx.random_normal_subset(G, p["density"], rng) if t % 2 else mx.random_subset(G, p["density"], rng)
        Z = mx.random_normal_subset(G, p["density"], rng)
        g = int(rng.integers(G.order))
        w = mx.verify_cyclic_identities(X, Y, Z, g, G)
        if not v.ok or not w.ok:
            failures.append({"trial": t, "triple": v.counts, "cyclic": w.counts})
    return int(bool(failures)), {"trials": p["trials"], "seed": p["seed"], "failures": failures}


def _ratio_scan(ctx, p):
    rows = ct.character_ratio_scan(ctx.G, ctx.T)
    target = p.get("target")
    out = []
    for r in rows:
        d = {"class": r.class_index, "size": r.class_size,
             "alpha": "vanishing" if r.vanishing else r.alpha,
             "argmax_character": r.argmax_character, "centralizer_exponent": r.centralizer_exponent}
        if target is not None:
            d["within_target"] = r.alpha <= target
        out.append(d)
    return 0, {"rows": out, "target": target}


def _split(ctx, p):
    X = ctx.set("X")
    X1, X2 = cert.split_by_class_size(X, p["threshold"], ctx.G)
    return 0, {"threshold": p["threshold"], "X1": cert.set_spec(X1) if X1.size else "empty", "X1_size": X1.size,
               "X2": cert.set_spec(X2) if X2.size else "empty", "X2_size": X2.size,
               "large_class": cert.contains_large_class(X, p["threshold"], ctx.G)}


def _bounds(ctx, p):
    r = cert.normal_mix_bounds(ctx.set("A"), ctx.set("B"), ctx.set("C"), p.get("alpha"), p["eta"], ctx.G,
                               threshold=p.get("threshold"), c_over_n=p.get("c_over_n"))
    # only the unconditional inequalities decide the exit status
    return int(not (r.verdicts["chain"] and r.verdicts["X2"])), r.to_dict()


def _certify(ctx, p):
    c = cert.certify_mixer(ctx.G, p["epsilon"], p["eta"], p["i"], p["mode"], p["budget"], p["seed"])
    return int(c.outcome == "refuted"), c.to_dict()


def _propagate(ctx, p):
    v = cert.verify_propagation(ctx.G, p["epsilon"], p["eta"], p["budget"], p["seed"])
    return int(not v.ok), v.to_dict()


def _report(ctx, p):
    return 0, cert.end_to_end_report(ctx.G, ctx.T, p["delta"], p["eta"])


HANDLERS = {
    "classes": _classes, "chartable": _chartable, "zeta": _zeta, "mindeg": _mindeg, "count": _count,
    "prob": _prob, "frobenius": _frobenius, "gowers": _gowers, "trick": _trick, "identities": _identities,
    "ratio-scan": _ratio_scan, "split": _split, "bounds": _bounds, "certify": _certify,
    "propagate": _propagate, "report": _report,
}


def run_command(cfg: RunConfig) -> tuple[int, dict]:
    """Run one command; never raises for toolkit or input errors."""
    doc = {"tool": "prodmix", "version": __version__, "config": cfg.echo()}
    try:
        if cfg.command == "certify" and cfg.params.get("request"):
            req = parse_certify_request(cfg.params["request"])
            cfg.group = req.pop("group")
            cfg.params.update(req)
            doc["config"] = cfg.echo()
        status, result = HANDLERS[cfg.command](_Context(cfg), cfg.params)
    except ProdmixError as exc:
        doc["error"] = {"code": exc.code, "message": str(exc)}
        return 2, doc
    except (ValueError, KeyError, OSError, IndexError) as exc:
        doc["error"] = {"code": type(exc).__name__, "message": str(exc)}
        return 2, doc
    doc["result"] = result
    doc["status"] = status
    return status, doc


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="prodmix", description="Exact product-mixing checks on small finite groups.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--group", help="group file, or a bundled name such as a5 or psl27")
        sp.add_argument("--table", help="character table file (default: compute with Dixon)")
        sp.add_argument("--output", default="-", help="output path, '-' for stdout")
        sp.add_argument("--tol", type=float, help="character table tolerance")
        sp.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
        return sp

    def sets(sp, names="ABC"):
        for n in names:
            sp.add_argument(f"--{n}", required=True, help="set spec: class:i, union:[..], random:{..}, all, [..]")

    cmd("classes", "conjugacy classes")
    sp = cmd("chartable", "character table (write with --output to get an importable file)")
    sp.add_argument("--export", action="store_true", help="write only the table file format")
    sp = cmd("zeta", "Witten zeta function")
    sp.add_argument("--x", type=float, required=True)
    cmd("mindeg", "minimal nontrivial character degree")
    sp = cmd("count", "N(A,B,C), and triples abc = g with --g")
    sets(sp)
    sp.add_argument("--g", type=int)
    sp = cmd("prob", "Prob(A,B,C)")
    sets(sp)
    sp = cmd("frobenius", "class-triple counts from the character formula")
    for n in "ijl":
        sp.add_argument(f"--{n}", type=int, default=0)
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--exponent", type=float, default=0.7)
    for name in ("gowers", "trick"):
        sp = cmd(name, "Gowers window check" if name == "gowers" else "Gowers trick window check")
        sets(sp)
        sp.add_argument("--eta", type=float)
        if name == "trick":
            sp.add_argument("--g", type=int, default=0)
    sp = cmd("identities", "permuted-set identities on random triples")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--density", type=float, default=0.5)
    sp = cmd("ratio-scan", "character ratio exponents per class")
    sp.add_argument("--target", type=float, help="flag classes with alpha <= target (e.g. 0.1)")
    sp = cmd("split", "split a normal set by class size")
    sets(sp, "X")
    sp.add_argument("--threshold", type=float, required=True)
    sp = cmd("bounds", "large-class decomposition inequalities")
    sets(sp)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--eta", type=float, required=True)
    sp.add_argument("--threshold", type=float)
    sp.add_argument("--c-over-n", type=float, dest="c_over_n")
    sp = cmd("certify", "(eps, eta, i)-mixer certification")
    sp.add_argument("--request", help="certification request file")
    sp.add_argument("--epsilon", type=float)
    sp.add_argument("--eta", type=float)
    sp.add_argument("--i", type=int, default=3)
    sp.add_argument("--mode", default="exhaustive-normal", choices=cert.MODES)
    sp.add_argument("--budget", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp = cmd("propagate", "epsilon-propagation check")
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--eta", type=float, required=True)
    sp.add_argument("--budget", type=int, default=2000)
    sp.add_argument("--seed", type=int, default=0)
    sp = cmd("report", "end-to-end inequality chain")
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--eta", type=float, required=True)
    return ap


_COMMON = {"command", "group", "table", "output", "tol", "max_order"}


def config_from_args(argv=None) -> RunConfig:
    ns = _parser().parse_args(argv)
    params = {k: v for k, v in vars(ns).items() if k not in _COMMON}
    if ns.command == "certify" and not params.get("request"):
        if params.get("epsilon") is None or params.get("eta") is None:
            _parser().error("certify needs --epsilon and --eta, or --request")
    return RunConfig(ns.command, ns.group, ns.table, ns.output, params, ns.tol, ns.max_order)


def main(argv=None) -> int:
    cfg = config_from_args(argv)
    status, doc = run_command(cfg)
    if cfg.command == "chartable" and cfg.params.get("export") and status == 0:
        text = dump_char_table(_Context(cfg).T)
    else:
        text = dump_report(doc)
    if cfg.output == "-":
        sys.stdout.write(text)
    else:
        Path(cfg.output).write_text(text, encoding="utf-8")
    return status


if __name__ == "__main__":
    sys.exit(main())
