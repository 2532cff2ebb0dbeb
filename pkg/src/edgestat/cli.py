"""Command-line interface: ``edgestat {dist,moments,check,search,construct,verify}``.

Exit codes: 0 ok, 1 a check failed, 2 usage or precondition error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from math import comb
from pathlib import Path

from .distribution import DEFAULT_BUDGET, exact_distribution, mc_distribution
from .errors import EdgeStatError
from .graph import Graph, construct, parse_construction, parse_graph6
from .moments import (
    anti_concentration_check,
    brun_check,
    closed_form_moments,
    distribution_moments,
    shift_inequality_check,
)
from .search import (
    RecordsStore,
    SearchConfig,
    brute_force_extremal,
    construction_bound,
    local_search,
)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    subcommand: str
    g6: str | None = None
    file: str | None = None
    construct: str | None = None
    n: int | None = None
    k: int | None = None
    l: int | None = None
    r: int | None = None
    t: int | None = None
    samples: int = 100_000
    seed: int | None = None
    budget: int | None = None
    mc: bool = False
    out: str | None = None
    format: str = "json"

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> RunConfig:
        fields = cls.__dataclass_fields__
        return cls(**{k: v for k, v in vars(ns).items() if k in fields})

    def graph(self) -> Graph:
        sources = [s for s in (self.g6, self.file, self.construct) if s is not None]
        if len(sources) != 1:
            raise EdgeStatError("give exactly one graph source: --g6, --file or --construct")
        if self.g6 is not None:
            return parse_graph6(self.g6)
        if self.file is not None:
            lines = [ln.strip() for ln in Path(self.file).read_text().splitlines() if ln.strip()]
            if len(lines) != 1:
                raise EdgeStatError(f"{self.file}: expected one graph6 line, found {len(lines)}")
            return parse_graph6(lines[0])
        kind, params = parse_construction(self.construct)
        if kind == "gnp" and self.seed is None:
            raise EdgeStatError("gnp construction is randomized; pass --seed")
        return construct(kind, params, seed=self.seed)

    def need(self, *names: str) -> None:
        missing = [f"-{n}" for n in names if getattr(self, n) is None]
        if missing:
            raise EdgeStatError(f"{self.subcommand} needs {' '.join(missing)}")


# output ------------------------------------------------------------------------

def _emit(cfg: RunConfig, payload, rows: list[list] | None = None) -> None:
    if cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in rows or []:
            writer.writerow(row)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _check_rows(reports) -> list[list]:
    rows = [["quantity", "lhs", "rhs", "holds", "slack"]]
    for rep in reports:
        j = rep.to_json()
        rows.append([j["quantity"], j["lhs"], j["rhs"], j["holds"], j["slack"]])
    return rows


def _record_rows(recs) -> list[list]:
    keys = ["n", "k", "l", "density", "density_real", "graph", "method", "iterations", "seed",
            "exact"]
    return [keys] + [[r.to_json()[k] for k in keys] for r in recs]


# subcommands -------------------------------------------------------------------

def cmd_dist(cfg: RunConfig) -> int:
    cfg.need("k")
    g = cfg.graph()
    budget = cfg.budget or DEFAULT_BUDGET
    if cfg.k < 1 or cfg.k > g.n:
        raise EdgeStatError(f"need 1 <= k <= n, got k={cfg.k}, n={g.n}")
    use_mc = cfg.mc or comb(g.n, cfg.k) > budget
    if use_mc:
        if cfg.seed is None:
            if not cfg.mc:
                exact_distribution(g, cfg.k, budget)  # raises with the subset count
            raise EdgeStatError("Monte Carlo needs --seed")
        est = mc_distribution(g, cfg.k, cfg.samples, cfg.seed)
        payload = {"method": "monte_carlo", **est.to_json()}
        rows = [["l", "hits", "probability"]] + [list(r) for r in est.csv_rows()]
    else:
        d = exact_distribution(g, cfg.k, budget)
        payload = {"method": "exact", **d.to_json()}
        rows = [["l", "count", "probability"]] + [list(r) for r in d.csv_rows()]
    _emit(cfg, payload, rows)
    return EXIT_OK


def cmd_moments(cfg: RunConfig) -> int:
    cfg.need("k")
    g = cfg.graph()
    budget = cfg.budget or DEFAULT_BUDGET
    closed = closed_form_moments(g, cfg.k)
    payload = {"n": g.n, "k": cfg.k, "closed_form": closed.to_json(), "distribution": None}
    dist = None
    if comb(g.n, cfg.k) <= budget:
        dist = distribution_moments(exact_distribution(g, cfg.k, budget))
        payload["distribution"] = dist.to_json()
        payload["agree"] = dist == closed
    rows = [["quantity", "closed_form", "distribution"]]
    cj = closed.to_json()
    dj = dist.to_json() if dist else None
    for name in ("mu", "central2", "central3", "central4"):
        rows.append([name, cj[name], dj[name] if dj else ""])
    for r in sorted(cj["binom_moments"]):
        rows.append([f"E[C(X,{r})]", cj["binom_moments"][r], dj["binom_moments"][r] if dj else ""])
    _emit(cfg, payload, rows)
    return EXIT_OK


def cmd_check(cfg: RunConfig, ns: argparse.Namespace) -> int:
    cfg.need("k")
    g = cfg.graph()
    budget = cfg.budget or DEFAULT_BUDGET
    run_all = not (ns.anti or ns.shift or ns.brun)
    payload: dict = {"n": g.n, "k": cfg.k}
    reports = []
    ok = True
    if ns.anti or run_all:
        d = exact_distribution(g, cfg.k, budget)
        try:
            rep = anti_concentration_check(d, cfg.l)
        except EdgeStatError as exc:
            if ns.anti:
                raise
            payload["anti_concentration"] = {"skipped": str(exc)}
        else:
            payload["anti_concentration"] = rep.to_json()
            reports += rep.reports()
            ok &= rep.holds and rep.ceiling_holds is not False
    if ns.shift or (run_all and cfg.t is not None):
        cfg.need("t")
        rep = shift_inequality_check(g, cfg.k, cfg.t, budget)
        payload["shift"] = rep.to_json()
        reports += rep.reports()
        ok &= rep.holds
    if ns.brun or (run_all and cfg.r is not None):
        cfg.need("r")
        payload["brun"] = brun_check(g, cfg.k, cfg.r).to_json()
    payload["holds"] = ok
    _emit(cfg, payload, _check_rows(reports))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_search(cfg: RunConfig, ns: argparse.Namespace) -> int:
    cfg.need("n", "k", "l")
    if ns.brute:
        rec = brute_force_extremal(cfg.n, cfg.k, cfg.l)
    else:
        if cfg.seed is None:
            raise EdgeStatError("local search is randomized; pass --seed")
        rec = local_search(cfg.n, cfg.k, cfg.l, budget=cfg.budget or 2000, seed=cfg.seed,
                           config=SearchConfig(restarts=ns.restarts))
    store = RecordsStore(ns.records)
    stored = store.insert(rec)
    if stored:
        store.save()
    _emit(cfg, {"record": rec.to_json(), "stored": stored, "records_file": str(store.path)},
          _record_rows([rec]))
    return EXIT_OK


def cmd_construct(cfg: RunConfig) -> int:
    cfg.need("n", "k", "l")
    rec = construction_bound(cfg.n, cfg.k, cfg.l, budget=cfg.budget or DEFAULT_BUDGET)
    _emit(cfg, {"record": rec.to_json()}, _record_rows([rec]))
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    from .acceptance import run_all

    results = run_all(echo=lambda line: print(line, file=sys.stderr))
    passed = sum(r.passed for r in results)
    payload = {
        "passed": passed,
        "total": len(results),
        "criteria": [{"number": r.number, "title": r.title, "passed": r.passed,
                      "detail": r.detail} for r in results],
    }
    rows = [["number", "title", "passed", "detail"]]
    rows += [[r.number, r.title, r.passed, r.detail] for r in results]
    _emit(cfg, payload, rows)
    return EXIT_OK if passed == len(results) else EXIT_CHECK_FAILED


# parser ------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, graph: bool = True) -> None:
    if graph:
        src = p.add_argument_group("graph source (exactly one)")
        src.add_argument("--g6", help="graph6 string")
        src.add_argument("--file", help="file holding one graph6 line")
        src.add_argument("--construct", help="construction name:param,param, e.g. two_cliques:6")
    p.add_argument("-n", type=int)
    p.add_argument("-k", type=int)
    p.add_argument("-l", type=int)
    p.add_argument("-r", type=int)
    p.add_argument("-t", type=int)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edgestat",
        description="Edge statistics of random k-subsets of graphs.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("dist", help="distribution of the induced edge count")
    _add_common(p)
    p.add_argument("--mc", action="store_true", help="force Monte Carlo")

    p = sub.add_parser("moments", help="closed-form and enumerated moments")
    _add_common(p)

    p = sub.add_parser("check", help="anti-concentration, shift and Brun checks")
    _add_common(p)
    p.add_argument("--anti", action="store_true")
    p.add_argument("--shift", action="store_true")
    p.add_argument("--brun", action="store_true")

    p = sub.add_parser("search", help="maximise P(X = l); updates the records file")
    _add_common(p, graph=False)
    p.add_argument("--brute", action="store_true", help="exhaustive search (n <= 8)")
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--records", help="records file (default $EDGESTAT_RECORDS)")

    p = sub.add_parser("construct", help="best catalogue construction for (n, k, l)")
    _add_common(p, graph=False)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = RunConfig.from_args(ns)
    try:
        if ns.subcommand == "dist":
            return cmd_dist(cfg)
        if ns.subcommand == "moments":
            return cmd_moments(cfg)
        if ns.subcommand == "check":
            return cmd_check(cfg, ns)
        if ns.subcommand == "search":
            return cmd_search(cfg, ns)
        if ns.subcommand == "construct":
            return cmd_construct(cfg)
        return cmd_verify(cfg)
    except (EdgeStatError, OSError) as exc:
        print(f"edgestat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
