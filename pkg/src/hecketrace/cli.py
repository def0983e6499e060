"""Command-line driver: ``graph``, ``trace`` and ``verify``.

Exit codes: 0 all pass, 1 identity breach, 2 configuration error, 3 path-space cap.
The default output directory can be set with ``HECKETRACE_OUT_DIR``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

from .graphs import GraphRep, PerronError, ade_graph, basic_graph
from .hecke import DEFAULT_CAP, PathSpaceTooLarge, path_count
from .identities import SUITES, run_suite, standard_grid

__all__ = ["RunConfig", "main", "build_parser", "cmd_graph", "cmd_trace", "cmd_verify"]

EXIT_OK, EXIT_BREACH, EXIT_CONFIG, EXIT_CAP = 0, 1, 2, 3
OUT_ENV = "HECKETRACE_OUT_DIR"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    k: int | None = None
    n: int | None = None
    ade: str | None = None
    grid: str | None = None
    L: int | None = None
    Lmax: int | None = None
    kind: str = "both"
    expand: bool = False
    oracle: bool = False
    suites: list = field(default_factory=lambda: ["all"])
    out: str | None = None
    fmt: str = "json"
    cap: int = DEFAULT_CAP
    tol: float | None = None
    jobs: int = 1
    timings: bool = False

    def validate(self) -> None:
        given = sum([self.ade is not None, self.k is not None or self.n is not None, self.grid is not None])
        if given != 1:
            raise ConfigError("give exactly one graph: --k/--n, --ade, or --grid")
        if (self.k is None) != (self.n is None):
            raise ConfigError("--k and --n go together")
        for name in ("L", "Lmax"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ConfigError(f"--{name} must be >= 1")
        if self.cap < 1:
            raise ConfigError("--cap must be >= 1")
        if self.jobs < 1:
            raise ConfigError("--jobs must be >= 1")

    def graphs(self) -> list[GraphRep]:
        try:
            if self.grid is not None:
                if self.grid != "standard":
                    raise ConfigError(f"unknown grid {self.grid!r}")
                return standard_grid()
            if self.ade is not None:
                return [ade_graph(self.ade)]
            return [basic_graph(self.k, self.n)]
        except (ValueError, PerronError) as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def tag(self) -> str:
        if self.grid:
            return f"grid-{self.grid}"
        return self.ade.upper() if self.ade else f"k{self.k}n{self.n}"


def _emit(text: str, cfg: RunConfig, default_name: str) -> None:
    path = cfg.out
    if path is None and os.environ.get(OUT_ENV):
        path = os.path.join(os.environ[OUT_ENV], default_name)
    if path is None:
        sys.stdout.write(text)
        return
    if os.path.isdir(path):
        path = os.path.join(path, default_name)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        fh.write(text)


def cmd_graph(cfg: RunConfig) -> int:
    dumps = [g.to_dict() for g in cfg.graphs()]
    payload = dumps[0] if len(dumps) == 1 else dumps
    _emit(json.dumps(payload) + "\n", cfg, f"graph-{cfg.tag}.json")
    return EXIT_OK


def _expansion(graph: GraphRep, M, kind: str, L: int) -> dict:
    from .fusion import n_expand
    from .traces import trace_sequence
    from .weights import weight_to_partition

    if graph.is_basic:
        exp = n_expand(graph, M)
    else:
        ref = trace_sequence(basic_graph(2, graph.n), L, kind)[L - 1]
        exp = n_expand(graph, M, reference=ref)
    terms = []
    for lab, c in zip(exp.labels, exp.coeffs):
        c = complex(c)
        if abs(c) <= 1e-12:
            continue
        term = {"label": list(lab) if isinstance(lab, tuple) else lab,
                "coeff": [float(f"{c.real:.15g}"), float(f"{c.imag:.15g}")]}
        if graph.is_basic:
            term["partition"] = list(weight_to_partition(graph.rl, lab))
        terms.append(term)
    return {"terms": terms, "residual": float(f"{exp.residual:.15g}")}


def cmd_trace(cfg: RunConfig) -> int:
    from .traces import TraceMatrix, oracle_trace, trace_sequence

    if cfg.L is not None and cfg.Lmax is not None:
        raise ConfigError("give --L or --Lmax, not both")
    Ls = [cfg.L] if cfg.L is not None else list(range(1, (cfg.Lmax or 1) + 1))
    kinds = {"both": ["Z", "Ztilde"], "Z": ["Z"], "Ztilde": ["Ztilde"]}.get(cfg.kind)
    if kinds is None:
        raise ConfigError(f"unknown kind {cfg.kind!r}")
    records = []
    for graph in cfg.graphs():
        for kind in kinds:
            seq = trace_sequence(graph, max(Ls), kind)
            for L in Ls:
                M = seq[L - 1]
                if cfg.oracle:
                    largest = int(path_count(graph, L).max())
                    if largest > cfg.cap:
                        raise PathSpaceTooLarge(largest, cfg.cap)
                    M, _ = oracle_trace(graph, L, kind, max_dim=cfg.cap, cap=cfg.cap)
                rec = TraceMatrix(graph, L, kind, M).to_dict()
                if cfg.expand:
                    rec["expansion"] = _expansion(graph, M, kind, L)
                records.append(rec)
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["graph", "L", "kind", "a0", "aL", "re", "im"])
        for rec in records:
            for i, row in enumerate(rec["matrix"]):
                for j, (re_, im_) in enumerate(row):
                    w.writerow([rec["graph"], rec["L"], rec["kind"], i, j, repr(re_), repr(im_)])
        text = buf.getvalue()
    else:
        text = json.dumps(records[0] if len(records) == 1 else records) + "\n"
    _emit(text, cfg, f"trace-{cfg.tag}.{cfg.fmt}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    suites = []
    for s in cfg.suites:
        suites.extend(x for x in s.split(",") if x)
    for s in suites:
        if s != "all" and s not in SUITES:
            raise ConfigError(f"unknown suite {s!r}; choose from all, {', '.join(SUITES)}")
    reports = run_suite(cfg.graphs(), suites, Lmax=cfg.Lmax or 9, jobs=cfg.jobs, tol=cfg.tol)
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        head = ["identity", "params", "passed", "max_residual", "tol", "checked", "skipped"]
        w.writerow(head + (["runtime"] if cfg.timings else []))
        for r in reports:
            d = r.to_dict(cfg.timings)
            row = [d["identity"], json.dumps(d["params"]), d["passed"], f"{r.max_residual:.15g}",
                   d["tol"], d["checked"], d["skipped"]]
            w.writerow(row + ([d["runtime"]] if cfg.timings else []))
        text = buf.getvalue()
    else:
        text = "".join(json.dumps(r.to_dict(cfg.timings)) + "\n" for r in reports)
    _emit(text, cfg, f"verify-{cfg.tag}.{'csv' if cfg.fmt == 'csv' else 'jsonl'}")
    failed = [r for r in reports if not r.passed]
    for r in failed:
        print(f"FAIL {r.identity} {json.dumps(r.params)} residual={r.max_residual:.3e} at {r.location}",
              file=sys.stderr)
    return EXIT_BREACH if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hecketrace", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        g = sp.add_argument_group("graph")
        g.add_argument("--k", type=int, help="rank of sl(k) for the basic graph")
        g.add_argument("--n", type=int, help="cutoff, q = exp(i pi / n)")
        g.add_argument("--ade", help="ADE Dynkin diagram, e.g. D4 or E6")
        sp.add_argument("--out", help="output file or directory (default: stdout or $%s)" % OUT_ENV)
        sp.add_argument("--format", dest="fmt", choices=["json", "csv"], default="json")
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="max path-space dimension")

    sp = sub.add_parser("graph", help="dump a graph with its fused adjacencies and Perron vector")
    common(sp)

    sp = sub.add_parser("trace", help="compute Z_L and Z~_L")
    common(sp)
    sp.add_argument("--L", type=int, help="single length")
    sp.add_argument("--Lmax", type=int, help="all lengths 1..Lmax")
    sp.add_argument("--kind", choices=["Z", "Ztilde", "both"], default="both")
    sp.add_argument("--expand", action="store_true", help="attach fusion-basis coefficients")
    sp.add_argument("--oracle", action="store_true", help="use explicit operator products")

    sp = sub.add_parser("verify", help="run identity suites")
    common(sp)
    sp.add_argument("--grid", choices=["standard"], help="standard grid of basic and ADE graphs")
    sp.add_argument("--suite", dest="suites", action="append",
                    help="suite id (repeatable or comma separated); 'all' runs every suite")
    sp.add_argument("--Lmax", type=int, default=9)
    sp.add_argument("--tol", type=float, help="override every tolerance")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--timings", action="store_true", help="include runtimes (breaks byte-identical output)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    opts = {k: v for k, v in vars(args).items() if v is not None}
    if opts.get("suites") is None:
        opts.pop("suites", None)
    cfg = RunConfig(**opts)
    try:
        cfg.validate()
        handler = {"graph": cmd_graph, "trace": cmd_trace, "verify": cmd_verify}[cfg.command]
        return handler(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PathSpaceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
