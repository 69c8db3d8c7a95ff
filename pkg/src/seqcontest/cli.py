"""Command-line interface: ``seqcontest <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from seqcontest.asymptotics import compare_exact
from seqcontest.contests import Contest, enumerate_contests, exhaustive_cap
from seqcontest.designer import (
    TIE_TOL,
    Objective,
    ObjectiveReport,
    contest_table,
    reproduce_summary_table,
    search,
    verify_propositions,
)
from seqcontest.equilibrium import DEFAULT_GRID, solve_equilibrium
from seqcontest.errors import ContestError, OracleError, SolverError
from seqcontest.oracle import OracleConfig, oracle_solve
from seqcontest.payoff import MarginalBenefit, parse_model

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_VERIFY = 0, 2, 3, 4
FIGURE_HEADER = ["n", "contest_id", "composition", "value", "is_sequential", "is_simultaneous",
                 "is_first_mover", "is_leader_pairwise", "is_two_then_singletons"]


class UsageError(ContestError):
    pass


def fmt(x: float) -> str:
    return f"{x:.12g}"


def parse_n_range(text: str) -> list[int]:
    """``7``, ``2..12`` or ``3,5,8``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            values = list(range(int(lo), int(hi) + 1))
        else:
            values = [int(p) for p in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"cannot parse n range {text!r}") from exc
    if not values:
        raise UsageError(f"empty n range {text!r}")
    cap = exhaustive_cap()
    bad = [n for n in values if not 1 <= n <= cap]
    if bad:
        raise UsageError(f"n = {bad[0]} outside 1..{cap} (CONTEST_MAX_N)")
    return values


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: str
    contest: str | None
    n: str | None
    objective: str | None
    direction: str
    out: str | None
    format: str
    grid: int | None
    tol: float | None
    jobs: int


# parallel map keyed by n -------------------------------------------------


def _pmap(fn: Callable, keys: Sequence, jobs: int) -> list:
    """Map ``fn`` over ``keys`` and return results in key order."""
    if jobs <= 1 or len(keys) <= 1:
        return [fn(k) for k in keys]
    with ProcessPoolExecutor(max_workers=min(jobs, len(keys))) as pool:
        return list(pool.map(fn, keys))


@dataclass(frozen=True)
class _Job:
    model: str
    grid: int
    tol: float
    objectives: tuple[str, ...] = ()
    directions: tuple[str, ...] = ()

    def __call__(self, n):
        raise NotImplementedError


class _FigureJob(_Job):
    def __call__(self, n: int) -> dict[str, list[list[str]]]:
        m = parse_model(self.model)
        table = contest_table(m, n, self.grid, check=False)
        leader_pairwise = Contest.leader_pairwise(n).periods[1:]
        rows: dict[str, list[list[str]]] = {o: [] for o in self.objectives}
        for c, _, rep in table.solved():
            flags = [c.is_sequential(), c.is_simultaneous(), c.is_first_mover(),
                     c.periods[0] == 1 and sorted(c.periods[1:]) == sorted(leader_pairwise),
                     c == Contest.two_then_singletons(n)]
            for o in self.objectives:
                rows[o].append([str(n), str(c.contest_id), str(c), fmt(rep.value(o))] +
                               [str(int(f)) for f in flags])
        if table.failures:
            raise SolverError(f"{table.failures} contests with n = {n} could not be solved")
        return rows


class _SearchJob(_Job):
    def __call__(self, n: int) -> list[dict]:
        m = parse_model(self.model)
        table = contest_table(m, n, self.grid)
        return [search(m, n, o, d, tie_tol=self.tol, table=table).to_dict()
                for o in self.objectives for d in self.directions]


class _VerifyJob(_Job):
    def __call__(self, n: int) -> dict:
        m = parse_model(self.model)
        checks = [c.to_dict() for c in verify_propositions(m, [n], self.grid, self.tol)]
        cells = [c.to_dict() for c in reproduce_summary_table(m, [n], self.grid, self.tol)] if m.family == "tullock" else []
        return {"propositions": checks, "table": cells}


class _AsymptoticsJob(_Job):
    def __call__(self, n: int) -> list[dict]:
        m = parse_model(self.model)
        return [_gap_dict(r) for r in compare_exact(m, enumerate_contests(n), self.grid)]


def _gap_dict(r) -> dict:
    return {"contest": str(r.contest), "n": r.contest.n, "exact_X": r.exact_X, "approx_X": r.approx_X,
            "exact_efforts": list(r.exact_efforts), "approx_efforts": list(r.approx_efforts)}


# output helpers ------------------------------------------------------------


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cell(v) -> str:
    if isinstance(v, float):
        return fmt(v)
    if isinstance(v, (list, tuple)):
        return ";".join(_cell(x) for x in v)
    return str(v)


def _records_to_csv(records: list[dict]) -> str:
    if not records:
        return ""
    header = list(records[0])
    return _csv_text(header, [[_cell(r[k]) for k in header] for r in records])


def _output(cfg: RunConfig, payload, records: list[dict] | None = None) -> None:
    if cfg.format == "csv":
        _emit(_records_to_csv(records if records is not None else [payload]), cfg.out)
    else:
        _emit(_json_text(payload), cfg.out)


def _objectives(cfg: RunConfig) -> tuple[str, ...]:
    if cfg.objective in (None, "all"):
        return tuple(o.value for o in Objective)
    return (Objective(cfg.objective).value,)


def _directions(cfg: RunConfig) -> tuple[str, ...]:
    return ("min", "max") if cfg.direction == "both" else (cfg.direction,)


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required for this command")
    return value


# commands ------------------------------------------------------------------


def cmd_solve(cfg: RunConfig) -> int:
    m = parse_model(cfg.model)
    c = Contest.parse(_need(cfg.contest, "--contest"))
    out = solve_equilibrium(m, c, cfg.grid or DEFAULT_GRID)
    rep = ObjectiveReport.from_outcome(out)
    payload = {"model": m.to_dict(), **out.to_dict(), "objectives": vars(rep)}
    flat = {"contest": str(c), "X_star": out.X_star, "efforts": list(out.period_efforts),
            "payoffs": list(out.period_payoffs), "welfare": out.welfare, "h_star": out.h_star, **vars(rep)}
    _output(cfg, payload, [flat])
    return EXIT_OK


def cmd_search(cfg: RunConfig) -> int:
    ns = parse_n_range(_need(cfg.n, "--n"))
    job = _SearchJob(cfg.model, cfg.grid or DEFAULT_GRID, TIE_TOL if cfg.tol is None else cfg.tol,
                     _objectives(cfg), _directions(cfg))
    parse_model(cfg.model)
    results = [r for chunk in _pmap(job, ns, cfg.jobs) for r in chunk]
    _output(cfg, results, results)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    ns = parse_n_range(_need(cfg.n, "--n"))
    parse_model(cfg.model)
    job = _VerifyJob(cfg.model, cfg.grid or DEFAULT_GRID, TIE_TOL if cfg.tol is None else cfg.tol)
    parts = _pmap(job, ns, cfg.jobs)
    checks = [c for p in parts for c in p["propositions"]]
    cells = [c for p in parts for c in p["table"]]
    failed = sum(c["status"] == "fail" for c in checks + cells)
    payload = {"model": cfg.model, "propositions": checks, "table": cells, "failed": failed}
    records = [{"kind": "proposition", "n": c["n"], "label": c["proposition"], "claim": c["claim"],
                "status": c["status"], "detail": c["witnesses"]} for c in checks]
    records += [{"kind": "table", "n": c["n"], "label": f"{c['objective']}:{c['direction']}",
                 "claim": c["expected"], "status": c["status"], "detail": c["argopt"]} for c in cells]
    _output(cfg, payload, records)
    for r in records:
        if r["status"] == "fail":
            print(f"FAIL n={r['n']} {r['label']}: {r['claim']}", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_figures(cfg: RunConfig) -> int:
    ns = parse_n_range(cfg.n or "2..12")
    parse_model(cfg.model)
    objectives = _objectives(cfg)
    job = _FigureJob(cfg.model, cfg.grid or DEFAULT_GRID, 0.0, objectives)
    parts = _pmap(job, ns, cfg.jobs)
    outdir = Path(cfg.out or "figures")
    outdir.mkdir(parents=True, exist_ok=True)
    for o in objectives:
        rows = [r for p in parts for r in p[o]]
        (outdir / f"fig_{o}.csv").write_text(_csv_text(FIGURE_HEADER, rows))
    print(f"wrote {len(objectives)} files to {outdir}", file=sys.stderr)
    return EXIT_OK


def cmd_oracle_check(cfg: RunConfig) -> int:
    m = parse_model(cfg.model)
    if cfg.contest:
        contests = [Contest.parse(cfg.contest)]
    else:
        contests = [c for n in parse_n_range(cfg.n or "3") for c in enumerate_contests(n)]
    oc = OracleConfig(grid_points=cfg.grid or OracleConfig.grid_points)
    step = m.xbar / (oc.grid_points - 1)
    tol = 2 * step if cfg.tol is None else cfg.tol
    records, worst = [], 0.0
    for c in contests:
        exact = solve_equilibrium(m, c)
        grid = oracle_solve(m, c, oc)
        diffs = [abs(grid.X_star - exact.X_star)] + [abs(a - b) for a, b in zip(grid.period_efforts, exact.period_efforts)]
        worst = max(worst, max(diffs))
        records.append({"contest": str(c), "exact_X": exact.X_star, "oracle_X": grid.X_star,
                        "exact_efforts": list(exact.period_efforts), "oracle_efforts": list(grid.period_efforts),
                        "max_discrepancy": max(diffs), "status": "pass" if max(diffs) <= tol else "fail"})
    _output(cfg, {"model": cfg.model, "grid_points": oc.grid_points, "tolerance": tol,
                  "max_discrepancy": worst, "contests": records}, records)
    return EXIT_OK if worst <= tol else EXIT_VERIFY


def cmd_asymptotics(cfg: RunConfig) -> int:
    m = parse_model(cfg.model)
    if cfg.contest:
        records = [_gap_dict(r) for r in compare_exact(m, [Contest.parse(cfg.contest)], cfg.grid)]
    else:
        ns = parse_n_range(_need(cfg.n, "--n or --contest"))
        job = _AsymptoticsJob(cfg.model, cfg.grid or DEFAULT_GRID, 0.0)
        records = [r for chunk in _pmap(job, ns, cfg.jobs) for r in chunk]
    _output(cfg, records, records)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "search": cmd_search,
    "verify": cmd_verify,
    "figures": cmd_figures,
    "oracle-check": cmd_oracle_check,
    "asymptotics": cmd_asymptotics,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="seqcontest", description="Sequential contests with effort disclosure.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--model", default="tullock:1,1", help="family:params, e.g. tullock:1,1 or linear:1,1")
    p.add_argument("--contest", help="composition literal, e.g. 1,2")
    p.add_argument("--n", help="player count or range: 7, 2..12, 3,5")
    p.add_argument("--objective", choices=[o.value for o in Objective] + ["all"])
    p.add_argument("--dir", dest="direction", choices=["min", "max", "both"], default="both")
    p.add_argument("--out", help="output file (directory for figures)")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--grid", type=int, help="grid points for the root scan (oracle grid for oracle-check)")
    p.add_argument("--tol", type=float, help="tie tolerance for search/verify; discrepancy bound for oracle-check")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**vars(args))
    try:
        if cfg.grid is not None and cfg.grid < 3:
            raise UsageError("--grid must be at least 3")
        return COMMANDS[cfg.command](cfg)
    except (SolverError, OracleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ContestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
