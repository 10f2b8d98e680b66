"""Command-line front end: ``kummer-lfun <command> [options]``.

Exit codes: 0 ok, 1 usage, 2 budget overflow, 3 internal inconsistency.
Results go to stdout, logs to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass

from .curve import normalize
from .errors import BudgetExceeded, InconsistencyError
from .gfq import GENERATOR_VARIANTS, default_budget, prime_power
from .lfun import (
    CSV_FIELDS, average_rank_scan, find_ell, l_polynomial, rank_sequences, supersingular_report,
)
from .orbits import is_supersingular
from .verify import run_all

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_INCONSISTENT = 0, 1, 2, 3

log = logging.getLogger("kummer_lfun")


@dataclass
class RunConfig:
    command: str
    q: int = 3
    d: int = 1
    x: int = 10
    n_max: int = 3
    p: int = 3
    bound: int = 140
    m_max: int = 3
    budget: int | None = None
    format: str = "text"
    jobs: int | None = None
    generator: str = "primary"

    def __post_init__(self):
        if self.command in ("lfun", "rank", "verify", "scan", "sequences"):
            p, _ = prime_power(self.q)
            if p == 2:
                raise ValueError("q must be an odd prime power")
        if self.budget is not None and self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.jobs is not None and self.jobs <= 0:
            raise ValueError("jobs must be positive")

    @property
    def field_budget(self) -> int:
        return default_budget() if self.budget is None else self.budget

    @property
    def workers(self) -> int:
        return self.jobs or os.cpu_count() or 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit with 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=3)
    common.add_argument("--budget", type=int, default=None,
                        help="largest field size to tabulate (env KUMMER_LFUN_BUDGET)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--jobs", type=int, default=None)
    common.add_argument("--generator", choices=GENERATOR_VARIANTS, default="primary")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="kummer-lfun", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("lfun", "rank"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--d", type=int, required=True)
    sp = sub.add_parser("verify", parents=[common])
    sp.add_argument("--m-max", dest="m_max", type=int, default=3)
    sp = sub.add_parser("scan", parents=[common])
    sp.add_argument("--x", type=int, default=10)
    sp = sub.add_parser("sequences", parents=[common])
    sp.add_argument("--n-max", dest="n_max", type=int, default=3)
    sp = sub.add_parser("find-ell", parents=[common])
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--bound", type=int, default=140)
    return parser


def _csv(rows: list[dict], fields) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(fields), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def cmd_lfun(cfg: RunConfig) -> str:
    lp = l_polynomial(cfg.q, cfg.d, cfg.generator, cfg.field_budget, jobs=cfg.jobs or 1)
    factor_list = [[1, -cfg.q]]
    for f in lp.factors:
        coeffs = [1] + [0] * (f.length - 1)
        factor_list.append(coeffs + [-f.beta_integer] if f.beta_integer is not None else None)
    note = f"normalized d'={lp.d_prime}" if lp.d_prime != cfg.d else ""
    if cfg.format == "json":
        out = lp.to_dict()
        out.update(rank=lp.rank, render=str(lp), factor_list=factor_list, note=note)
        return _dump(out)
    if cfg.format == "csv":
        return _csv([{"degree": i, "coefficient": c} for i, c in enumerate(lp.coefficients)],
                    ("degree", "coefficient"))
    lines = [note] if note else []
    lines.append(f"L(T) = {lp}")
    lines.append(f"coefficients (low to high): {lp.coefficients}")
    lines.append(f"  factor (1 - {cfg.q}T)")
    for f in lp.factors:
        b = str(f.beta_integer) if f.beta_integer is not None else f"beta{f.beta}"
        lines.append(f"  orbit n={f.representative} |n|={f.length} e={f.stratum}: 1 - {b}*T^{f.length}")
    lines.append(f"rank: {lp.rank}")
    return "\n".join(lines)


def cmd_rank(cfg: RunConfig) -> str:
    d_prime, e = normalize(cfg.q, cfg.d)
    out: dict = {"q": cfg.q, "d": cfg.d, "d_prime": d_prime, "p_exponent": e}
    if is_supersingular(cfg.q, 2 * d_prime):
        rep = supersingular_report(cfg.q, d_prime)
        out.update(method="ss-formula", rank=rep.orbit_rank, witness=rep.witness,
                   i_q_2d=str(rep.i_q_2d),
                   discrepancy=asdict(rep.discrepancy) if rep.discrepancy else None)
        try:
            out["beta_rank"] = l_polynomial(cfg.q, d_prime, cfg.generator, cfg.field_budget).rank
        except BudgetExceeded as exc:
            out["beta_rank"] = None
            out["unknown_reason"] = f"budget: {exc}"
    else:
        out.update(method="beta", rank=l_polynomial(cfg.q, d_prime, cfg.generator, cfg.field_budget).rank)
    if out.get("beta_rank") not in (None, out["rank"]):
        raise InconsistencyError(f"supersingular rank {out['rank']} != beta rank {out['beta_rank']}")
    if cfg.format == "json":
        return _dump(out)
    if cfg.format == "csv":
        return _csv([out], out.keys())
    return "\n".join(f"{k}: {v}" for k, v in out.items())


def cmd_verify(cfg: RunConfig) -> tuple[str, bool]:
    results = run_all(cfg.q, cfg.m_max)
    ok = all(r.passed for r in results)
    if cfg.format == "json":
        return _dump([{"suite": r.name, "passed": r.passed, "checked": r.checked,
                       "failures": r.failures, "notes": r.notes} for r in results]), ok
    if cfg.format == "csv":
        return _csv([{"suite": r.name, "passed": int(r.passed), "checked": r.checked}
                     for r in results], ("suite", "passed", "checked")), ok
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<28} {r.checked:>6} checks  {r.seconds:6.2f}s")
        lines.extend(f"      failure: {f}" for f in r.failures[:10])
        lines.extend(f"      note: {n}" for n in r.notes)
    return "\n".join(lines), ok


def cmd_scan(cfg: RunConfig) -> str:
    res = average_rank_scan(cfg.q, cfg.x, cfg.field_budget, jobs=cfg.workers)
    if res.disagreements:
        raise InconsistencyError(f"supersingular and beta ranks disagree at d={res.disagreements}")
    if cfg.format == "json":
        return _dump(res.to_dict())
    rows = [asdict(r) for r in res.rows]
    if cfg.format == "csv":
        return _csv(rows, CSV_FIELDS)
    lines = [f"{'d':>4} {'dp':>4} {'method':<10} {'rank':>4} {'degL':>4} ss  running_avg"]
    for r, avg in zip(res.rows, res.running_averages):
        rank = "-" if r.rank is None else r.rank
        avg_s = "-" if avg is None else f"{avg:.3f}"
        lines.append(f"{r.d:>4} {r.d_prime:>4} {r.method:<10} {rank:>4} {r.degL:>4} {r.supersingular:>2}  {avg_s}"
                     + (f"  ({r.unknown_reason})" if r.unknown_reason else ""))
    lines.append(f"average over known: {res.average}  unknown: {res.unknown_count}")
    for r in res.rows:
        if r.discrepancy:
            disc = r.discrepancy
            lines.append(f"discrepancy d={r.d} (d'={disc['d']}): I_q(2d')={disc['formula_value']} "
                         f"vs orbit count {disc['orbit_value']}")
    return "\n".join(lines)


def cmd_sequences(cfg: RunConfig) -> str:
    rows, discrepancies = rank_sequences(cfg.q, cfg.n_max)
    for disc in discrepancies:
        log.warning("discrepancy: %s at d=%d (formula %s, orbits %d)",
                    disc.kind, disc.d, disc.formula_value, disc.orbit_value)
    if cfg.format == "json":
        return _dump({"rows": [asdict(r) for r in rows],
                      "discrepancies": [asdict(x) for x in discrepancies]})
    table = [asdict(r) for r in rows]
    if cfg.format == "csv":
        return _csv(table, table[0].keys())
    lines = []
    for r in rows:
        lines.append(
            f"n={r.n}: d^e={r.d_even} (witness a={r.even_witness}) I_q={r.i_q_even} "
            f">= {r.bound_even:.4f} [{r.check_even}]; "
            f"d^o={r.d_odd} (witness a={r.odd_witness}) I_q(2d^o)={r.i_q_odd} "
            f">= {r.bound_odd:.4f} [{r.check_odd}]; o_q(q^n+1)=2n: {r.order_check}"
        )
    for disc in discrepancies:
        lines.append(f"discrepancy: {disc.kind} at d={disc.d}: {disc.formula_value} vs {disc.orbit_value}")
    return "\n".join(lines)


def cmd_find_ell(cfg: RunConfig) -> str:
    ells = find_ell(cfg.p, cfg.bound)
    if cfg.format == "json":
        return _dump({"p": cfg.p, "bound": cfg.bound, "ell": ells})
    if cfg.format == "csv":
        return _csv([{"ell": e} for e in ells], ("ell",))
    return f"{cfg.p} | {', '.join(map(str, ells))}"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help exits 0, usage errors exit 1
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    try:
        cfg = RunConfig(**fields)
        ok = True
        if cfg.command == "verify":
            text, ok = cmd_verify(cfg)
        else:
            handler = {"lfun": cmd_lfun, "rank": cmd_rank, "scan": cmd_scan,
                       "sequences": cmd_sequences, "find-ell": cmd_find_ell}[cfg.command]
            text = handler(cfg)
    except BudgetExceeded as exc:
        log.error("budget exceeded: %s", exc)
        return EXIT_BUDGET
    except InconsistencyError as exc:
        log.error("internal inconsistency: %s", exc)
        return EXIT_INCONSISTENT
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    print(text)
    return EXIT_OK if ok else EXIT_INCONSISTENT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
