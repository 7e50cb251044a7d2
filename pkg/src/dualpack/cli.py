"""Command line: ``gen``, ``solve``, ``simulate``, ``reduce`` and ``bench``."""

from __future__ import annotations

import argparse
import csv
import io
import random
import sys
from pathlib import Path

from .advice import simulate
from .core import ParseError, Weight, parse_instance, serialize_instance
from .experiment import (
    ALGORITHMS,
    FAMILIES,
    ExperimentConfig,
    instance_rows,
    generate_instance,
    row_failed,
    rows_to_csv,
    run_experiment,
)
from .online import FirstFitOnline, RandomPlacement, Replay
from .reduction import (
    entropy_lower_bound,
    pairing_packing,
    parse_bsp,
    random_bsp,
    reduce_and_run,
    serialize_bsp,
)

REDUCTION_COLUMNS = (
    "algorithm",
    "n",
    "n1",
    "p1",
    "l2",
    "s2",
    "p3",
    "g1",
    "g2",
    "bound_tight",
    "bound_loose",
    "entropy_bits",
)


def _eps_list(text: str) -> list[Weight]:
    return [Weight.coerce(part) for part in text.split(",") if part.strip()]


def _algos(text: str) -> list[str]:
    out = [a.strip().lower() for a in text.split(",") if a.strip()]
    for a in out:
        if a not in ALGORITHMS:
            raise argparse.ArgumentTypeError(f"unknown algorithm {a!r}")
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    eps = _eps_list(args.eps)[0] if args.eps else None
    inst = generate_instance(args.family, args.n, args.m, args.s, args.seed, eps)
    _emit(serialize_instance(inst), args.out)
    return 0


def cmd_solve(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    cfg = ExperimentConfig(
        family=f"file:{Path(args.instance).name}",
        algos=args.algos,
        eps_grid=_eps_list(args.eps),
        oracle=args.oracle,
    )
    rows = instance_rows(inst, cfg, family=cfg.family)
    _emit(rows_to_csv(rows), args.out)
    return 1 if any(row_failed(r) for r in rows) else 0


def cmd_simulate(args) -> int:
    inst = parse_instance(Path(args.instance).read_text())
    eps = _eps_list(args.eps)[0]
    rep = simulate(inst, eps, oracle=args.oracle)
    lines = [
        f"mode: {rep.mode}",
        f"k: {rep.k}",
        f"advice_bits: {rep.advice_bits}",
        f"advice_budget: {rep.advice_budget}",
        f"online_count: {rep.online_count}",
        f"offline_ptas_count: {rep.offline_ptas_count}",
        f"opt: {'' if rep.opt is None else rep.opt}",
        f"ratio: {'' if rep.ratio is None else f'{float(rep.ratio):.6f}'}",
        f"status: {'ok' if rep.ok else '; '.join(rep.failures)}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    if args.transcript:
        Path(args.transcript).write_text(rep.transcript.to_text())
    return 0 if rep.ok else 1


def cmd_reduce(args) -> int:
    if args.bsp:
        bsp = parse_bsp(Path(args.bsp).read_text())
    else:
        bsp = random_bsp(args.n, random.Random(args.seed))
        if args.save_bsp:
            Path(args.save_bsp).write_text(serialize_bsp(bsp))
    algs = {
        "ff": FirstFitOnline(),
        "random": RandomPlacement(args.seed),
        "optimal": Replay(pairing_packing(bsp).assignment),
    }
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REDUCTION_COLUMNS)
    failed = False
    for name in args.algos.split(","):
        run = reduce_and_run(bsp, algs[name.strip()])
        rep = run.report
        tight, loose = rep.bounds()
        bits = entropy_lower_bound(rep.n, rep.mistakes) if rep.n else None
        writer.writerow(
            [name, rep.n, rep.n1, rep.p1, rep.l2, rep.s2, rep.p3, rep.g1, rep.g2, tight, loose,
             "NA" if bits is None else f"{bits:.4f}"]
        )
        failed |= not rep.holds()
    _emit(buf.getvalue(), args.out)
    return 1 if failed else 0


def cmd_bench(args) -> int:
    cfg = ExperimentConfig(
        family=args.family,
        n=args.n,
        m=args.m,
        s=args.s,
        seed=args.seed,
        count=args.count,
        algos=args.algos,
        eps_grid=_eps_list(args.eps),
        oracle=args.oracle,
        max_oracle_n=args.max_oracle_n,
        jobs=args.jobs,
        timing=args.timing,
    )
    rows = run_experiment(cfg)
    _emit(rows_to_csv(rows, timing=cfg.timing), args.out)
    bad = sum(row_failed(r) for r in rows)
    if bad:
        print(f"{bad} rows broke an invariant", file=sys.stderr)
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dualpack", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def gen_flags(sp, n=12, m=3):
        sp.add_argument("--family", choices=FAMILIES, default="uniform")
        sp.add_argument("--n", type=int, default=n, help="items (separation length for reduction-derived)")
        sp.add_argument("--m", type=int, default=m, help="bins")
        sp.add_argument("--s", type=int, default=4, help="weights are multiples of 1/2^s")
        sp.add_argument("--seed", type=int, default=0)

    g = sub.add_parser("gen", help="write a random instance file")
    gen_flags(g)
    g.add_argument("--eps", help="weight cap for the small-heavy family")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="run algorithms on an instance file (CSV rows)")
    s.add_argument("instance")
    s.add_argument("--algos", type=_algos, default=list(ALGORITHMS))
    s.add_argument("--eps", default="1/2")
    s.add_argument("--oracle", action=argparse.BooleanOptionalAction, default=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    sm = sub.add_parser("simulate", help="advice oracle + online player on an instance file")
    sm.add_argument("instance")
    sm.add_argument("--eps", default="1/2")
    sm.add_argument("--oracle", action=argparse.BooleanOptionalAction, default=True)
    sm.add_argument("--transcript", help="write the decision log here")
    sm.add_argument("--out")
    sm.set_defaults(func=cmd_simulate)

    r = sub.add_parser("reduce", help="binary separation through online packing")
    r.add_argument("--bsp", help="separation input file ('n n1' then the values)")
    r.add_argument("--n", type=int, default=8)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--algos", default="ff,random,optimal")
    r.add_argument("--save-bsp")
    r.add_argument("--out")
    r.set_defaults(func=cmd_reduce)

    b = sub.add_parser("bench", help="batch experiment to CSV")
    gen_flags(b)
    b.add_argument("--count", type=int, default=10, help="instances; seeds run from --seed upward")
    b.add_argument("--algos", type=_algos, default=list(ALGORITHMS), help="comma list of " + ",".join(ALGORITHMS))
    b.add_argument("--eps", default="1/4,1/2", help="comma list of dyadic epsilons")
    b.add_argument("--oracle", action=argparse.BooleanOptionalAction, default=True, help="compute the optimum by brute force")
    b.add_argument("--max-oracle-n", type=int, default=20)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--timing", action="store_true", help="add a wall_ms column")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
