"""Command-line interface: ``tridice <command> [options]``.

Commands: volume, three-dice, four-dice, sigma, simulate. ``--json`` emits
one JSON document per run; ``--threads`` fans polytope volumes out to
worker processes.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import dice, montecarlo, polytope, tournaments
from .tournaments import decimal_string, rational_record


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict
    duration: float = 0.0
    lines: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "duration_seconds": round(self.duration, 6),
        }


def _eq(label: str, q: Fraction) -> str:
    return f"{label} = {q} = {decimal_string(q)}"


def cmd_volume(args) -> RunReport:
    p = polytope.read_polytope(args.path)
    v = polytope.vertex_enumerate(p)
    dim = polytope.dimension(v)
    vol = polytope.volume(v)
    return RunReport(
        "volume",
        {"path": str(args.path)},
        {"ambient_dim": p.ambient_dim, "dimension": dim, "vertices": len(v.vertices),
         "volume": rational_record(vol)},
        lines=[f"dim {dim}, volume {vol}"],
    )


def cmd_three_dice(args) -> RunReport:
    vol_q3 = polytope.volume(dice.build_Qk(3))
    p123, p132 = tournaments.prob_E_components()
    p_e = 3 * p123 + 3 * p132
    p_tri = 2 * p_e
    p_line = 1 - p_tri
    lines = [
        f"vol(Q3) = {vol_q3}",
        _eq("P(E123)", p123),
        _eq("P(E132)", p132),
        _eq("P(A>B>C>A) = P(E)", p_e),
        _eq("P(intransitive)", p_tri),
        _eq("P(transitive)", p_line),
    ]
    results = {
        "vol_Q3": rational_record(vol_q3),
        "P_E123": rational_record(p123),
        "P_E132": rational_record(p132),
        "P_E": rational_record(p_e),
        "p_triangle": rational_record(p_tri),
        "p_3line": rational_record(p_line),
    }
    return RunReport("three-dice", {}, results, lines=lines)


def cmd_four_dice(args) -> RunReport:
    workers = args.threads
    reps = dice.cyclic_representatives()
    if args.full:
        p_g, probs = tournaments.prob_G_full(workers)
    else:
        probs = tournaments.g_probabilities(reps, workers)
        p_g = 4 * sum(probs.values(), Fraction(0))
    p_tri, p_line = tournaments.three_dice_report()
    report = tournaments.assemble_four_dice(p_g, p_line, p_tri)

    lines = [" Event         Probability"]
    for w in reps:
        lines.append(f"G({','.join(map(str, w))})     {probs[w]}")
    if args.full:
        lines.append(f"all 36 words computed; rotation classes agree")
    lines.append(_eq("P(A>B>C>D>A) = P(G)", p_g))
    labels = {
        "p_4line": "P(transitive chain)",
        "p_square": "P(4-cycle)",
        "p_winner_tri": "P(winner + 3-cycle)",
        "p_loser_tri": "P(loser + 3-cycle)",
    }
    for f, label in labels.items():
        lines.append(_eq(label, getattr(report, f)))

    results = {
        "G": {dice.sigma_str(w): rational_record(q) for w, q in probs.items()},
        "P_G": rational_record(p_g),
        "report": report.as_dict(),
    }
    return RunReport("four-dice", {"full": args.full}, results, lines=lines)


def cmd_sigma(args) -> RunReport:
    sigma = dice.parse_sigma(args.word)
    p = dice.build_event(sigma)
    if args.dump:
        name = "E" if len(sigma) == 3 else "G"
        polytope.write_polytope(p, args.dump, comments=[f"{name}_{dice.sigma_str(sigma)}"])
    v = polytope.vertex_enumerate(p)
    dim = polytope.dimension(v)
    prob = polytope.volume(v) * 8 ** len(sigma)
    word = dice.sigma_str(sigma)
    return RunReport(
        "sigma",
        {"word": word, "dump": args.dump},
        {"ambient_dim": p.ambient_dim, "dimension": dim, "probability": rational_record(prob)},
        lines=[f"sigma {word}: dim {dim} of {p.ambient_dim}, probability {prob} = {decimal_string(prob)}"],
    )


def cmd_simulate(args) -> RunReport:
    cfg = montecarlo.SamplerConfig(args.seed, args.trials, args.dice, args.workers)
    est = montecarlo.estimate(cfg)
    lines = [f"{cfg.trials} trials, {cfg.dice_count} dice, seed {cfg.seed}, ties {est.ties}"]
    for c in est.classes:
        z = "n/a" if c.z_score is None else f"{c.z_score:+.3f}"
        lines.append(
            f"{c.name:<20} count {c.count:>9}  freq {c.frequency:.6f}  "
            f"se {c.std_error:.6f}  exact {float(c.exact):.6f}  z {z}"
        )
    inputs = {"dice": cfg.dice_count, "trials": cfg.trials, "seed": cfg.seed, "workers": cfg.workers}
    return RunReport("simulate", inputs, est.as_dict(), lines=lines)


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit one JSON document")
    common.add_argument("--threads", type=_positive_int, default=argparse.SUPPRESS,
                        help="worker processes for polytope volumes")

    parser = argparse.ArgumentParser(prog="tridice", parents=[common],
                                     description="Exact tournament probabilities for random 3-sided dice.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("volume", parents=[common], help="volume of a polytope file")
    p.add_argument("path")
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("three-dice", parents=[common], help="exact three-dice probabilities")
    p.set_defaults(func=cmd_three_dice)

    p = sub.add_parser("four-dice", parents=[common], help="exact four-dice probabilities")
    p.add_argument("--full", action="store_true", help="compute all 36 non-degenerate words")
    p.set_defaults(func=cmd_four_dice)

    p = sub.add_parser("sigma", parents=[common], help="probability of a single E/G event")
    p.add_argument("word", help="3 or 4 letters from 1,2,3, e.g. 1123")
    p.add_argument("--dump", metavar="PATH", help="write the H-representation to PATH")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo cross-check")
    p.add_argument("--dice", type=int, choices=(3, 4), default=3)
    p.add_argument("--trials", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.json = getattr(args, "json", False)
    args.threads = getattr(args, "threads", 1)
    if args.command == "sigma":
        try:
            dice.parse_sigma(args.word)
        except ValueError as exc:
            parser.error(str(exc))

    start = time.perf_counter()
    try:
        report = args.func(args)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report.duration = time.perf_counter() - start

    if args.json:
        json.dump(report.as_dict(), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        for line in report.lines:
            print(line)
        print(f"({report.duration:.2f}s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
