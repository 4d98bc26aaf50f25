"""Command line entry points: serve, plan, bench.

Exit codes: 0 success, 2 validation problem, 3 no plan found.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench, planner
from .errors import ValidationError
from .scenario import load_scenario

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_PLAN = 3

_MODE_ALIASES = {
    "rotations": planner.ROTATIONS_ONLY,
    "permutations": planner.ALL_PERMUTATIONS,
    **{m: m for m in planner.SEARCH_MODES},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tourplan")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--scenario", required=True)
    serve.add_argument("--listen", default="127.0.0.1:8000")

    plan = sub.add_parser("plan", help="plan a composition and print the report")
    plan.add_argument("--scenario", required=True)
    plan.add_argument("--deadline", type=float, default=None)
    plan.add_argument("--mode", default="permutations", choices=sorted(_MODE_ALIASES))
    plan.add_argument("--non-interactive", action="store_true",
                      help="auto-decline negotiation and break ties deterministically")
    plan.add_argument("--out", default=None, help="write the report here instead of stdout")

    run = sub.add_parser("bench", help="run the blocking/backtracking experiment")
    run.add_argument("--scenario", required=True)
    run.add_argument("--trials", type=int, default=200)
    run.add_argument("--block-prob", type=float, default=0.2)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--window-pad", type=float, default=30.0)
    run.add_argument("--modes", nargs="+", default=list(bench.DEFAULT_MODES),
                     choices=list(planner.SEARCH_MODES))
    run.add_argument("--csv", default=None, help="write the result table here")
    return parser


def _interactive_negotiator(prompt: planner.NegotiationPrompt):
    print("No feasible plan. Withdrawable categories:", ", ".join(prompt.withdrawable))
    for cat, why in prompt.diagnostics:
        print(f"  {cat}: {why}")
    raw = input("Withdraw which categories (comma separated, empty to give up)? ")
    withdrawn = tuple(c.strip() for c in raw.split(",") if c.strip())
    return planner.NegotiationDecision(withdrawn=withdrawn)


def _interactive_chooser(ties):
    print(f"{len(ties)} equally good plans:")
    for i, cand in enumerate(ties):
        ids = ", ".join(cand.combination.service_ids())
        print(f"  [{i}] {ids} (duration {cand.analysis.project_duration:g})")
    raw = input("Pick one by index (empty for the default): ").strip()
    return int(raw) if raw else 0


def cmd_plan(args) -> int:
    scenario = load_scenario(args.scenario)
    request = planner.PlanRequest(
        deadline=args.deadline if args.deadline is not None else scenario.deadline,
        fc_order=scenario.fc_order,
        nc_set=scenario.nc_set,
        constraints=scenario.constraints,
        precedence_template=scenario.precedence_template,
        search_mode=_MODE_ALIASES[args.mode],
    )
    if args.non_interactive:
        outcome = planner.plan(request, scenario.matrix,
                               negotiator=planner.auto_decline)
    else:
        outcome = planner.plan(request, scenario.matrix,
                               negotiator=_interactive_negotiator,
                               chooser=_interactive_chooser)
    report = json.dumps(planner.plan_report(outcome, request),
                        indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report + "\n")
    else:
        print(report)
    return EXIT_OK if outcome.status == "selected" else EXIT_NO_PLAN


def cmd_bench(args) -> int:
    scenario = load_scenario(args.scenario)
    config = bench.ExperimentConfig(
        scenario=scenario,
        trials=args.trials,
        block_prob=args.block_prob,
        seed=args.seed,
        modes=tuple(args.modes),
        window_pad=args.window_pad,
    )
    result = bench.run_experiment(config)
    csv_text = bench.to_csv(result)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    for line in bench.summary_lines(result):
        print(line)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    scenario = load_scenario(args.scenario)
    host, _, port = args.listen.rpartition(":")
    app = create_app(scenario)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "plan":
            return cmd_plan(args)
        if args.command == "bench":
            return cmd_bench(args)
        return cmd_serve(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
