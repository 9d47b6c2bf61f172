"""``ampsynth`` command-line front end.

Exit codes: 0 ok, 1 check failure, 2 parse/usage, 3 degenerate spec,
4 resource cap, 5 empty sample, 6 adaptive rounds exhausted.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .amplify import overlap_u, plan, probability_of_targets
from .errors import (
    AdaptiveFailureError,
    ArgumentError,
    DegenerateOverlapError,
    ResourceError,
    SpecError,
)
from .gates import F_BOUND_TOL
from .oracle import DENSE_CAP, SELF_CHECK_TOLERANCES, self_check
from .sampler import RNG_NAME, sample_report
from .synth import (
    AmplitudeSpec,
    RuntimeSchedule,
    adaptive_synthesize,
    build_program,
    indicator_spec,
    spec_from_probabilities,
    synthesize,
)

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_RESOURCE = 4
EXIT_EMPTY = 5
EXIT_ADAPTIVE = 6

SPEC_KEYS = {"amplitudes", "probabilities", "label"}


class ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ParseError(message)


# -- spec files --------------------------------------------------------------


def _finite_number(x) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"expected a number, got {x!r}")
    if not math.isfinite(x):
        raise ParseError(f"non-finite value {x!r}")
    return float(x)


def parse_spec(doc) -> tuple[AmplitudeSpec, str | None]:
    """Validate a decoded spec document.

    Raises ``ParseError`` for shape problems and ``SpecError`` for tables that
    parse but violate the amplitude constraints.
    """
    if not isinstance(doc, dict):
        raise ParseError("spec must be a JSON object")
    unknown = set(doc) - SPEC_KEYS
    if unknown:
        raise ParseError(f"unknown spec field(s): {sorted(unknown)}")
    has_amp, has_prob = "amplitudes" in doc, "probabilities" in doc
    if has_amp == has_prob:
        raise ParseError("spec needs exactly one of 'amplitudes' or 'probabilities'")
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise ParseError("label must be a string")
    entries = doc["amplitudes"] if has_amp else doc["probabilities"]
    if not isinstance(entries, list) or not entries:
        raise ParseError("spec table must be a non-empty list")
    if has_amp:
        values = []
        for e in entries:
            if not isinstance(e, list) or len(e) != 2:
                raise ParseError(f"amplitude entries must be [re, im] pairs, got {e!r}")
            values.append(complex(_finite_number(e[0]), _finite_number(e[1])))
        mags = np.abs(np.array(values))
        if mags.max() > 1.0 + F_BOUND_TOL:
            raise ParseError(f"amplitude magnitude {mags.max()!r} exceeds 1")
        return AmplitudeSpec(np.array(values), origin="amplitudes"), label
    probs = [_finite_number(e) for e in entries]
    if any(p < 0 for p in probs):
        raise ParseError("probabilities must be non-negative")
    return spec_from_probabilities(probs), label


def load_spec(path: str) -> tuple[AmplitudeSpec, str | None]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read spec {path}: {exc}") from exc
    return parse_spec(doc)


# -- reports -----------------------------------------------------------------


def _clean(x):
    """JSON-safe copy; non-finite floats become null."""
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    return x


def _base_report(f: AmplitudeSpec, label: str | None, args) -> dict:
    report = {
        "spec": {
            "label": label,
            "N": f.N,
            "input_length": f.input_length,
            "origin": f.origin,
        }
    }
    if getattr(args, "timestamp", False):
        report["generated_at"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    return report


def _tool() -> dict:
    return {"version": __version__, "rng_name": RNG_NAME}


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(_clean(report), indent=2, allow_nan=False) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _run_block(res) -> dict:
    return {
        "eta": res.eta,
        "success_probability": res.success_probability,
        "conditioned_state_error": res.conditioned_state_error,
        "conditioned_distribution": res.conditioned_distribution.tolist(),
    }


# -- commands ----------------------------------------------------------------


def cmd_analyze(args) -> int:
    f, label = load_spec(args.input)
    report = _base_report(f, label, args)
    report["plan"] = plan(overlap_u(*build_program(f))).as_dict()
    report["tool"] = _tool()
    _emit(report, None)
    return EXIT_OK


def cmd_synth(args) -> int:
    f, label = load_spec(args.input)
    if args.iterations is not None and args.iterations < 0:
        raise ParseError("--iterations must be non-negative")
    res = synthesize(f, eta_override=args.iterations)
    report = _base_report(f, label, args)
    report["plan"] = res.plan.as_dict()
    report["run"] = _run_block(res)
    report["tool"] = _tool()
    _emit(report, args.output)
    return EXIT_OK


def _sampled(f, label, args, res) -> tuple[dict, int]:
    rep = sample_report(
        res.final_state, f.n, f.target_distribution(), args.shots, args.seed, res.plan
    )
    report = _base_report(f, label, args)
    report["plan"] = res.plan.as_dict()
    report["run"] = _run_block(res)
    report["sampling"] = rep.as_dict()
    report["sampling"]["conditioned_counts"] = {str(k): v for k, v in rep.conditioned_counts.items()}
    report["tool"] = {"version": __version__, "rng_name": rep.rng_name}
    return report, rep.accepted


def cmd_sample(args) -> int:
    if args.shots < 1:
        raise ParseError("--shots must be at least 1")
    f, label = load_spec(args.input)
    res = synthesize(f)
    report, accepted = _sampled(f, label, args, res)
    _emit(report, args.output)
    if accepted == 0:
        print("no shot measured ancilla 0", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_grover(args) -> int:
    if args.shots < 1:
        raise ParseError("--shots must be at least 1")
    try:
        targets = [int(x) for x in args.targets.split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"bad --targets: {exc}") from exc
    if not targets:
        raise ParseError("--targets must name at least one index")
    if len(set(targets)) != len(targets):
        raise ParseError("--targets must be distinct")
    if args.n_qubits < 0 or any(not 0 <= t < (1 << args.n_qubits) for t in targets):
        raise ParseError("--targets must lie in [0, 2^n)")
    f = indicator_spec(args.n_qubits, targets)
    res = synthesize(f)
    report, _ = _sampled(f, None, args, res)
    hits = sum(report["sampling"]["conditioned_counts"].get(str(t), 0) for t in targets)
    report["grover"] = {
        "targets": sorted(targets),
        "k": len(targets),
        "exact_target_probability": probability_of_targets(res.final_state, targets),
        "hit_rate": hits / args.shots,
    }
    _emit(report, args.output)
    return EXIT_OK


def cmd_adaptive(args) -> int:
    f, label = load_spec(args.input)
    if args.max_rounds < 0:
        raise ParseError("--max-rounds must be non-negative")
    build_program(f)
    schedule = RuntimeSchedule(max_rounds=args.max_rounds)
    report = _base_report(f, label, args)
    report["adaptive"] = {"seed": args.seed, "max_rounds": args.max_rounds}
    report["tool"] = _tool()
    try:
        out = adaptive_synthesize(f, args.seed, schedule)
    except AdaptiveFailureError as exc:
        report["adaptive"].update(rounds=exc.rounds, total_iterations=exc.total_iterations, succeeded=False)
        _emit(report, args.output)
        print(f"adaptive protocol exhausted: {exc}", file=sys.stderr)
        return EXIT_ADAPTIVE
    report["adaptive"].update(
        rounds=out.rounds,
        total_iterations=out.total_iterations,
        etas=list(out.etas),
        succeeded=True,
    )
    report["run"] = _run_block(out.result)
    _emit(report, args.output)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    if args.trials < 1:
        raise ParseError("--trials must be at least 1")
    if args.max_qubits < 1:
        raise ParseError("--max-qubits must be at least 1")
    if args.max_qubits > DENSE_CAP:
        raise ResourceError(f"dense oracle limited to {DENSE_CAP} qubits")
    worst = self_check(args.max_qubits, args.trials, args.seed)
    ok = True
    for suite, dev in worst.items():
        tol = SELF_CHECK_TOLERANCES[suite]
        passed = dev <= tol
        ok &= passed
        print(f"{suite:12s} {'PASS' if passed else 'FAIL'}  worst={dev:.3e}  tol={tol:.0e}")
    return EXIT_OK if ok else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ampsynth", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="print the amplification plan for a spec")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synth", help="synthesize and report the conditioned distribution")
    p.add_argument("--input", required=True)
    p.add_argument("--iterations", type=int)
    p.add_argument("--output")
    p.add_argument("--timestamp", action="store_true")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("sample", help="synthesize, measure and compare")
    p.add_argument("--input", required=True)
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output")
    p.add_argument("--timestamp", action="store_true")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("grover", help="k-target search through the indicator construction")
    p.add_argument("--n-qubits", type=int, required=True)
    p.add_argument("--targets", required=True, help="comma-separated indices")
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output")
    p.add_argument("--timestamp", action="store_true")
    p.set_defaults(func=cmd_grover)

    p = sub.add_parser("adaptive", help="synthesize without knowing sum |f|^2")
    p.add_argument("--input", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-rounds", type=int, default=64)
    p.add_argument("--output")
    p.add_argument("--timestamp", action="store_true")
    p.set_defaults(func=cmd_adaptive)

    p = sub.add_parser("oracle-check", help="randomized dense-oracle self check")
    p.add_argument("--max-qubits", type=int, default=5)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except ParseError as exc:
        print(f"ampsynth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArgumentError as exc:
        print(f"ampsynth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpecError, DegenerateOverlapError) as exc:
        print(f"ampsynth: degenerate spec: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ResourceError as exc:
        print(f"ampsynth: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
