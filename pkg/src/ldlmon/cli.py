"""Command line front end.

Subcommands::

    ldlmon compile  FORMULA  [--lang ...] [--format dot|json|ascii]
    ldlmon monitor  FORMULA  --trace FILE [--format ascii|json]
    ldlmon declare  MODEL    --trace FILE [--format ascii|json]
    ldlmon meta     MODEL    --trace FILE [--format ascii|json]
    ldlmon repl     FORMULA  [--lang ...]

Formulas are LDLf by default; ``--lang`` selects LTLf, a bare regular
expression (matched against the whole trace), or a constraint pattern
call such as ``response(pay, get)``.

The alphabet comes from ``--props`` (free interpretations) or
``--tasks`` (one task per step); with neither, names are collected from
the formula itself, in first-use order, as ``--props`` for the logic
languages and ``--tasks`` for patterns.

Traces are files with one event per line: a task name (bare or quoted)
in task mode, a JSON list of the true propositions otherwise.  Blank
lines and ``#`` comments are skipped; ``-`` reads standard input.

Exit status: 0 on success, 1 on a usage or input error, 2 if an
internal invariant broke.
"""
from __future__ import annotations

import argparse
import json
import sys

from .automata import aut_to_json, determinize, guard_for_letters, ldlf_to_nfa, minimize, to_dot
from .declare import (
    MetaMonitor,
    ModelMonitor,
    ModelSyntaxError,
    PATTERNS,
    Timeline,
    _CALL_RE,
    finalize,
    parse_decl,
    parse_meta,
)
from .monitor import Monitor, color, monitor_automaton
from .rv import RVState
from .syntax import (
    Alphabet,
    FormulaSyntaxError,
    parse_ldlf,
    parse_ltlf,
    parse_re,
    print_prop,
    re_to_ldlf,
    scan_names,
)
from .syntax.transforms import ltlf_to_ldlf


class CliError(Exception):
    """A user-facing error: reported on stderr, exit status 1."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message)


def _split_names(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _pattern_formula(text: str, alphabet: Alphabet | None):
    call = _CALL_RE.match(text.strip())
    if call is None:
        raise CliError(f"not a pattern call: {text!r}")
    pattern, arg_text = call.group(1), call.group(2)
    entry = PATTERNS.get(pattern)
    if entry is None:
        known = ", ".join(sorted(PATTERNS))
        raise CliError(f"unknown pattern {pattern!r} (known: {known})")
    builder, arity = entry
    args = [part.strip() for part in arg_text.split(",") if part.strip()]
    if len(args) != arity:
        raise CliError(f"{pattern} takes {arity} task(s), got {len(args)}")
    if alphabet is None:
        alphabet = Alphabet.tasks(args)
    for arg in args:
        if arg not in alphabet:
            raise CliError(f"unknown task {arg!r}")
    return ltlf_to_ldlf(builder(*args)), alphabet


def _resolve_formula(args) -> tuple:
    """Parse args.formula per args.lang; returns (ldlf, alphabet)."""
    alphabet = None
    if getattr(args, "tasks", None):
        alphabet = Alphabet.tasks(_split_names(args.tasks))
    elif getattr(args, "props", None):
        alphabet = Alphabet.of(*_split_names(args.props))
    if args.lang == "pattern":
        return _pattern_formula(args.formula, alphabet)
    if alphabet is None:
        names = scan_names(args.formula)
        if not names:
            raise CliError("cannot infer an alphabet; pass --props or --tasks")
        alphabet = Alphabet.of(*names)
    if args.lang == "ltlf":
        return ltlf_to_ldlf(parse_ltlf(args.formula, alphabet)), alphabet
    if args.lang == "re":
        return re_to_ldlf(parse_re(args.formula, alphabet)), alphabet
    return parse_ldlf(args.formula, alphabet), alphabet


def _read_trace(path: str, alphabet: Alphabet) -> list[frozenset]:
    if path == "-":
        lines = sys.stdin.read().splitlines()
    else:
        try:
            with open(path, encoding="utf-8") as handle:
                lines = handle.read().splitlines()
        except OSError as exc:
            raise CliError(str(exc)) from None
    return [
        event
        for no, line in enumerate(lines, start=1)
        if (event := _parse_event_line(line, alphabet, no)) is not None
    ]


def _parse_event_line(line: str, alphabet: Alphabet, no: int):
    text = line.strip()
    if not text or text.startswith("#"):
        return None
    if text.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CliError(f"trace line {no}: {exc}") from None
        if not all(isinstance(item, str) for item in data):
            raise CliError(f"trace line {no}: expected a list of names")
        event = frozenset(data)
    elif text.startswith('"'):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CliError(f"trace line {no}: {exc}") from None
        event = frozenset({data})
    else:
        event = frozenset({text})
    try:
        alphabet.check_letter(event)
    except ValueError as exc:
        raise CliError(f"trace line {no}: {exc}") from None
    return event


def _event_text(event: frozenset, alphabet: Alphabet) -> str:
    if alphabet.singleton_letters:
        return next(iter(event))
    return "{" + ",".join(sorted(event)) + "}"


def _aut_to_text(aut, colors=None) -> str:
    """Plain text transition listing, guard-compressed like the dot
    output."""
    lines = [f"states: {aut.n_states}  initial: {aut.initial}"]
    for state in range(aut.n_states):
        tags = []
        if state in aut.finals:
            tags.append("accepting")
        if colors is not None:
            tags.append(str(colors[state]))
        suffix = f"  ({', '.join(tags)})" if tags else ""
        lines.append(f"state {state}{suffix}")
        grouped: dict = {}
        row = aut.transitions.get(state, {})
        for letter, targets in row.items():
            if isinstance(targets, int):
                targets = (targets,)
            for target in targets:
                grouped.setdefault(target, []).append(letter)
        for target in sorted(grouped):
            guard = print_prop(guard_for_letters(aut.alphabet, grouped[target]))
            lines.append(f"  {guard} -> {target}")
    return "\n".join(lines) + "\n"


def _write_output(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as exc:
        raise CliError(str(exc)) from None


def _cmd_compile(args) -> int:
    formula, alphabet = _resolve_formula(args)
    dfa = determinize(ldlf_to_nfa(formula, alphabet))
    if not args.no_minimize:
        dfa = minimize(dfa)
    colors = color(dfa).colors if args.colors else None
    if args.format == "dot":
        text = to_dot(dfa, colors)
    elif args.format == "json":
        text = aut_to_json(dfa, colors)
    else:
        text = _aut_to_text(dfa, colors)
    _write_output(text, args.out)
    return 0


def _cmd_monitor(args) -> int:
    formula, alphabet = _resolve_formula(args)
    monitor = Monitor.for_formula(formula, alphabet, lazy=args.lazy)
    events = _read_trace(args.trace, alphabet)
    steps = []
    for event in events:
        state = monitor.step(event)
        steps.append((event, state))
    verdict = finalize(monitor.current_rv())
    begin = Monitor(monitor_automaton(formula, alphabet)).current_rv()
    if args.format == "json":
        payload = {
            "begin": begin.value,
            "steps": [
                {"event": sorted(event), "state": state.value}
                for event, state in steps
            ],
            "final": verdict.value,
        }
        _write_output(json.dumps(payload, indent=2) + "\n", args.out)
        return 0
    lines = [f"begin {begin}"]
    for index, (event, state) in enumerate(steps, start=1):
        lines.append(f"{index} {_event_text(event, alphabet)} {state}")
    lines.append(f"final: {verdict}")
    _write_output("\n".join(lines) + "\n", args.out)
    return 0


def _read_model_file(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise CliError(str(exc)) from None


def _emit_timeline(timeline: Timeline, fmt: str, out: str | None):
    text = timeline.to_json() if fmt == "json" else timeline.render()
    _write_output(text, out)


def _trace_tasks(events) -> list[str]:
    return [next(iter(event)) for event in events]


def _cmd_declare(args) -> int:
    model = parse_decl(_read_model_file(args.model))
    events = _read_trace(args.trace, model.alphabet)
    runner = ModelMonitor(model, lazy=args.lazy)
    timeline = runner.timeline(_trace_tasks(events))
    _emit_timeline(timeline, args.format, args.out)
    return 0


def _cmd_meta(args) -> int:
    model = parse_meta(_read_model_file(args.model))
    events = _read_trace(args.trace, model.alphabet)
    runner = MetaMonitor(model, lazy=args.lazy)
    timeline = runner.timeline(_trace_tasks(events))
    _emit_timeline(timeline, args.format, args.out)
    return 0


def _cmd_repl(args) -> int:
    formula, alphabet = _resolve_formula(args)
    monitor = Monitor.for_formula(formula, alphabet, lazy=args.lazy)
    out = sys.stdout
    out.write(f"begin {monitor.current_rv()}\n")
    out.write("one event per line; :end completes the trace\n")
    for line in sys.stdin:
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if text == ":end":
            break
        try:
            event = _parse_event_line(text, alphabet, 0)
        except CliError as exc:
            out.write(f"error: {exc}\n")
            continue
        state = monitor.step(event)
        out.write(f"{state}")
        forbidden = monitor.forbidden_symbols()
        if forbidden and not state.permanent:
            names = sorted(_event_text(l, alphabet) for l in forbidden)
            out.write(f"  (next must avoid: {', '.join(names)})")
        out.write("\n")
    out.write(f"final: {finalize(monitor.current_rv())}\n")
    return 0


def _add_formula_args(parser, *, lang_choices):
    parser.add_argument("formula", help="the property to work with")
    parser.add_argument(
        "--lang",
        choices=lang_choices,
        default="ldlf",
        help="input language (default: ldlf)",
    )
    parser.add_argument("--props", help="comma-separated proposition names")
    parser.add_argument("--tasks", help="comma-separated task names (one per step)")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="ldlmon",
        description="Compile temporal properties to monitors and run them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_compile = sub.add_parser("compile", help="formula to colored automaton")
    _add_formula_args(p_compile, lang_choices=["ldlf", "ltlf", "re", "pattern"])
    p_compile.add_argument(
        "--format", choices=["ascii", "dot", "json"], default="ascii"
    )
    p_compile.add_argument("--colors", action="store_true", help="color states")
    p_compile.add_argument(
        "--no-minimize", action="store_true", help="skip minimization"
    )
    p_compile.add_argument("--out", help="write here instead of stdout")
    p_compile.set_defaults(run=_cmd_compile)

    p_monitor = sub.add_parser("monitor", help="run one formula over a trace")
    _add_formula_args(p_monitor, lang_choices=["ldlf", "ltlf", "pattern"])
    p_monitor.add_argument("--trace", required=True, help="trace file, - for stdin")
    p_monitor.add_argument("--format", choices=["ascii", "json"], default="ascii")
    p_monitor.add_argument("--lazy", action="store_true", help="color on demand")
    p_monitor.add_argument("--out", help="write here instead of stdout")
    p_monitor.set_defaults(run=_cmd_monitor)

    p_declare = sub.add_parser("declare", help="run a constraint model")
    p_declare.add_argument("model", help="model file")
    p_declare.add_argument("--trace", required=True, help="trace file, - for stdin")
    p_declare.add_argument("--format", choices=["ascii", "json"], default="ascii")
    p_declare.add_argument("--lazy", action="store_true", help="color on demand")
    p_declare.add_argument("--out", help="write here instead of stdout")
    p_declare.set_defaults(run=_cmd_declare)

    p_meta = sub.add_parser("meta", help="run a model with RV-state constraints")
    p_meta.add_argument("model", help="model file")
    p_meta.add_argument("--trace", required=True, help="trace file, - for stdin")
    p_meta.add_argument("--format", choices=["ascii", "json"], default="ascii")
    p_meta.add_argument("--lazy", action="store_true", help="color on demand")
    p_meta.add_argument("--out", help="write here instead of stdout")
    p_meta.set_defaults(run=_cmd_meta)

    p_repl = sub.add_parser("repl", help="monitor events typed interactively")
    _add_formula_args(p_repl, lang_choices=["ldlf", "ltlf", "pattern"])
    p_repl.add_argument("--lazy", action="store_true", help="color on demand")
    p_repl.set_defaults(run=_cmd_repl)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.run(args)
    except CliError as exc:
        print(f"ldlmon: {exc}", file=sys.stderr)
        return 1
    except (FormulaSyntaxError, ModelSyntaxError, ValueError, KeyError) as exc:
        print(f"ldlmon: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0
    except Exception as exc:  # pragma: no cover - invariant breaches only
        print(f"ldlmon: internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
