"""Command-line front door.

    modelkit validate --model m.buml.puml
    modelkit check    --model m.buml.puml --objects pop.objs --ocl rules.ocl
    modelkit generate --model m.buml.puml --target sql --out build/
    modelkit fsm-run  --machine greeter.fsm --scenario hello.scenario
    modelkit infer    --objects pop.objs --out inferred.buml.puml
    modelkit enforce  --model m.buml.puml --objects pop.objs --out pruned.objs

Exit status: 0 all checks pass, 1 model-level failures (invalid model,
conformance or constraint violations, aborted runs, residuals), 2 usage,
parse, or I/O failures.  Reports go to stdout, one line per finding;
error counts are summarized on stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from modelkit.codegen import GeneratorError, builtin_registry
from modelkit.conformance import check_conformance
from modelkit.diagnostics import (
    Diagnostic,
    SYNTAX_CODES,
    Severity,
    has_errors,
)
from modelkit.flex import enforce_conformance, infer_class_model
from modelkit.fsm import StepError, format_trace, parse_machine, parse_scenario, run_scenario
from modelkit.objtext import parse_object_model, serialize_object_model
from modelkit.ocl import check_all, parse_ocl
from modelkit.puml import parse_class_model, serialize_class_model

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _report(diagnostics: list[Diagnostic]) -> None:
    for diag in diagnostics:
        print(diag.format())
    errors = sum(1 for d in diagnostics if d.severity is Severity.ERROR)
    if errors:
        print(f"{errors} error(s)", file=sys.stderr)


def _read(path: str) -> str | None:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path}: {exc.strerror or exc}", file=sys.stderr)
        return None


def _write(path: Path, content: str) -> bool:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(content)
        return True
    except OSError as exc:
        print(f"error: cannot write {path}: {exc.strerror or exc}", file=sys.stderr)
        return False


def _parse_exit(diagnostics: list[Diagnostic]) -> int:
    """2 when anything failed to parse, else 1 for semantic errors."""
    if any(d.code in SYNTAX_CODES and d.severity is Severity.ERROR
           for d in diagnostics):
        return EXIT_USAGE
    return EXIT_FAIL


def _load_class_model(path: str):
    """Returns (model, exit_code); exactly one of the two is meaningful."""
    text = _read(path)
    if text is None:
        return None, EXIT_USAGE
    result = parse_class_model(text, filename=path)
    if result.model is None:
        _report(result.diagnostics)
        return None, _parse_exit(result.diagnostics)
    return result.model, EXIT_OK


def _load_object_model(path: str, model):
    text = _read(path)
    if text is None:
        return None, EXIT_USAGE
    result = parse_object_model(text, model, filename=path)
    if result.model is None:
        _report(result.diagnostics)
        return None, EXIT_USAGE
    return result.model, EXIT_OK


def cmd_validate(args) -> int:
    text = _read(args.model)
    if text is None:
        return EXIT_USAGE
    result = parse_class_model(text, filename=args.model)
    _report(result.diagnostics)
    if result.model is not None:
        return EXIT_OK
    return _parse_exit(result.diagnostics)


def cmd_check(args) -> int:
    model, code = _load_class_model(args.model)
    if model is None:
        return code
    objects, code = _load_object_model(args.objects, model)
    if objects is None:
        return code
    ocl_text = _read(args.ocl)
    if ocl_text is None:
        return EXIT_USAGE
    ocl = parse_ocl(ocl_text, filename=args.ocl)
    if ocl.diagnostics:
        _report(ocl.diagnostics)
        return EXIT_USAGE

    failed = False
    conformance = check_conformance(objects, model)
    _report(conformance)
    failed = has_errors(conformance)

    for result in check_all(ocl.constraints, objects, model):
        if result.message is not None:
            print(f"ERROR {result.constraint} {result.message}")
            failed = True
            continue
        for instance in result.per_instance:
            if instance.verdict == "false":
                print(f"FAIL {result.constraint} {instance.object_id}")
                failed = True
            elif instance.verdict == "error":
                print(f"ERROR {result.constraint} {instance.object_id} "
                      f"{instance.message}")
                failed = True
    return EXIT_FAIL if failed else EXIT_OK


def cmd_generate(args) -> int:
    model, code = _load_class_model(args.model)
    if model is None:
        return code
    registry = builtin_registry()
    try:
        result = registry.generate(args.target, model)
    except GeneratorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out_root = Path(args.out) / args.target
    for artifact in result.artifacts:
        path = out_root / artifact.relative_path
        if not _write(path, artifact.content):
            return EXIT_USAGE
        print(path)
    _report(result.diagnostics)
    return EXIT_FAIL if has_errors(result.diagnostics) else EXIT_OK


def cmd_fsm_run(args) -> int:
    machine_text = _read(args.machine)
    if machine_text is None:
        return EXIT_USAGE
    parsed = parse_machine(machine_text, filename=args.machine)
    if parsed.model is None:
        _report(parsed.diagnostics)
        return EXIT_USAGE
    scenario_text = _read(args.scenario)
    if scenario_text is None:
        return EXIT_USAGE
    steps, diags = parse_scenario(scenario_text, filename=args.scenario)
    if diags:
        _report(diags)
        return EXIT_USAGE
    try:
        session = run_scenario(parsed.model, steps)
    except StepError as exc:
        if exc.session is not None:
            sys.stdout.write(format_trace(exc.session))
        print(f"error: {exc.diagnostic.message}", file=sys.stderr)
        return EXIT_FAIL
    sys.stdout.write(format_trace(session))
    return EXIT_OK


def cmd_infer(args) -> int:
    # Inference needs no class model; parse against an empty placeholder.
    from modelkit.metamodel import ClassModel

    objects, code = _load_object_model(args.objects, ClassModel())
    if objects is None:
        return code
    diagnostics: list[Diagnostic] = []
    model = infer_class_model(objects, diagnostics)
    _report(diagnostics)
    if not _write(Path(args.out), serialize_class_model(model)):
        return EXIT_USAGE
    print(args.out)
    return EXIT_OK


def cmd_enforce(args) -> int:
    model, code = _load_class_model(args.model)
    if model is None:
        return code
    objects, code = _load_object_model(args.objects, model)
    if objects is None:
        return code
    pruned, diagnostics = enforce_conformance(objects, model)
    _report(diagnostics)
    if not _write(Path(args.out), serialize_object_model(pruned)):
        return EXIT_USAGE
    print(args.out)
    return EXIT_FAIL if has_errors(diagnostics) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modelkit",
        description="Validate, check, and transform class/object models.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="well-formedness of a class model")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check",
                       help="conformance plus OCL invariants over objects")
    p.add_argument("--model", required=True)
    p.add_argument("--objects", required=True)
    p.add_argument("--ocl", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("generate", help="run a code generator")
    p.add_argument("--model", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("fsm-run", help="run a scenario against a machine")
    p.add_argument("--machine", required=True)
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=cmd_fsm_run)

    p = sub.add_parser("infer", help="infer a class model from objects")
    p.add_argument("--objects", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("enforce", help="prune non-conforming elements")
    p.add_argument("--model", required=True)
    p.add_argument("--objects", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_enforce)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize anything else.
        return EXIT_USAGE if exc.code else EXIT_OK
    return args.func(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
