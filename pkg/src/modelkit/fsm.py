"""Finite-state machines with guarded, event-triggered transitions.

Machines are immutable; stepping is functional (a step returns a new
session).  State bodies are symbolic action identifiers recorded in the
trace, for the host to bind; guards are expressions over session
variables, written in the same language as OCL invariants.

Machine file format (line oriented, `#` comments):

    machine <name>
    state <name> [action <id>]
    initial <name>
    event <name>
    trans <src> -> <dst> on <event> [when <expr>]

Scenario files hold one `<event> [k=v ...]` line per step; payload values
use the object-model literal syntax.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from modelkit.diagnostics import Diagnostic, SourceSpan, error, has_errors
from modelkit.metamodel import BoolV, ClassModel, ObjectModel, Value
from modelkit.objtext import parse_value
from modelkit.ocl.interp import Binding, OclRuntimeError, evaluate_expression
from modelkit.ocl.nodes import OclExpr
from modelkit.ocl.parser import parse_expression
from modelkit.puml import ParseResult


@dataclass
class State:
    name: str
    body_action: Optional[str] = None


@dataclass
class Transition:
    source: str
    target: str
    event: str
    guard: Optional[OclExpr] = None
    guard_text: Optional[str] = None


@dataclass
class StateMachine:
    name: str
    states: list[State] = field(default_factory=list)
    events: list[str] = field(default_factory=list)
    transitions: list[Transition] = field(default_factory=list)
    initial_state: str = ""

    def state_named(self, name: str) -> Optional[State]:
        for s in self.states:
            if s.name == name:
                return s
        return None


@dataclass(frozen=True)
class TraceEntry:
    event: str
    source: str
    target: str
    actions_fired: tuple[str, ...] = ()


@dataclass
class Session:
    current_state: str
    variables: dict[str, Value] = field(default_factory=dict)
    trace: list[TraceEntry] = field(default_factory=list)


class StepError(Exception):
    """A step that could not be taken; the session is left unchanged."""

    def __init__(self, diagnostic: Diagnostic, session: Optional[Session] = None):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic
        self.session = session


def validate_machine(machine: StateMachine) -> list[Diagnostic]:
    """Structural checks plus the determinism rule: per (state, event), at
    most one guardless transition; guarded ones fire in declaration order."""
    diags: list[Diagnostic] = []
    seen_states: set[str] = set()
    for state in machine.states:
        if state.name in seen_states:
            diags.append(error("dup-state",
                               f"state '{state.name}' declared twice",
                               subject=state.name))
        seen_states.add(state.name)

    if not machine.initial_state:
        diags.append(error("missing-initial", "no initial state declared"))
    elif machine.initial_state not in seen_states:
        diags.append(error("unknown-state",
                           f"initial state '{machine.initial_state}' does not exist",
                           subject=machine.initial_state))

    events = set(machine.events)
    guardless: set[tuple[str, str]] = set()
    for t in machine.transitions:
        for endpoint in (t.source, t.target):
            if endpoint not in seen_states:
                diags.append(error("unknown-state",
                                   f"transition references undeclared state "
                                   f"'{endpoint}'",
                                   subject=endpoint))
        if t.event not in events:
            diags.append(error("unknown-event",
                               f"transition on undeclared event '{t.event}'",
                               subject=t.event))
        if t.guard is None:
            key = (t.source, t.event)
            if key in guardless:
                diags.append(error(
                    "nondeterministic",
                    f"two guardless transitions from '{t.source}' on '{t.event}'",
                    subject=t.source))
            guardless.add(key)
    return diags


_EMPTY_OBJECTS = ObjectModel(name="none")
_EMPTY_MODEL = ClassModel(name="none")


def _guard_holds(transition: Transition, variables: dict[str, Value]) -> bool:
    if transition.guard is None:
        return True
    env = Binding(dict(variables))
    try:
        value = evaluate_expression(transition.guard, env, _EMPTY_OBJECTS,
                                    _EMPTY_MODEL)
    except OclRuntimeError as exc:
        raise StepError(error(
            "guard-error",
            f"guard '{transition.guard_text or '?'}' failed: {exc}")) from exc
    if not isinstance(value, BoolV):
        raise StepError(error(
            "guard-error",
            f"guard '{transition.guard_text or '?'}' did not yield a boolean"))
    return value.value


def step(machine: StateMachine, session: Session, event: str,
         payload: Optional[dict[str, Value]] = None) -> Session:
    """Take one step: merge the payload, then fire the first transition out
    of the current state on `event` whose guard holds.  No match is a
    recorded no-op.  Undeclared events and guard errors raise StepError and
    leave the session untouched, payload merge included."""
    if event not in machine.events:
        raise StepError(error("undeclared-event",
                              f"event '{event}' is not declared"), session)
    variables = dict(session.variables)
    if payload:
        variables.update(payload)

    for t in machine.transitions:
        if t.source != session.current_state or t.event != event:
            continue
        try:
            holds = _guard_holds(t, variables)
        except StepError as exc:
            raise StepError(exc.diagnostic, session) from None
        if not holds:
            continue
        target = machine.state_named(t.target)
        actions = (target.body_action,) if target and target.body_action else ()
        entry = TraceEntry(event=event, source=session.current_state,
                           target=t.target, actions_fired=actions)
        return Session(current_state=t.target, variables=variables,
                       trace=session.trace + [entry])

    entry = TraceEntry(event=event, source=session.current_state,
                       target=session.current_state, actions_fired=())
    return Session(current_state=session.current_state, variables=variables,
                   trace=session.trace + [entry])


def new_session(machine: StateMachine) -> Session:
    return Session(current_state=machine.initial_state)


def run_scenario(machine: StateMachine,
                 events: list[tuple[str, dict[str, Value]]]) -> Session:
    """Fold step over a scenario from a fresh session.  The first failing
    step raises StepError carrying the partial session."""
    session = new_session(machine)
    for event, payload in events:
        try:
            session = step(machine, session, event, payload)
        except StepError as exc:
            raise StepError(exc.diagnostic, session) from None
    return session


def format_trace(session: Session) -> str:
    """One line per trace entry: `<event> <from> -> <to> [actions]`."""
    lines = []
    for entry in session.trace:
        actions = ",".join(entry.actions_fired)
        lines.append(f"{entry.event} {entry.source} -> {entry.target} [{actions}]")
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# File formats

_MACHINE_RE = re.compile(r"^machine\s+(?P<name>[A-Za-z_]\w*)$")
_STATE_RE = re.compile(
    r"^state\s+(?P<name>[A-Za-z_]\w*)(?:\s+action\s+(?P<action>[A-Za-z_]\w*))?$")
_INITIAL_RE = re.compile(r"^initial\s+(?P<name>[A-Za-z_]\w*)$")
_EVENT_RE = re.compile(r"^event\s+(?P<name>[A-Za-z_]\w*)$")
_TRANS_RE = re.compile(
    r"^trans\s+(?P<src>[A-Za-z_]\w*)\s*->\s*(?P<dst>[A-Za-z_]\w*)"
    r"\s+on\s+(?P<event>[A-Za-z_]\w*)(?:\s+when\s+(?P<guard>.+))?$")


def _strip_hash_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def parse_machine(text: str, filename: str = "<machine>") -> ParseResult:
    """Parse and validate a machine file; the machine is present iff there
    are no errors."""
    diagnostics: list[Diagnostic] = []
    machine = StateMachine(name="machine")

    def err(message: str, lineno: int, code: str = "syntax") -> None:
        diagnostics.append(error(code, message, SourceSpan(filename, lineno)))

    named = False
    for idx, raw in enumerate(text.split("\n")):
        lineno = idx + 1
        line = _strip_hash_comment(raw).strip()
        if not line:
            continue
        m = _MACHINE_RE.match(line)
        if m:
            if named:
                err("machine name declared twice", lineno)
            machine.name = m.group("name")
            named = True
            continue
        m = _STATE_RE.match(line)
        if m:
            machine.states.append(State(name=m.group("name"),
                                        body_action=m.group("action")))
            continue
        m = _INITIAL_RE.match(line)
        if m:
            machine.initial_state = m.group("name")
            continue
        m = _EVENT_RE.match(line)
        if m:
            if m.group("name") not in machine.events:
                machine.events.append(m.group("name"))
            continue
        m = _TRANS_RE.match(line)
        if m:
            guard_text = m.group("guard")
            guard = None
            if guard_text is not None:
                guard, guard_diags = parse_expression(guard_text.strip(), filename)
                if guard is None:
                    err(f"malformed guard: {guard_diags[0].message}", lineno)
                    continue
            machine.transitions.append(Transition(
                source=m.group("src"), target=m.group("dst"),
                event=m.group("event"), guard=guard,
                guard_text=guard_text.strip() if guard_text else None))
            continue
        err(f"unrecognized statement: {line}", lineno)

    if not named:
        err("missing machine declaration", 1)
    if not has_errors(diagnostics):
        diagnostics.extend(validate_machine(machine))
    return ParseResult(machine if not has_errors(diagnostics) else None,
                       diagnostics)


_PAYLOAD_RE = re.compile(r"(?P<key>[A-Za-z_]\w*)=(?P<value>\"[^\"]*\"|\S+)")


def parse_scenario(text: str, filename: str = "<scenario>"
                   ) -> tuple[list[tuple[str, dict[str, Value]]], list[Diagnostic]]:
    """Parse a scenario file into (event, payload) steps."""
    steps: list[tuple[str, dict[str, Value]]] = []
    diagnostics: list[Diagnostic] = []
    for idx, raw in enumerate(text.split("\n")):
        lineno = idx + 1
        line = _strip_hash_comment(raw).strip()
        if not line:
            continue
        parts = line.split(None, 1)
        event = parts[0]
        if not re.match(r"^[A-Za-z_]\w*$", event):
            diagnostics.append(error("syntax", f"malformed event name '{event}'",
                                     SourceSpan(filename, lineno)))
            continue
        payload: dict[str, Value] = {}
        rest = parts[1] if len(parts) > 1 else ""
        pos = 0
        ok = True
        while pos < len(rest):
            if rest[pos].isspace():
                pos += 1
                continue
            m = _PAYLOAD_RE.match(rest, pos)
            if m is None:
                diagnostics.append(error(
                    "syntax", f"malformed payload near: {rest[pos:]}",
                    SourceSpan(filename, lineno)))
                ok = False
                break
            value = parse_value(m.group("value"))
            if value is None:
                diagnostics.append(error(
                    "bad-value",
                    f"malformed payload value for '{m.group('key')}'",
                    SourceSpan(filename, lineno)))
                ok = False
                break
            payload[m.group("key")] = value
            pos = m.end()
        if ok:
            steps.append((event, payload))
    return steps, diagnostics
