"""Textual class-model syntax: a PlantUML subset.

Supported declarations between @startuml/@enduml:

    [abstract] class Name {            attributes: `name : type [{id}]`,
      code : str {id}                  optional +/-/# visibility marker
    }                                  (accepted and ignored)
    enum Name { LIT ... }
    A "1" -- "0..*" B : name           association (also *-- / --* for
    A <|-- B                           composition); generalization, with
                                       the general class on the left

Multiplicities: "1", "*", "0..1", "1..*", "n..m"; absent means "*".
Unnamed associations get a generated `<EndA>_<EndB>_<k>` name.
Comments run from an apostrophe to end of line.  Anything else is
reported as `unsupported-construct` and parsing resumes at the next
declaration, so one pass collects every error it can.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from modelkit.diagnostics import Diagnostic, SourceSpan, error, has_errors
from modelkit.metamodel import (
    Association,
    AssociationEnd,
    ClassDef,
    ClassModel,
    EnumDef,
    Generalization,
    Multiplicity,
    ObjectModel,
    Property,
    validate_class_model,
)


@dataclass
class ParseResult:
    """Outcome of one parse: a model only when nothing went wrong."""

    model: Optional[Union[ClassModel, ObjectModel]]
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.model is not None


# PlantUML constructs we recognize but deliberately do not model.
_FOREIGN_KEYWORDS = (
    "interface", "note", "package", "namespace", "skinparam", "title",
    "hide", "show", "legend", "actor", "usecase", "participant", "entity",
    "left", "right", "together", "@startmindmap", "@startgantt",
)

_CLASS_RE = re.compile(
    r"^(?P<abstract>abstract\s+)?class\s+(?P<name>[A-Za-z_]\w*)\s*\{$")
_ATTR_RE = re.compile(
    r"^(?:[+\-#]\s*)?(?P<name>[A-Za-z_]\w*)\s*:\s*(?P<type>[A-Za-z_]\w*)"
    r"\s*(?P<id>\{id\})?$")
_ENUM_RE = re.compile(r"^enum\s+(?P<name>[A-Za-z_]\w*)\s*\{$")
_LITERAL_RE = re.compile(r"^[A-Za-z_]\w*$")
_GEN_RE = re.compile(
    r"^(?P<general>[A-Za-z_]\w*)\s*<\|--\s*(?P<specific>[A-Za-z_]\w*)$")
_ASSOC_RE = re.compile(
    r'^(?P<left>[A-Za-z_]\w*)\s*(?:"(?P<m0>[^"]*)"\s*)?'
    r"(?P<conn>\*--|--\*|--)"
    r'\s*(?:"(?P<m1>[^"]*)"\s*)?(?P<right>[A-Za-z_]\w*)'
    r"\s*(?::\s*(?P<name>[A-Za-z_]\w*))?$")
_MULT_RE = re.compile(r"^(?:(?P<star>\*)|(?P<single>\d+)|(?P<lo>\d+)\.\.(?P<hi>\d+|\*))$")


def _strip_comment(line: str) -> str:
    pos = line.find("'")
    return line if pos < 0 else line[:pos]


def _parse_multiplicity(spec: str) -> Optional[Multiplicity]:
    m = _MULT_RE.match(spec.strip())
    if m is None:
        return None
    if m.group("star"):
        return Multiplicity(0, None)
    if m.group("single") is not None:
        n = int(m.group("single"))
        return Multiplicity(n, n)
    lo = int(m.group("lo"))
    hi = m.group("hi")
    return Multiplicity(lo, None if hi == "*" else int(hi))


def render_multiplicity(m: Multiplicity) -> str:
    if m.upper is not None and m.lower == m.upper:
        return str(m.lower)
    upper = "*" if m.upper is None else str(m.upper)
    return f"{m.lower}..{upper}"


class _ClassModelParser:
    def __init__(self, text: str, filename: str):
        self.lines = text.split("\n")
        self.filename = filename
        self.diagnostics: list[Diagnostic] = []
        self.model = ClassModel(name="model")
        self.unnamed_counters: dict[tuple[str, str], int] = {}

    def span(self, lineno: int, column: int = 1) -> SourceSpan:
        return SourceSpan(self.filename, lineno, column)

    def err(self, code: str, message: str, lineno: int, column: int = 1) -> None:
        self.diagnostics.append(error(code, message, self.span(lineno, column)))

    def parse(self) -> ParseResult:
        idx = 0
        n = len(self.lines)
        started = False
        ended = False
        while idx < n:
            lineno = idx + 1
            raw = _strip_comment(self.lines[idx])
            line = raw.strip()
            idx += 1
            if not line:
                continue
            if not started:
                if line == "@startuml":
                    started = True
                else:
                    self.err("syntax", "expected @startuml", lineno)
                    started = True  # recover: treat the rest as the body
                    idx -= 1
                continue
            if line == "@enduml":
                ended = True
                continue
            if ended:
                self.err("syntax", "content after @enduml", lineno)
                break
            idx = self.parse_decl(line, lineno, idx)
        if not started:
            self.err("syntax", "expected @startuml", max(n, 1))
        elif not ended:
            self.err("syntax", "missing @enduml", n)

        if not has_errors(self.diagnostics):
            semantic = validate_class_model(self.model)
            self.diagnostics.extend(semantic)
        model = self.model if not has_errors(self.diagnostics) else None
        return ParseResult(model, self.diagnostics)

    def parse_decl(self, line: str, lineno: int, idx: int) -> int:
        """Parse one declaration starting at `line`; return the next index."""
        m = _CLASS_RE.match(line)
        if m:
            return self.parse_class_body(m, lineno, idx)
        m = _ENUM_RE.match(line)
        if m:
            return self.parse_enum_body(m, lineno, idx)
        m = _GEN_RE.match(line)
        if m:
            self.model.generalizations.append(Generalization(
                general=m.group("general"), specific=m.group("specific"),
                span=self.span(lineno)))
            return idx
        m = _ASSOC_RE.match(line)
        if m:
            self.parse_assoc(m, lineno)
            return idx

        first = line.split()[0]
        if "<<" in line or first in _FOREIGN_KEYWORDS or first.startswith("@start"):
            self.err("unsupported-construct",
                     f"construct '{first}' is outside the supported subset", lineno)
        elif first in ("class", "abstract", "enum"):
            self.err("syntax", f"malformed {first} declaration", lineno)
            # Skip the body block, if one follows.
            if line.endswith("{"):
                return self.skip_block(idx)
        else:
            self.err("syntax", f"unrecognized declaration: {line}", lineno)
        return idx

    def skip_block(self, idx: int) -> int:
        while idx < len(self.lines):
            if _strip_comment(self.lines[idx]).strip() == "}":
                return idx + 1
            idx += 1
        return idx

    def parse_class_body(self, m: re.Match, lineno: int, idx: int) -> int:
        cls = ClassDef(name=m.group("name"),
                       is_abstract=m.group("abstract") is not None,
                       span=self.span(lineno))
        self.model.classes.append(cls)
        while idx < len(self.lines):
            body_lineno = idx + 1
            line = _strip_comment(self.lines[idx]).strip()
            idx += 1
            if not line:
                continue
            if line == "}":
                return idx
            am = _ATTR_RE.match(line)
            if am is None:
                self.err("syntax",
                         f"malformed attribute in class '{cls.name}': {line}",
                         body_lineno)
                continue
            cls.properties.append(Property(
                name=am.group("name"), type_name=am.group("type"),
                is_id=am.group("id") is not None, span=self.span(body_lineno)))
        self.err("syntax", f"class '{cls.name}' body is never closed", len(self.lines))
        return idx

    def parse_enum_body(self, m: re.Match, lineno: int, idx: int) -> int:
        enum = EnumDef(name=m.group("name"), span=self.span(lineno))
        self.model.enumerations.append(enum)
        while idx < len(self.lines):
            body_lineno = idx + 1
            line = _strip_comment(self.lines[idx]).strip()
            idx += 1
            if not line:
                continue
            if line == "}":
                return idx
            if _LITERAL_RE.match(line) is None:
                self.err("syntax",
                         f"malformed literal in enum '{enum.name}': {line}",
                         body_lineno)
                continue
            enum.literals.append(line)
        self.err("syntax", f"enum '{enum.name}' body is never closed", len(self.lines))
        return idx

    def parse_assoc(self, m: re.Match, lineno: int) -> None:
        left, right = m.group("left"), m.group("right")
        mults = []
        for spec in (m.group("m0"), m.group("m1")):
            if spec is None:
                mults.append(Multiplicity(0, None))
            else:
                parsed = _parse_multiplicity(spec)
                if parsed is None:
                    self.err("syntax", f"malformed multiplicity \"{spec}\"", lineno)
                    parsed = Multiplicity(0, None)
                mults.append(parsed)
        conn = m.group("conn")
        name = m.group("name")
        if name is None:
            key = (left, right)
            self.unnamed_counters[key] = self.unnamed_counters.get(key, 0) + 1
            name = f"{left}_{right}_{self.unnamed_counters[key]}"
        self.model.associations.append(Association(
            name=name,
            ends=(
                AssociationEnd(target=left, multiplicity=mults[0],
                               is_composite=(conn == "*--")),
                AssociationEnd(target=right, multiplicity=mults[1],
                               is_composite=(conn == "--*")),
            ),
            span=self.span(lineno)))


def parse_class_model(text: str, filename: str = "<input>") -> ParseResult:
    """Parse class-model text; the model is present iff there are no errors."""
    return _ClassModelParser(text, filename).parse()


def serialize_class_model(model: ClassModel) -> str:
    """Canonical text for a valid model; parsing it back yields an equal model.

    Declarations are emitted in model order (classes, enumerations,
    associations, generalizations), attributes one per line at two-space
    indent, multiplicities always explicit.
    """
    problems = validate_class_model(model)
    if has_errors(problems):
        raise ValueError("cannot serialize invalid model: "
                         + "; ".join(d.message for d in problems[:3]))
    out: list[str] = ["@startuml"]
    for cls in model.classes:
        prefix = "abstract class" if cls.is_abstract else "class"
        out.append(f"{prefix} {cls.name} {{")
        for prop in cls.properties:
            suffix = " {id}" if prop.is_id else ""
            out.append(f"  {prop.name} : {prop.type_name}{suffix}")
        out.append("}")
    for enum in model.enumerations:
        out.append(f"enum {enum.name} {{")
        for lit in enum.literals:
            out.append(f"  {lit}")
        out.append("}")
    for assoc in model.associations:
        e0, e1 = assoc.ends
        if e0.is_composite:
            conn = "*--"
        elif e1.is_composite:
            conn = "--*"
        else:
            conn = "--"
        out.append(f'{e0.target} "{render_multiplicity(e0.multiplicity)}" {conn} '
                   f'"{render_multiplicity(e1.multiplicity)}" {e1.target} : {assoc.name}')
    for gen in model.generalizations:
        out.append(f"{gen.general} <|-- {gen.specific}")
    out.append("@enduml")
    return "\n".join(out) + "\n"
