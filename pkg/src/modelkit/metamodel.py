"""Core model types: class models, object models, and values.

Models are plain dataclasses, treated as immutable once built; every
operation over them is a pure function.  Source spans attached by the text
parsers are excluded from equality so that structural comparison ignores
where a model came from.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from modelkit.diagnostics import Diagnostic, SourceSpan, error

PRIMITIVE_TYPES = ("int", "float", "str", "bool")

IDENTIFIER_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def is_identifier(name: str) -> bool:
    return bool(IDENTIFIER_RE.match(name))


# ---------------------------------------------------------------------------
# Values

@dataclass(frozen=True)
class Value:
    """Base of the value union stored in object slots."""


@dataclass(frozen=True)
class IntV(Value):
    value: int


@dataclass(frozen=True)
class FloatV(Value):
    value: float


@dataclass(frozen=True)
class StrV(Value):
    value: str


@dataclass(frozen=True)
class BoolV(Value):
    value: bool


@dataclass(frozen=True)
class EnumV(Value):
    enum: str
    literal: str


@dataclass(frozen=True)
class NullV(Value):
    pass


NULL = NullV()


# ---------------------------------------------------------------------------
# Class model

@dataclass(frozen=True)
class Multiplicity:
    """[lower, upper] bound on links at an association end; upper None = unbounded."""

    lower: int = 0
    upper: Optional[int] = None

    def admits(self, count: int) -> bool:
        return count >= self.lower and (self.upper is None or count <= self.upper)

    @classmethod
    def many(cls) -> "Multiplicity":
        return cls(0, None)

    @classmethod
    def one(cls) -> "Multiplicity":
        return cls(1, 1)


@dataclass
class Property:
    name: str
    type_name: str  # one of PRIMITIVE_TYPES, a class name, or an enum name
    is_id: bool = False
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass
class ClassDef:
    name: str
    is_abstract: bool = False
    properties: list[Property] = field(default_factory=list)
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass
class EnumDef:
    name: str
    literals: list[str] = field(default_factory=list)
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass
class AssociationEnd:
    target: str  # class name
    role: Optional[str] = None
    multiplicity: Multiplicity = field(default_factory=Multiplicity.many)
    is_composite: bool = False

    def nav_name(self) -> str:
        """Name this end answers to when navigating: role, or class name."""
        return self.role if self.role is not None else self.target


@dataclass
class Association:
    name: str
    ends: tuple[AssociationEnd, AssociationEnd]
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass
class Generalization:
    general: str
    specific: str
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass
class ClassModel:
    name: str = "model"
    classes: list[ClassDef] = field(default_factory=list)
    enumerations: list[EnumDef] = field(default_factory=list)
    associations: list[Association] = field(default_factory=list)
    generalizations: list[Generalization] = field(default_factory=list)

    def class_named(self, name: str) -> Optional[ClassDef]:
        for c in self.classes:
            if c.name == name:
                return c
        return None

    def enum_named(self, name: str) -> Optional[EnumDef]:
        for e in self.enumerations:
            if e.name == name:
                return e
        return None

    def association_named(self, name: str) -> Optional[Association]:
        for a in self.associations:
            if a.name == name:
                return a
        return None


# ---------------------------------------------------------------------------
# Object model

@dataclass
class AttributeLink:
    property_name: str
    value: Value
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass
class ObjectDef:
    id: str
    classifier: str
    slots: list[AttributeLink] = field(default_factory=list)
    span: Optional[SourceSpan] = field(default=None, compare=False)

    def slot(self, property_name: str) -> Optional[AttributeLink]:
        for s in self.slots:
            if s.property_name == property_name:
                return s
        return None


@dataclass(frozen=True)
class LinkEnd:
    object_id: str


@dataclass
class Link:
    association_name: str
    ends: tuple[LinkEnd, LinkEnd]
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass
class ObjectModel:
    name: str = "objects"
    objects: list[ObjectDef] = field(default_factory=list)
    links: list[Link] = field(default_factory=list)

    def object_named(self, object_id: str) -> Optional[ObjectDef]:
        for o in self.objects:
            if o.id == object_id:
                return o
        return None


# ---------------------------------------------------------------------------
# Inheritance helpers

def ancestors(model: ClassModel, class_name: str) -> list[str]:
    """Ancestor class names, general-most first, each listed once.

    Tolerates cyclic generalization graphs by never revisiting a class, so
    it is safe to call while validation is still pending.
    """
    order: list[str] = []
    seen: set[str] = set()

    def visit(name: str) -> None:
        for gen in model.generalizations:
            if gen.specific == name and gen.general not in seen and gen.general != name:
                seen.add(gen.general)
                visit(gen.general)
                order.append(gen.general)

    seen.add(class_name)
    visit(class_name)
    return order


def all_properties(model: ClassModel, class_name: str) -> list[Property]:
    """Own properties preceded by inherited ones, general-most first."""
    cls = model.class_named(class_name)
    if cls is None:
        raise ValueError(f"unknown class '{class_name}'")
    props: list[Property] = []
    for anc in ancestors(model, class_name):
        anc_cls = model.class_named(anc)
        if anc_cls is not None:
            props.extend(anc_cls.properties)
    props.extend(cls.properties)
    return props


def is_subclass_of(model: ClassModel, sub: str, sup: str) -> bool:
    """True iff sup is reachable from sub via generalizations, or sub == sup."""
    if model.class_named(sub) is None:
        raise ValueError(f"unknown class '{sub}'")
    if model.class_named(sup) is None:
        raise ValueError(f"unknown class '{sup}'")
    return sub == sup or sup in ancestors(model, sub)


def type_kind(model: ClassModel, type_name: str) -> Optional[str]:
    """Resolve a type reference: 'primitive', 'class', 'enum', or None.

    Primitive names are reserved and win over same-named classes or enums.
    """
    if type_name in PRIMITIVE_TYPES:
        return "primitive"
    if model.class_named(type_name) is not None:
        return "class"
    if model.enum_named(type_name) is not None:
        return "enum"
    return None


# ---------------------------------------------------------------------------
# Well-formedness

def _generalization_cycles(model: ClassModel) -> list[list[str]]:
    """Strongly connected components of size >= 2 in the generalization graph."""
    names = [c.name for c in model.classes]
    edges: dict[str, list[str]] = {n: [] for n in names}
    for gen in model.generalizations:
        if gen.specific in edges and gen.general in edges and gen.specific != gen.general:
            edges[gen.specific].append(gen.general)

    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    sccs: list[list[str]] = []
    counter = [0]

    def connect(v: str) -> None:
        index[v] = lowlink[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on_stack.add(v)
        for w in edges[v]:
            if w not in index:
                connect(w)
                lowlink[v] = min(lowlink[v], lowlink[w])
            elif w in on_stack:
                lowlink[v] = min(lowlink[v], index[w])
        if lowlink[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on_stack.discard(w)
                comp.append(w)
                if w == v:
                    break
            if len(comp) > 1:
                sccs.append(comp)

    for n in names:
        if n not in index:
            connect(n)
    decl_pos = {n: i for i, n in enumerate(names)}
    for comp in sccs:
        comp.sort(key=lambda n: decl_pos[n])
    sccs.sort(key=lambda comp: decl_pos[comp[0]])
    return sccs


def validate_class_model(model: ClassModel) -> list[Diagnostic]:
    """Check every class-model invariant; empty result means well-formed.

    Diagnostics are ordered by (declaration order, code), where declaration
    order runs classes, then enumerations, then associations, then
    generalizations.
    """
    found: list[tuple[int, str, Diagnostic]] = []
    n_classes = len(model.classes)
    n_enums = len(model.enumerations)
    n_assocs = len(model.associations)

    def add(order: int, diag: Diagnostic) -> None:
        found.append((order, diag.code, diag))

    if not is_identifier(model.name):
        add(-1, error("bad-name", f"model name '{model.name}' is not an identifier"))

    # One namespace for classes, enumerations, and associations.
    seen: dict[str, str] = {}
    named = (
        [(i, "class", c.name, c.span) for i, c in enumerate(model.classes)]
        + [(n_classes + i, "enum", e.name, e.span)
           for i, e in enumerate(model.enumerations)]
        + [(n_classes + n_enums + i, "association", a.name, a.span)
           for i, a in enumerate(model.associations)]
    )
    for order, kind, name, span in named:
        if not is_identifier(name):
            add(order, error("bad-name", f"{kind} name '{name}' is not an identifier",
                             span, subject=name))
        if name in seen:
            add(order, error("dup-name",
                             f"{kind} '{name}' clashes with {seen[name]} of the same name",
                             span, subject=name))
        else:
            seen[name] = kind

    cycles = _generalization_cycles(model)
    cyclic = {name for comp in cycles for name in comp}

    for ci, cls in enumerate(model.classes):
        own: set[str] = set()
        for prop in cls.properties:
            if not is_identifier(prop.name):
                add(ci, error("bad-name",
                              f"property name '{prop.name}' is not an identifier",
                              prop.span, subject=f"{cls.name}.{prop.name}"))
            if prop.name in own:
                add(ci, error("dup-property",
                              f"property '{prop.name}' declared twice in class '{cls.name}'",
                              prop.span, subject=f"{cls.name}.{prop.name}"))
            own.add(prop.name)
            kind = type_kind(model, prop.type_name)
            if kind is None:
                add(ci, error("bad-type",
                              f"property '{cls.name}.{prop.name}' references unknown type "
                              f"'{prop.type_name}'",
                              prop.span, subject=f"{cls.name}.{prop.name}"))
            elif prop.is_id and kind != "primitive":
                add(ci, error("id-not-primitive",
                              f"identifier property '{cls.name}.{prop.name}' must have a "
                              f"primitive type, not '{prop.type_name}'",
                              prop.span, subject=f"{cls.name}.{prop.name}"))

        # Shadowing of inherited properties, skipped for classes on a cycle
        # (their ancestry is not well defined until the cycle is fixed).
        if cls.name not in cyclic and not (set(ancestors(model, cls.name)) & cyclic):
            inherited_from: dict[str, str] = {}
            for anc in ancestors(model, cls.name):
                anc_cls = model.class_named(anc)
                if anc_cls is None:
                    continue
                for prop in anc_cls.properties:
                    if prop.name in inherited_from and inherited_from[prop.name] != anc:
                        # Clash between two unrelated ancestors: report at the
                        # most specific class where both lines first meet.
                        direct = [g.general for g in model.generalizations
                                  if g.specific == cls.name]
                        meets_below = any(
                            inherited_from[prop.name] in ([d] + ancestors(model, d))
                            and anc in ([d] + ancestors(model, d))
                            for d in direct
                        )
                        if not meets_below:
                            add(ci, error(
                                "dup-property",
                                f"class '{cls.name}' inherits property '{prop.name}' "
                                f"from both '{inherited_from[prop.name]}' and '{anc}'",
                                cls.span, subject=f"{cls.name}.{prop.name}"))
                    else:
                        inherited_from[prop.name] = anc
            for prop in cls.properties:
                if prop.name in inherited_from:
                    add(ci, error("dup-property",
                                  f"property '{cls.name}.{prop.name}' redeclares a property "
                                  f"inherited from '{inherited_from[prop.name]}'",
                                  prop.span, subject=f"{cls.name}.{prop.name}"))

    for ei, enum in enumerate(model.enumerations):
        order = n_classes + ei
        if not enum.literals:
            add(order, error("no-literals",
                             f"enumeration '{enum.name}' has no literals",
                             enum.span, subject=enum.name))
        lits: set[str] = set()
        for lit in enum.literals:
            if not is_identifier(lit):
                add(order, error("bad-name",
                                 f"enumeration literal '{lit}' is not an identifier",
                                 enum.span, subject=f"{enum.name}.{lit}"))
            if lit in lits:
                add(order, error("dup-literal",
                                 f"literal '{lit}' repeated in enumeration '{enum.name}'",
                                 enum.span, subject=f"{enum.name}.{lit}"))
            lits.add(lit)

    for ai, assoc in enumerate(model.associations):
        order = n_classes + n_enums + ai
        if len(assoc.ends) != 2:
            add(order, error("assoc-ends",
                             f"association '{assoc.name}' must have exactly two ends",
                             assoc.span, subject=assoc.name))
            continue
        for end in assoc.ends:
            if model.class_named(end.target) is None:
                add(order, error("unknown-class",
                                 f"association '{assoc.name}' end references unknown class "
                                 f"'{end.target}'",
                                 assoc.span, subject=assoc.name))
            m = end.multiplicity
            if m.lower < 0 or (m.upper is not None and m.upper < 1):
                add(order, error("bad-mult",
                                 f"association '{assoc.name}' end has malformed multiplicity "
                                 f"bounds",
                                 assoc.span, subject=assoc.name))
            elif m.upper is not None and m.lower > m.upper:
                add(order, error("bad-mult",
                                 f"association '{assoc.name}' end multiplicity has "
                                 f"lower {m.lower} > upper {m.upper}",
                                 assoc.span, subject=assoc.name))
            if end.role is not None and not is_identifier(end.role):
                add(order, error("bad-name",
                                 f"role '{end.role}' on association '{assoc.name}' is not "
                                 f"an identifier",
                                 assoc.span, subject=assoc.name))
        r0, r1 = assoc.ends[0].role, assoc.ends[1].role
        if r0 is not None and r0 == r1:
            add(order, error("dup-role",
                             f"association '{assoc.name}' has two ends with role '{r0}'",
                             assoc.span, subject=assoc.name))
        if assoc.ends[0].is_composite and assoc.ends[1].is_composite:
            add(order, error("two-composites",
                             f"association '{assoc.name}' has two composite ends",
                             assoc.span, subject=assoc.name))

    gen_base = n_classes + n_enums + n_assocs
    for gi, gen in enumerate(model.generalizations):
        order = gen_base + gi
        for name in (gen.general, gen.specific):
            if model.class_named(name) is None:
                add(order, error("unknown-class",
                                 f"generalization references unknown class '{name}'",
                                 gen.span, subject=name))
        if gen.general == gen.specific:
            add(order, error("gen-self",
                             f"class '{gen.general}' cannot specialize itself",
                             gen.span, subject=gen.general))

    decl_pos = {c.name: i for i, c in enumerate(model.classes)}
    for comp in cycles:
        add(decl_pos[comp[0]],
            error("gen-cycle",
                  "generalization cycle: " + " -> ".join(comp + [comp[0]]),
                  subject=comp[0]))

    found.sort(key=lambda item: (item[0], item[1]))
    return [diag for _, _, diag in found]
