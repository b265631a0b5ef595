"""Structural conformance of an object model against a class model.

Callers are expected to validate the class model first; conformance
assumes it is well formed.  The check never aborts: all violations are
accumulated into one deterministic diagnostic list, ordered objects, then
links, then per-association multiplicity counts.
"""

from __future__ import annotations

from modelkit.diagnostics import Diagnostic, error
from modelkit.metamodel import (
    BoolV,
    ClassModel,
    EnumV,
    FloatV,
    IntV,
    NullV,
    ObjectDef,
    ObjectModel,
    Property,
    StrV,
    Value,
    all_properties,
    is_subclass_of,
    type_kind,
)


def value_conforms(value: Value, declared_type: str, model: ClassModel) -> bool:
    """Type compatibility of one slot value against a declared type.

    Null fits everything.  Ints additionally fit float properties, and enum
    values fit str properties (an enum literal is observable as its string).
    Class-typed properties hold no literal values, only null; object
    references travel through links instead.
    """
    if isinstance(value, NullV):
        return True
    kind = type_kind(model, declared_type)
    if kind == "primitive":
        if declared_type == "int":
            return isinstance(value, IntV)
        if declared_type == "float":
            return isinstance(value, (IntV, FloatV))
        if declared_type == "str":
            return isinstance(value, (StrV, EnumV))
        if declared_type == "bool":
            return isinstance(value, BoolV)
    if kind == "enum":
        enum = model.enum_named(declared_type)
        return (isinstance(value, EnumV) and value.enum == declared_type
                and enum is not None and value.literal in enum.literals)
    return False  # class-typed (non-null) or unresolvable


def slot_required(prop: Property, model: ClassModel) -> bool:
    """Class-typed properties admit omission (their only value is null)."""
    return type_kind(model, prop.type_name) != "class"


def check_conformance(objects: ObjectModel, model: ClassModel) -> list[Diagnostic]:
    """All the ways `objects` fails to instantiate `model`; empty = conforms."""
    diags: list[Diagnostic] = []

    known: dict[str, ObjectDef] = {}
    for obj in objects.objects:
        if obj.id not in known:
            known[obj.id] = obj
        _check_object(obj, objects, model, diags)

    for i, link in enumerate(objects.links):
        _check_link(i, link, known, model, diags)

    _check_multiplicities(objects, model, diags)
    return diags


def _check_object(obj, objects, model, diags) -> None:
    cls = model.class_named(obj.classifier)
    if cls is None:
        diags.append(error("unknown-classifier",
                           f"object '{obj.id}' has unknown classifier '{obj.classifier}'",
                           obj.span, subject=obj.id))
        return
    if cls.is_abstract:
        diags.append(error("abstract-instance",
                           f"object '{obj.id}' instantiates abstract class '{cls.name}'",
                           obj.span, subject=obj.id))

    props = {p.name: p for p in all_properties(model, cls.name)}
    seen_slots: set[str] = set()
    for slot in obj.slots:
        subject = f"{obj.id}.{slot.property_name}"
        if slot.property_name in seen_slots:
            diags.append(error("dup-slot",
                               f"object '{obj.id}' assigns property "
                               f"'{slot.property_name}' more than once",
                               slot.span, subject=subject))
            continue
        seen_slots.add(slot.property_name)
        prop = props.get(slot.property_name)
        if prop is None:
            diags.append(error("unknown-property",
                               f"object '{obj.id}' assigns unknown property "
                               f"'{slot.property_name}' of class '{cls.name}'",
                               slot.span, subject=subject))
        elif not value_conforms(slot.value, prop.type_name, model):
            diags.append(error("slot-type",
                               f"value of slot '{obj.id}.{slot.property_name}' does not "
                               f"fit declared type '{prop.type_name}'",
                               slot.span, subject=subject))

    for prop in props.values():
        if prop.name not in seen_slots and slot_required(prop, model):
            diags.append(error("slot-missing",
                               f"object '{obj.id}' has no slot for required property "
                               f"'{prop.name}'",
                               obj.span, subject=f"{obj.id}.{prop.name}"))


def _check_link(index, link, known, model, diags) -> None:
    subject = f"link[{index}]"
    assoc = model.association_named(link.association_name)
    if assoc is None:
        diags.append(error("unknown-association",
                           f"link references unknown association "
                           f"'{link.association_name}'",
                           link.span, subject=subject))
        return
    if len(link.ends) != 2:
        diags.append(error("link-ends",
                           f"link of '{assoc.name}' must have exactly two ends",
                           link.span, subject=subject))
        return
    for pos, link_end in enumerate(link.ends):
        obj = known.get(link_end.object_id)
        if obj is None:
            diags.append(error("unknown-object",
                               f"link of '{assoc.name}' references unknown object "
                               f"'{link_end.object_id}'",
                               link.span, subject=subject))
            continue
        end = assoc.ends[pos]
        if model.class_named(end.target) is None or model.class_named(obj.classifier) is None:
            continue  # already reported against the model or the object
        if not is_subclass_of(model, obj.classifier, end.target):
            diags.append(error("link-end-type",
                               f"object '{obj.id}' ({obj.classifier}) cannot occupy the "
                               f"'{end.target}' end of association '{assoc.name}'",
                               link.span, subject=subject))


def _check_multiplicities(objects, model, diags) -> None:
    # The multiplicity at end j bounds, for each instance at the opposite
    # end, how many links of the association it participates in.
    for assoc in model.associations:
        if len(assoc.ends) != 2:
            continue
        links = [ln for ln in objects.links
                 if ln.association_name == assoc.name and len(ln.ends) == 2]
        for j, bound_end in enumerate(assoc.ends):
            i = 1 - j
            holder_end = assoc.ends[i]
            if model.class_named(holder_end.target) is None:
                continue
            for obj in objects.objects:
                if model.class_named(obj.classifier) is None:
                    continue
                if not is_subclass_of(model, obj.classifier, holder_end.target):
                    continue
                count = sum(1 for ln in links if ln.ends[i].object_id == obj.id)
                mult = bound_end.multiplicity
                if count < mult.lower:
                    diags.append(error(
                        "mult-lower",
                        f"object '{obj.id}' has {count} '{assoc.name}' link(s) toward "
                        f"'{bound_end.target}', below lower bound {mult.lower}",
                        obj.span, subject=f"{obj.id}@{assoc.name}[{j}]"))
                elif mult.upper is not None and count > mult.upper:
                    diags.append(error(
                        "mult-upper",
                        f"object '{obj.id}' has {count} '{assoc.name}' link(s) toward "
                        f"'{bound_end.target}', above upper bound {mult.upper}",
                        obj.span, subject=f"{obj.id}@{assoc.name}[{j}]"))
