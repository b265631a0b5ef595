"""Plain-class source generator.

Emits one `<class>.gen` artifact per class: a class declaration whose
constructor takes every attribute (inherited ones first, general-most
class first) and assigns each to a field.  Association ends the class can
navigate become initialized fields, a list when the far end's upper
bound exceeds one, else None; they are not constructor parameters.
"""

from __future__ import annotations

from modelkit.codegen import (
    GeneratedArtifact,
    GenerationResult,
    GeneratorDescriptor,
    snake_case,
)
from modelkit.metamodel import ClassModel, all_properties


def _association_fields(model: ClassModel, class_name: str) -> list[tuple[str, bool]]:
    """(field name, is_collection) for every far end reachable from class_name.

    A roleless self-association answers to one name from either side, so
    repeated names keep their first occurrence only.
    """
    fields: list[tuple[str, bool]] = []
    taken: set[str] = set()
    for assoc in model.associations:
        if len(assoc.ends) != 2:
            continue
        for j in (0, 1):
            if assoc.ends[1 - j].target == class_name:
                far = assoc.ends[j]
                name = far.role if far.role is not None else snake_case(far.target)
                if name not in taken:
                    taken.add(name)
                    fields.append((name, far.multiplicity.upper != 1))
    return fields


def generate_plain_classes(model: ClassModel) -> GenerationResult:
    result = GenerationResult()
    for cls in model.classes:
        params = [p.name for p in all_properties(model, cls.name)]
        lines = [f"class {cls.name}:"]
        signature = ", ".join(["self"] + params)
        lines.append(f"    def __init__({signature}):")
        body = [f"        self.{name} = {name}" for name in params]
        for field_name, is_collection in _association_fields(model, cls.name):
            initial = "[]" if is_collection else "None"
            body.append(f"        self.{field_name} = {initial}")
        if not body:
            body = ["        pass"]
        lines.extend(body)
        result.artifacts.append(GeneratedArtifact(
            relative_path=f"{snake_case(cls.name)}.gen",
            content="\n".join(lines) + "\n"))
    return result


def plain_classes_descriptor() -> GeneratorDescriptor:
    return GeneratorDescriptor(
        id="classes",
        display_name="Plain classes",
        produce=generate_plain_classes,
    )
