"""Pluggable model-to-text generation.

A generator is a pure function from a class model to named text
artifacts; the registry maps stable ids to generators and preserves
registration order.  Outputs are deterministic: same model, same bytes.
"""

from __future__ import annotations

import posixpath
import re
from dataclasses import dataclass, field
from typing import Callable

from modelkit.diagnostics import Diagnostic
from modelkit.metamodel import ClassModel


class GeneratorError(Exception):
    """Registry misuse: duplicate or unknown generator id."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class GeneratedArtifact:
    relative_path: str
    content: str

    def __post_init__(self):
        path = self.relative_path
        normalized = posixpath.normpath(path)
        if (path != normalized or posixpath.isabs(path)
                or normalized.startswith("..") or normalized == "."):
            raise ValueError(f"artifact path must be relative and normalized: {path!r}")


@dataclass
class GenerationResult:
    artifacts: list[GeneratedArtifact] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)


@dataclass(frozen=True)
class GeneratorDescriptor:
    id: str
    display_name: str
    produce: Callable[[ClassModel], GenerationResult]


class GeneratorRegistry:
    def __init__(self):
        self._generators: dict[str, GeneratorDescriptor] = {}

    def register(self, descriptor: GeneratorDescriptor) -> None:
        if descriptor.id in self._generators:
            raise GeneratorError("dup-generator",
                                 f"generator '{descriptor.id}' already registered")
        self._generators[descriptor.id] = descriptor

    def get(self, generator_id: str) -> GeneratorDescriptor:
        try:
            return self._generators[generator_id]
        except KeyError:
            raise GeneratorError(
                "no-such-generator",
                f"no generator '{generator_id}'; available: "
                + ", ".join(self.ids())) from None

    def ids(self) -> list[str]:
        return list(self._generators)

    def generate(self, generator_id: str, model: ClassModel) -> GenerationResult:
        return self.get(generator_id).produce(model)


_CAMEL_BOUNDARY_1 = re.compile(r"([A-Z]+)([A-Z][a-z0-9])")
_CAMEL_BOUNDARY_2 = re.compile(r"([a-z0-9])([A-Z])")


def snake_case(name: str) -> str:
    name = _CAMEL_BOUNDARY_1.sub(r"\1_\2", name)
    name = _CAMEL_BOUNDARY_2.sub(r"\1_\2", name)
    return name.lower()


def builtin_registry() -> GeneratorRegistry:
    """Registry with the two reference generators, "classes" then "sql"."""
    from modelkit.codegen.plainclasses import plain_classes_descriptor
    from modelkit.codegen.sqlddl import sql_descriptor

    registry = GeneratorRegistry()
    registry.register(plain_classes_descriptor())
    registry.register(sql_descriptor())
    return registry
