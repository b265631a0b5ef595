"""SQL DDL generator.

Single `schema.sql` artifact.  Mapping rules:

- one CREATE TABLE per concrete class, columns flattened from inherited
  properties (abstract classes contribute columns, never tables);
- int/float/str/bool map to INTEGER/REAL/TEXT/BOOLEAN, enums to TEXT with
  a CHECK over the literals; class-typed properties are unsupported
  (references belong in associations);
- is_id properties form the PRIMARY KEY; a class that is referenced by an
  association but has no is_id gets a synthetic `id INTEGER` key and a
  `synthetic-key` warning (so does a class whose table would otherwise
  have no columns at all);
- an association with a single-valued end (upper bound 1) puts FOREIGN
  KEY columns on the opposite table, named `<role-or-class>_<pk column>`,
  NOT NULL when the referenced end's lower bound is 1; when both ends are
  single-valued the second end holds the key;
- many-to-many associations become a join table named after the
  association, with a composite PRIMARY KEY over both ends' key columns;
- tables are emitted referenced-before-referencing, ties broken by
  declaration order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from modelkit.codegen import (
    GeneratedArtifact,
    GenerationResult,
    GeneratorDescriptor,
    snake_case,
)
from modelkit.diagnostics import Diagnostic, error, warning
from modelkit.metamodel import (
    Association,
    ClassModel,
    all_properties,
    type_kind,
)

_TYPE_MAP = {"int": "INTEGER", "float": "REAL", "str": "TEXT", "bool": "BOOLEAN"}


@dataclass
class _Table:
    name: str
    order: int
    columns: list[tuple[str, str]] = field(default_factory=list)  # (name, rendered type)
    primary_key: list[str] = field(default_factory=list)
    foreign_keys: list[tuple[list[str], str, list[str]]] = field(default_factory=list)
    depends_on: set[str] = field(default_factory=set)

    def add_column(self, name: str, rendered: str,
                   diags: list[Diagnostic], context: str) -> bool:
        if any(existing == name for existing, _ in self.columns):
            diags.append(error("name-collision",
                               f"column '{name}' appears twice in table "
                               f"'{self.name}' ({context})",
                               subject=f"{self.name}.{name}"))
            return False
        self.columns.append((name, rendered))
        return True


def _column_type(model: ClassModel, type_name: str, column: str) -> str | None:
    kind = type_kind(model, type_name)
    if kind == "primitive":
        return _TYPE_MAP[type_name]
    if kind == "enum":
        enum = model.enum_named(type_name)
        literals = ", ".join(f"'{lit}'" for lit in enum.literals)
        return f"TEXT CHECK ({column} IN ({literals}))"
    return None


def _fk_mapping(assoc: Association) -> tuple[int, int] | None:
    """(referenced end index, holder end index) for FK-style associations,
    None for many-to-many."""
    single0 = assoc.ends[0].multiplicity.upper == 1
    single1 = assoc.ends[1].multiplicity.upper == 1
    if single0 and not single1:
        return 0, 1
    if single1 and not single0:
        return 1, 0
    if single0 and single1:
        return 0, 1
    return None


def generate_sql_ddl(model: ClassModel) -> GenerationResult:
    diags: list[Diagnostic] = []
    concrete = [c for c in model.classes if not c.is_abstract]

    # Decide how each association maps before building any table, so key
    # synthesis knows which classes must be referenceable.
    fk_assocs: list[tuple[Association, int, int]] = []
    join_assocs: list[Association] = []
    referenced: set[str] = set()
    for assoc in model.associations:
        if len(assoc.ends) != 2:
            continue
        involved = [model.class_named(end.target) for end in assoc.ends]
        if any(c is None for c in involved):
            continue  # invalid model; validation reports it
        if any(c.is_abstract for c in involved):
            diags.append(error("gen-unsupported",
                               f"association '{assoc.name}' involves an abstract "
                               f"class and cannot be mapped to tables",
                               subject=assoc.name))
            continue
        mapping = _fk_mapping(assoc)
        if mapping is None:
            bases = [end.role if end.role is not None else snake_case(end.target)
                     for end in assoc.ends]
            if bases[0] == bases[1]:
                diags.append(error("gen-unsupported",
                                   f"many-to-many association '{assoc.name}' has "
                                   f"indistinguishable ends; give the ends distinct "
                                   f"roles",
                                   subject=assoc.name))
                continue
            join_assocs.append(assoc)
            referenced.update(end.target for end in assoc.ends)
        else:
            ref, _holder = mapping
            fk_assocs.append((assoc, *mapping))
            referenced.add(assoc.ends[ref].target)

    # Key columns per concrete class, synthesizing where required.
    keys: dict[str, list[tuple[str, str]]] = {}
    synthetic: set[str] = set()
    for cls in concrete:
        id_props = [p for p in all_properties(model, cls.name) if p.is_id]
        if id_props:
            keys[cls.name] = [(p.name, _TYPE_MAP.get(p.type_name, "TEXT"))
                              for p in id_props]
        elif cls.name in referenced:
            keys[cls.name] = [("id", "INTEGER")]
            synthetic.add(cls.name)
            diags.append(warning("synthetic-key",
                                 f"class '{cls.name}' is referenced but has no "
                                 f"identifier property; adding synthetic column 'id'",
                                 subject=cls.name))
        else:
            keys[cls.name] = []

    tables: dict[str, _Table] = {}

    def new_table(name: str, order: int, subject: str) -> _Table | None:
        if name in tables:
            diags.append(error("name-collision",
                               f"table name '{name}' produced twice after "
                               f"snake_case mangling",
                               subject=subject))
            return None
        table = _Table(name=name, order=order)
        tables[name] = table
        return table

    class_table: dict[str, str] = {}
    for order, cls in enumerate(concrete):
        table = new_table(snake_case(cls.name), order, cls.name)
        if table is None:
            continue
        class_table[cls.name] = table.name
        if cls.name in synthetic:
            table.add_column("id", "INTEGER", diags, "synthetic key")
        for prop in all_properties(model, cls.name):
            rendered = _column_type(model, prop.type_name, prop.name)
            if rendered is None:
                diags.append(error("gen-unsupported",
                                   f"property '{cls.name}.{prop.name}' has "
                                   f"class-typed value '{prop.type_name}'; model it "
                                   f"as an association instead",
                                   subject=f"{cls.name}.{prop.name}"))
                continue
            table.add_column(prop.name, rendered, diags, "declared property")
        table.primary_key = [name for name, _ in keys[cls.name]]
        if not table.columns:
            # A table needs at least one column to be valid SQL.
            table.add_column("id", "INTEGER", diags, "synthetic key")
            table.primary_key = ["id"]
            keys[cls.name] = [("id", "INTEGER")]
            diags.append(warning("synthetic-key",
                                 f"class '{cls.name}' maps to a table with no "
                                 f"columns; adding synthetic column 'id'",
                                 subject=cls.name))

    def fk_columns(table: _Table, referenced_class: str, base: str,
                   required: bool, context: str) -> list[str]:
        cols = []
        for key_name, key_type in keys[referenced_class]:
            rendered = key_type + (" NOT NULL" if required else "")
            col = f"{base}_{key_name}"
            if table.add_column(col, rendered, diags, context):
                cols.append(col)
        return cols

    for assoc, ref, holder in fk_assocs:
        holder_name = class_table.get(assoc.ends[holder].target)
        ref_class = assoc.ends[ref].target
        if holder_name is None or ref_class not in class_table:
            continue
        table = tables[holder_name]
        end = assoc.ends[ref]
        base = end.role if end.role is not None else snake_case(end.target)
        cols = fk_columns(table, ref_class, base,
                          end.multiplicity.lower >= 1, f"association '{assoc.name}'")
        if cols:
            table.foreign_keys.append(
                (cols, class_table[ref_class], [k for k, _ in keys[ref_class]]))
            table.depends_on.add(class_table[ref_class])

    assoc_order = {a.name: i for i, a in enumerate(model.associations)}
    for assoc in join_assocs:
        if any(end.target not in class_table for end in assoc.ends):
            continue
        table = new_table(snake_case(assoc.name),
                          len(concrete) + assoc_order[assoc.name], assoc.name)
        if table is None:
            continue
        for end in assoc.ends:
            base = end.role if end.role is not None else snake_case(end.target)
            cols = fk_columns(table, end.target, base, True,
                              f"association '{assoc.name}'")
            if cols:
                table.foreign_keys.append(
                    (cols, class_table[end.target], [k for k, _ in keys[end.target]]))
                table.depends_on.add(class_table[end.target])
        table.primary_key = [name for name, _ in table.columns]

    ordered = _dependency_order(tables)

    lines = [f"-- SQL schema for model '{model.name}'"]
    for table in ordered:
        lines.append("")
        lines.append(f"CREATE TABLE {table.name} (")
        entries = [f"  {name} {rendered}" for name, rendered in table.columns]
        if table.primary_key:
            entries.append("  PRIMARY KEY (" + ", ".join(table.primary_key) + ")")
        for cols, ref_table, ref_cols in table.foreign_keys:
            entries.append(
                "  FOREIGN KEY (" + ", ".join(cols) + ") REFERENCES "
                + ref_table + " (" + ", ".join(ref_cols) + ")")
        lines.append(",\n".join(entries))
        lines.append(");")

    result = GenerationResult(diagnostics=diags)
    result.artifacts.append(GeneratedArtifact(
        relative_path="schema.sql", content="\n".join(lines) + "\n"))
    return result


def _dependency_order(tables: dict[str, _Table]) -> list[_Table]:
    """Referenced tables first; ties and cycles fall back to declaration order."""
    remaining = dict(tables)
    emitted: list[_Table] = []
    done: set[str] = set()
    while remaining:
        ready = [t for t in remaining.values()
                 if not (t.depends_on - done - {t.name})]
        if not ready:
            ready = list(remaining.values())  # dependency cycle
        nxt = min(ready, key=lambda t: t.order)
        emitted.append(nxt)
        done.add(nxt.name)
        del remaining[nxt.name]
    return emitted


def sql_descriptor() -> GeneratorDescriptor:
    return GeneratorDescriptor(
        id="sql",
        display_name="SQL DDL",
        produce=generate_sql_ddl,
    )
