"""Big-step evaluator for the OCL subset.

Semantics, in brief:

- Arithmetic works on int/float; any float operand promotes the result,
  int `/` int is floor division, and dividing by zero is a runtime error.
- `and`/`or`/`implies` short-circuit on the left operand and demand
  booleans; `if` demands a boolean condition and evaluates one branch.
- `=`/`<>` are total: numbers compare by value across int/float, objects
  by identity, collections pairwise; any other kind mismatch (null
  included) is plain inequality, never an error.
- Ordering `< <= > >=` covers numbers and strings (lexicographic).
- Navigating `x.name` first tries a property of x's class: the slot value,
  null when the slot is omitted, with enum values read as their literal
  string.  Otherwise it is association navigation via the first
  declaration whose far end answers to `name` (role, or target class name
  when the role is absent): ends with upper bound 1 yield the linked
  object or null, anything else yields the ordered collection of linked
  objects.  Navigating on null, on a collection, or via an unknown name
  is a runtime error.
- `->` operations require a collection source.  forAll over an empty
  collection is true and exists is false; both stop at the first deciding
  element.  select keeps source order; collect refuses collection-valued
  bodies (no nesting).

Runtime errors never escape a constraint evaluation: they become the
per-instance verdict 'error'.
"""

from __future__ import annotations

from typing import Optional, Union

from modelkit.metamodel import (
    BoolV,
    ClassModel,
    EnumV,
    FloatV,
    IntV,
    NullV,
    NULL,
    ObjectDef,
    ObjectModel,
    StrV,
    Value,
    all_properties,
    ancestors,
)
from modelkit.ocl.nodes import (
    Binary,
    CollectionOp,
    EvalResult,
    If,
    InstanceResult,
    Literal,
    Nav,
    OclConstraint,
    OclExpr,
    SelfRef,
    Unary,
    VarRef,
)

# What an expression can evaluate to: a plain value, an object reference,
# or an ordered collection of either.
Evaluated = Union[Value, ObjectDef, list]


class OclRuntimeError(Exception):
    pass


class Binding:
    """Stack of variable scopes; `self` sits in the outermost frame."""

    def __init__(self, initial: Optional[dict[str, Evaluated]] = None):
        self.frames: list[dict[str, Evaluated]] = [dict(initial or {})]

    def push(self, name: str, value: Evaluated) -> None:
        self.frames.append({name: value})

    def pop(self) -> None:
        self.frames.pop()

    def lookup(self, name: str) -> Evaluated:
        for frame in reversed(self.frames):
            if name in frame:
                return frame[name]
        raise OclRuntimeError(f"unbound variable '{name}'")


def _is_number(v: Evaluated) -> bool:
    return isinstance(v, (IntV, FloatV))


def _num(v) -> Union[int, float]:
    return v.value


def _class_exists(model: ClassModel, name: str) -> bool:
    return model.class_named(name) is not None


def _conforms(model: ClassModel, sub: str, sup: str) -> bool:
    if not _class_exists(model, sub) or not _class_exists(model, sup):
        return False
    return sub == sup or sup in ancestors(model, sub)


def value_equal(a: Evaluated, b: Evaluated) -> bool:
    """Total equality: numeric across int/float, objects by id, collections
    pairwise; any other kind mismatch is simply unequal."""
    if _is_number(a) and _is_number(b):
        return _num(a) == _num(b)
    if isinstance(a, ObjectDef) and isinstance(b, ObjectDef):
        return a.id == b.id
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(value_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, Value) and isinstance(b, Value):
        return type(a) is type(b) and a == b
    return False


def _read_slot(obj: ObjectDef, name: str) -> Evaluated:
    slot = obj.slot(name)
    if slot is None:
        return NULL
    if isinstance(slot.value, EnumV):
        return StrV(slot.value.literal)  # enum literals read as strings
    return slot.value


def _navigate(obj: ObjectDef, name: str, objects: ObjectModel,
              model: ClassModel) -> Evaluated:
    if _class_exists(model, obj.classifier):
        props = {p.name for p in all_properties(model, obj.classifier)}
        if name in props:
            return _read_slot(obj, name)
    for assoc in model.associations:
        if len(assoc.ends) != 2:
            continue
        for j in (0, 1):
            far_end = assoc.ends[j]
            near_end = assoc.ends[1 - j]
            if far_end.nav_name() != name:
                continue
            if not _conforms(model, obj.classifier, near_end.target):
                continue
            partners: list[Evaluated] = []
            for link in objects.links:
                if link.association_name != assoc.name or len(link.ends) != 2:
                    continue
                if link.ends[1 - j].object_id != obj.id:
                    continue
                partner = objects.object_named(link.ends[j].object_id)
                if partner is None:
                    raise OclRuntimeError(
                        f"link of '{assoc.name}' references unknown object "
                        f"'{link.ends[j].object_id}'")
                partners.append(partner)
            if far_end.multiplicity.upper == 1:
                return partners[0] if partners else NULL
            return partners
    raise OclRuntimeError(
        f"'{obj.classifier}' has no attribute or association '{name}'")


def _require_bool(v: Evaluated, context: str) -> bool:
    if isinstance(v, BoolV):
        return v.value
    raise OclRuntimeError(f"{context} is not a boolean")


def evaluate_expression(expr: OclExpr, env: Binding, objects: ObjectModel,
                        model: ClassModel) -> Evaluated:
    """Evaluate one expression; raises OclRuntimeError on type errors,
    division by zero, null navigation, and unknown names."""
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, SelfRef):
        return env.lookup("self")
    if isinstance(expr, VarRef):
        return env.lookup(expr.name)
    if isinstance(expr, Nav):
        source = evaluate_expression(expr.source, env, objects, model)
        if isinstance(source, NullV):
            raise OclRuntimeError(f"navigation '{expr.name}' on null")
        if isinstance(source, list):
            raise OclRuntimeError(
                f"navigation '{expr.name}' on a collection (no implicit collect)")
        if not isinstance(source, ObjectDef):
            raise OclRuntimeError(f"navigation '{expr.name}' on a plain value")
        return _navigate(source, expr.name, objects, model)
    if isinstance(expr, Unary):
        return _eval_unary(expr, env, objects, model)
    if isinstance(expr, Binary):
        return _eval_binary(expr, env, objects, model)
    if isinstance(expr, If):
        cond = evaluate_expression(expr.condition, env, objects, model)
        branch = expr.then_branch if _require_bool(cond, "if condition") \
            else expr.else_branch
        return evaluate_expression(branch, env, objects, model)
    if isinstance(expr, CollectionOp):
        return _eval_collection_op(expr, env, objects, model)
    raise OclRuntimeError(f"unknown expression node {type(expr).__name__}")


def _eval_unary(expr, env, objects, model) -> Evaluated:
    operand = evaluate_expression(expr.operand, env, objects, model)
    if expr.op == "not":
        return BoolV(not _require_bool(operand, "operand of 'not'"))
    if _is_number(operand):
        result = -_num(operand)
        return IntV(result) if isinstance(operand, IntV) else FloatV(result)
    raise OclRuntimeError("unary '-' on a non-number")


def _eval_binary(expr, env, objects, model) -> Evaluated:
    op = expr.op
    if op in ("and", "or", "implies"):
        lhs = _require_bool(
            evaluate_expression(expr.lhs, env, objects, model),
            f"left operand of '{op}'")
        if op == "and" and not lhs:
            return BoolV(False)
        if op == "or" and lhs:
            return BoolV(True)
        if op == "implies" and not lhs:
            return BoolV(True)
        rhs = _require_bool(
            evaluate_expression(expr.rhs, env, objects, model),
            f"right operand of '{op}'")
        return BoolV(rhs)

    lhs = evaluate_expression(expr.lhs, env, objects, model)
    rhs = evaluate_expression(expr.rhs, env, objects, model)

    if op == "=":
        return BoolV(value_equal(lhs, rhs))
    if op == "<>":
        return BoolV(not value_equal(lhs, rhs))

    if op in ("+", "-", "*", "/"):
        if not (_is_number(lhs) and _is_number(rhs)):
            raise OclRuntimeError(f"arithmetic '{op}' on non-numbers")
        a, b = _num(lhs), _num(rhs)
        both_int = isinstance(lhs, IntV) and isinstance(rhs, IntV)
        if op == "+":
            r = a + b
        elif op == "-":
            r = a - b
        elif op == "*":
            r = a * b
        else:
            if b == 0:
                raise OclRuntimeError("division by zero")
            r = a // b if both_int else a / b
        return IntV(r) if both_int else FloatV(float(r))

    # Ordering comparisons.
    if _is_number(lhs) and _is_number(rhs):
        a, b = _num(lhs), _num(rhs)
    elif isinstance(lhs, StrV) and isinstance(rhs, StrV):
        a, b = lhs.value, rhs.value
    else:
        raise OclRuntimeError(f"comparison '{op}' needs two numbers or two strings")
    if op == "<":
        return BoolV(a < b)
    if op == "<=":
        return BoolV(a <= b)
    if op == ">":
        return BoolV(a > b)
    return BoolV(a >= b)


def _eval_collection_op(expr, env, objects, model) -> Evaluated:
    source = evaluate_expression(expr.source, env, objects, model)
    if not isinstance(source, list):
        raise OclRuntimeError(f"'->{expr.op}' on a non-collection")
    op = expr.op
    if op == "size":
        return IntV(len(source))
    if op == "isEmpty":
        return BoolV(not source)
    if op == "notEmpty":
        return BoolV(bool(source))
    if op == "includes":
        needle = evaluate_expression(expr.body, env, objects, model)
        return BoolV(any(value_equal(item, needle) for item in source))

    results: list[Evaluated] = []
    for item in source:
        env.push(expr.var, item)
        try:
            value = evaluate_expression(expr.body, env, objects, model)
        finally:
            env.pop()
        if op == "forAll":
            if not _require_bool(value, "forAll body"):
                return BoolV(False)
        elif op == "exists":
            if _require_bool(value, "exists body"):
                return BoolV(True)
        elif op == "select":
            if _require_bool(value, "select body"):
                results.append(item)
        else:  # collect
            if isinstance(value, list):
                raise OclRuntimeError("collect body produced a nested collection")
            results.append(value)
    if op == "forAll":
        return BoolV(True)
    if op == "exists":
        return BoolV(False)
    return results


def evaluate_constraint(constraint: OclConstraint, objects: ObjectModel,
                        model: ClassModel) -> EvalResult:
    """Evaluate one invariant over every instance of its context class,
    subclass instances included, in object declaration order."""
    if not _class_exists(model, constraint.context_class):
        return EvalResult(
            constraint=constraint.name,
            message=f"unknown context class '{constraint.context_class}'")
    result = EvalResult(constraint=constraint.name)
    for obj in objects.objects:
        if not _conforms(model, obj.classifier, constraint.context_class):
            continue
        env = Binding({"self": obj})
        try:
            value = evaluate_expression(constraint.body, env, objects, model)
        except OclRuntimeError as exc:
            result.per_instance.append(
                InstanceResult(obj.id, "error", str(exc)))
            continue
        if isinstance(value, BoolV):
            result.per_instance.append(
                InstanceResult(obj.id, "true" if value.value else "false"))
        else:
            result.per_instance.append(
                InstanceResult(obj.id, "error", "invariant did not yield a boolean"))
    return result


def check_all(constraints: list[OclConstraint], objects: ObjectModel,
              model: ClassModel) -> list[EvalResult]:
    """Evaluate every constraint in declaration order."""
    return [evaluate_constraint(c, objects, model) for c in constraints]


def all_passed(results: list[EvalResult]) -> bool:
    return all(r.passed for r in results)
