import random

import pytest

from modelkit.metamodel import (
    Association,
    AssociationEnd,
    ClassDef,
    ClassModel,
    EnumDef,
    Generalization,
    Multiplicity,
    Property,
    all_properties,
    is_subclass_of,
    validate_class_model,
)
from model_gen import random_class_model


def dpp_model() -> ClassModel:
    model = ClassModel(name="dpp")
    model.classes.append(ClassDef("ProductPassport", properties=[
        Property("code", "str", is_id=True),
        Property("product_name", "str"),
        Property("brand", "str"),
    ]))
    for stage in ("Design", "Use", "Manufacture"):
        model.classes.append(ClassDef(stage))
    return model


def chain_model() -> ClassModel:
    model = ClassModel(name="chain")
    model.classes.append(ClassDef("A", properties=[Property("a1", "int"),
                                                   Property("a2", "str")]))
    model.classes.append(ClassDef("B", properties=[Property("b1", "bool")]))
    model.classes.append(ClassDef("C", properties=[Property("c1", "float")]))
    model.generalizations.append(Generalization(general="A", specific="B"))
    model.generalizations.append(Generalization(general="B", specific="C"))
    return model


class TestValidate:
    def test_dpp_model_is_valid(self):
        assert validate_class_model(dpp_model()) == []

    def test_empty_model_is_valid(self):
        assert validate_class_model(ClassModel(name="empty")) == []

    def test_generalization_cycle(self):
        model = ClassModel(name="m", classes=[ClassDef("A"), ClassDef("B")])
        model.generalizations.append(Generalization("A", "B"))
        model.generalizations.append(Generalization("B", "A"))
        diags = validate_class_model(model)
        assert [d.code for d in diags] == ["gen-cycle"]

    def test_duplicate_names_share_one_namespace(self):
        model = ClassModel(name="m", classes=[ClassDef("X")],
                           enumerations=[EnumDef("X", ["A"])])
        assert [d.code for d in validate_class_model(model)] == ["dup-name"]

    def test_unknown_property_type(self):
        model = ClassModel(name="m", classes=[
            ClassDef("A", properties=[Property("p", "Nope")])])
        assert [d.code for d in validate_class_model(model)] == ["bad-type"]

    def test_id_property_must_be_primitive(self):
        model = ClassModel(name="m", classes=[
            ClassDef("A"),
            ClassDef("B", properties=[Property("p", "A", is_id=True)])])
        assert [d.code for d in validate_class_model(model)] == ["id-not-primitive"]

    def test_own_duplicate_property(self):
        model = ClassModel(name="m", classes=[
            ClassDef("A", properties=[Property("p", "int"), Property("p", "str")])])
        assert "dup-property" in [d.code for d in validate_class_model(model)]

    def test_redeclaring_inherited_property(self):
        model = chain_model()
        model.classes[2].properties.append(Property("a1", "int"))
        assert [d.code for d in validate_class_model(model)] == ["dup-property"]

    def test_diamond_clash_reported_once(self):
        model = ClassModel(name="m", classes=[
            ClassDef("B", properties=[Property("x", "int")]),
            ClassDef("C", properties=[Property("x", "int")]),
            ClassDef("D"),
            ClassDef("E"),
        ])
        model.generalizations.append(Generalization("B", "D"))
        model.generalizations.append(Generalization("C", "D"))
        model.generalizations.append(Generalization("D", "E"))
        diags = [d for d in validate_class_model(model) if d.code == "dup-property"]
        assert len(diags) == 1
        assert diags[0].subject == "D.x"

    def test_enum_needs_literals(self):
        model = ClassModel(name="m", enumerations=[EnumDef("E", [])])
        assert [d.code for d in validate_class_model(model)] == ["no-literals"]

    def test_enum_duplicate_literal(self):
        model = ClassModel(name="m", enumerations=[EnumDef("E", ["A", "A"])])
        assert [d.code for d in validate_class_model(model)] == ["dup-literal"]

    def test_association_checks(self):
        model = ClassModel(name="m", classes=[ClassDef("A")])
        model.associations.append(Association("r", (
            AssociationEnd("A", role="x", is_composite=True),
            AssociationEnd("Nope", role="x", is_composite=True))))
        codes = [d.code for d in validate_class_model(model)]
        assert codes == sorted(codes)
        assert set(codes) == {"unknown-class", "dup-role", "two-composites"}

    def test_bad_multiplicity(self):
        model = ClassModel(name="m", classes=[ClassDef("A")])
        model.associations.append(Association("r", (
            AssociationEnd("A", multiplicity=Multiplicity(5, 2)),
            AssociationEnd("A"))))
        assert [d.code for d in validate_class_model(model)] == ["bad-mult"]

    def test_self_generalization(self):
        model = ClassModel(name="m", classes=[ClassDef("A")])
        model.generalizations.append(Generalization("A", "A"))
        assert [d.code for d in validate_class_model(model)] == ["gen-self"]

    def test_validation_is_pure(self):
        model = chain_model()
        model.generalizations.append(Generalization("C", "A"))  # close a cycle
        first = [d.format() for d in validate_class_model(model)]
        second = [d.format() for d in validate_class_model(model)]
        assert first == second

    def test_random_generated_models_are_valid(self):
        rng = random.Random(7)
        for _ in range(50):
            assert validate_class_model(random_class_model(rng)) == []


class TestAllProperties:
    def test_identity_without_inheritance(self):
        model = dpp_model()
        names = [p.name for p in all_properties(model, "ProductPassport")]
        assert names == ["code", "product_name", "brand"]

    def test_single_level(self):
        model = ClassModel(name="m", classes=[
            ClassDef("A", properties=[Property("a1", "int")]),
            ClassDef("B", properties=[Property("b1", "int")])])
        model.generalizations.append(Generalization("A", "B"))
        assert [p.name for p in all_properties(model, "B")] == ["a1", "b1"]

    def test_chain_general_most_first(self):
        # Hand-enumerated on the three-class chain: A's, then B's, then C's.
        model = chain_model()
        assert [p.name for p in all_properties(model, "C")] == \
            ["a1", "a2", "b1", "c1"]

    def test_unknown_class_raises(self):
        with pytest.raises(ValueError):
            all_properties(dpp_model(), "Nope")

    def test_no_duplicates_on_random_valid_models(self):
        rng = random.Random(11)
        for _ in range(100):
            model = random_class_model(rng)
            for cls in model.classes:
                names = [p.name for p in all_properties(model, cls.name)]
                assert len(names) == len(set(names))


class TestIsSubclassOf:
    def test_reflexive(self):
        assert is_subclass_of(chain_model(), "A", "A")

    def test_direct(self):
        assert is_subclass_of(chain_model(), "B", "A")

    def test_not_symmetric(self):
        assert not is_subclass_of(chain_model(), "A", "B")

    def test_unknown_class_raises(self):
        with pytest.raises(ValueError):
            is_subclass_of(chain_model(), "A", "Nope")

    def test_partial_order_on_random_models(self):
        rng = random.Random(13)
        for _ in range(40):
            model = random_class_model(rng)
            names = [c.name for c in model.classes]
            for a in names:
                assert is_subclass_of(model, a, a)
                for b in names:
                    if a != b and is_subclass_of(model, a, b):
                        assert not is_subclass_of(model, b, a)
                    for c in names:
                        if is_subclass_of(model, a, b) and is_subclass_of(model, b, c):
                            assert is_subclass_of(model, a, c)
