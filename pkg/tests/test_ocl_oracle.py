"""Differential testing of the evaluator against the naive oracle."""

import random

from modelkit.ocl import check_all, evaluate_constraint
from modelkit.ocl.nodes import OclConstraint
from model_gen import random_expression, random_instanced_model
from ocl_oracle import naive_check


def run_pair(rng, seed_note=""):
    model, objects = random_instanced_model(rng)
    context = rng.choice(model.classes).name
    body = random_expression(rng, model, depth=4)
    constraint = OclConstraint(context_class=context, name="inv0", body=body)

    expected = naive_check(constraint, objects, model)
    actual = evaluate_constraint(constraint, objects, model)
    if expected is None:
        assert actual.message is not None, seed_note
        return None
    got = [(r.object_id, r.verdict) for r in actual.per_instance]
    assert got == expected, f"{seed_note}\nexpr={body}\nmodel={model}"
    return [v for _, v in got]


def test_verdicts_match_the_oracle():
    rng = random.Random(4242)
    verdicts = []
    for i in range(400):
        row = run_pair(rng, f"case {i}")
        if row:
            verdicts.extend(row)
    # The generator should exercise all three verdicts, not just errors.
    assert verdicts.count("true") > 50
    assert verdicts.count("false") > 50
    assert verdicts.count("error") > 50


def test_dpp_invariants_match_the_oracle(fixtures_dir):
    from modelkit.puml import parse_class_model
    from modelkit.objtext import parse_object_model
    from modelkit.ocl import parse_ocl

    model = parse_class_model((fixtures_dir / "dpp.buml.puml").read_text()).model
    model.associations[0].ends[1].role = "stages"
    objects = parse_object_model((fixtures_dir / "dpp.objs").read_text(),
                                 model).model
    parsed = parse_ocl(
        "context ProductPassport inv hasCode: self.code <> ''\n"
        "context ProductPassport inv allStarted:"
        "  self.stages->forAll(s | s.start_date <> '')\n")
    assert parsed.ok
    for constraint in parsed.constraints:
        expected = naive_check(constraint, objects, model)
        actual = evaluate_constraint(constraint, objects, model)
        assert [(r.object_id, r.verdict) for r in actual.per_instance] == expected
        assert all(v == "true" for _, v in expected)


def test_batch_checking_matches_per_constraint_oracle_runs():
    rng = random.Random(777)
    for _ in range(30):
        model, objects = random_instanced_model(rng)
        constraints = [
            OclConstraint(rng.choice(model.classes).name, f"inv{k}",
                          random_expression(rng, model, depth=3))
            for k in range(3)
        ]
        results = check_all(constraints, objects, model)
        for constraint, result in zip(constraints, results):
            expected = naive_check(constraint, objects, model)
            if expected is None:
                assert result.message is not None
            else:
                assert [(r.object_id, r.verdict)
                        for r in result.per_instance] == expected
