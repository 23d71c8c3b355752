import dataclasses
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigidity.model import (BUILTIN_MODELS, ConstraintFamily, ConstraintTerm, ModelInvariantError,
                            ModelSchemaError, ModelSyntaxError, SpinModel, load_builtin, load_model,
                            model_to_obj, parse_model, serialize, validate)


def _doc(**over):
    obj = {"name": "t", "dim": 1, "sublattices": 1,
           "constraints": [{"label": "c", "terms": [
               {"sublattice": 0, "offset": [0], "coeff": 1, "spin_sign": 1}]}]}
    obj.update(over)
    return obj


def test_j1j2_builtin_structure():
    m = load_builtin("j1j2_square")
    assert (m.dim, m.sublattices, m.n_families) == (2, 1, 1)
    terms = m.constraints[0].terms
    assert [t.offset for t in terms] == [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert [t.spin_sign for t in terms] == [1, -1, -1, 1]
    assert all(t.coeff == 1 for t in terms)


@pytest.mark.parametrize("name", BUILTIN_MODELS)
def test_builtins_validate_clean(name):
    assert validate(load_builtin(name)) == []


def test_pyrochlore_shape():
    m = load_builtin("pyrochlore")
    assert (m.dim, m.sublattices, m.n_families) == (3, 4, 2)


def test_unknown_builtin():
    with pytest.raises(KeyError, match="unknown built-in"):
        load_builtin("kagome")


def test_empty_constraint_list_is_schema_error():
    with pytest.raises(ModelSchemaError, match="constraints"):
        parse_model(json.dumps(_doc(constraints=[])))


def test_duplicate_term_is_invariant_error():
    doc = _doc()
    doc["constraints"][0]["terms"].append({"sublattice": 0, "offset": [0], "coeff": 2, "spin_sign": -1})
    with pytest.raises(ModelInvariantError, match="duplicate"):
        parse_model(json.dumps(doc))


def test_dimension_out_of_range():
    m = dataclasses.replace(load_builtin("j1j2_square"), dim=9)
    diags = validate(m)
    assert diags[0].level == "error"
    assert "dimension out of supported range" in diags[0].message


def test_zero_coefficient_names_family_and_term():
    doc = _doc()
    doc["constraints"][0]["terms"][0]["coeff"] = 0
    with pytest.raises(ModelInvariantError) as exc:
        parse_model(json.dumps(doc))
    d = exc.value.diagnostics[0]
    assert (d.family, d.term) == (0, 0)
    assert "'c'" in d.message and "zero" in d.message


def test_syntax_error_has_position():
    with pytest.raises(ModelSyntaxError) as exc:
        parse_model('{"name": "x",\n  "dim": }')
    assert exc.value.line == 2 and exc.value.column > 1


@pytest.mark.parametrize("mutate, field", [
    (lambda d: d.pop("dim"), "dim"),
    (lambda d: d.update(dim="two"), "dim"),
    (lambda d: d["constraints"][0]["terms"][0].update(offset=[0.5]), "offset"),
    (lambda d: d.update(extra=1), "extra"),
])
def test_schema_errors_name_field(mutate, field):
    doc = _doc()
    mutate(doc)
    with pytest.raises(ModelSchemaError, match=field):
        parse_model(json.dumps(doc))


def test_diagnostics_ordered():
    fam0 = ConstraintFamily("a", (ConstraintTerm(0, (0,), 0.0, 1), ConstraintTerm(5, (0,), 1.0, 2)))
    fam1 = ConstraintFamily("b", (ConstraintTerm(0, (0, 0), 1.0, 1),))
    diags = validate(SpinModel("m", 1, 1, (fam0, fam1)))
    keys = [(d.family, d.term) for d in diags]
    assert keys == sorted(keys)
    assert validate(SpinModel("m", 1, 1, (fam0, fam1))) == diags


def test_load_model_from_file(tmp_path):
    p = tmp_path / "m.json"
    p.write_text(serialize(load_builtin("pyrochlore")), encoding="utf-8")
    assert load_model(p) == load_builtin("pyrochlore")


@st.composite
def models(draw):
    dim = draw(st.integers(1, 3))
    subl = draw(st.integers(1, 3))
    fams = []
    for fi in range(draw(st.integers(1, 3))):
        keys = draw(st.lists(st.tuples(st.integers(0, subl - 1),
                                       st.tuples(*[st.integers(-2, 2)] * dim)),
                             min_size=1, max_size=4, unique=True))
        terms = tuple(ConstraintTerm(s, off, draw(st.sampled_from([1.0, -1.0, 0.5, 2.0])),
                                     draw(st.sampled_from([1, -1]))) for s, off in keys)
        fams.append(ConstraintFamily(f"f{fi}", terms))
    return SpinModel(draw(st.text("abc_", min_size=1, max_size=6)), dim, subl, tuple(fams))


@settings(max_examples=80, deadline=None)
@given(models())
def test_serialize_round_trip(m):
    assert parse_model(serialize(m)) == m
    assert model_to_obj(parse_model(serialize(m))) == model_to_obj(m)
