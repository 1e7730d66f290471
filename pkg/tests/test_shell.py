import json

import pytest
from hypothesis import given

from conftest import REPO, forms_any_degree, model_names
from lckforge.deformation import FrameEndomorphism
from lckforge.exterior import Form, wedge
from lckforge.model import CATALOG_NAMES, ModelError, catalog
from lckforge.scalars import I, gr
from lckforge.shell import (
    ParseError,
    emit_json,
    endo_json,
    form_json,
    format_endo,
    format_form,
    format_scalar,
    load_model,
    parse_endo,
    parse_endo_series,
    parse_form,
    parse_form_series,
    parse_model,
)

t1, t2, tb1, tb2 = Form.theta(1), Form.theta(2), Form.theta_bar(1), Form.theta_bar(2)
SM_TEXT = (REPO / "models" / "inoue_sm.lck").read_text()


def test_parse_omega(inoue):
    assert parse_form("-i t1 ^ tb1 - i t2 ^ tb2", inoue) == inoue.omega
    assert parse_form("omega", inoue) == inoue.omega
    assert parse_form("eta ^ omega", inoue) == wedge(inoue.eta, inoue.omega)


def test_parse_scalars():
    assert parse_form("(1/2 + 0/1 i) t1", n=2) == t1.scale(gr("1/2"))
    assert parse_form("1/2 i t1", n=2) == t1.scale(gr(0, "1/2"))
    assert parse_form("(3 - 2/5 i)", n=2) == Form.scalar(gr(3, "-2/5"))
    assert parse_form("-i", n=2) == Form.scalar(-I)
    assert parse_form("t1 ^ t1", n=2).is_zero()


def test_precedence():
    # scalar multiplication binds tighter than wedge, wedge tighter than sum
    assert parse_form("2 t1 ^ t2 + tb1", n=2) == wedge(t1, t2).scale(2) + tb1
    assert parse_form("t1 ^ (t2 + tb2)", n=2) == wedge(t1, t2) + wedge(t1, tb2)
    assert parse_form("-t1 ^ t2", n=2) == -wedge(t1, t2)
    assert parse_form("  t1^tb1 ", n=2) == parse_form("t1 ^ tb1", n=2)


@pytest.mark.parametrize(
    "text,col",
    [("1/2i t1", 1), ("t1 ^", 5), ("t1 + * t2", 6), ("t3", 1), ("(t1", 4), ("t1 t2", 4)],
)
def test_parse_errors_are_located(text, col):
    with pytest.raises(ParseError) as info:
        parse_form(text, n=2)
    assert info.value.line == 1 and info.value.column == col


def test_ambiguous_scalar_message():
    with pytest.raises(ParseError, match="ambiguous"):
        parse_form("1/2i", n=2)


def test_parse_endo():
    e = parse_endo("X2 (x) tb1", n=2)
    assert e == FrameEndomorphism.term((0, 2), (1, 1))
    e = parse_endo("i X2 (x) tb1 - i Xb2 (x) t1", n=2)
    assert e.is_real()
    assert parse_endo(format_endo(e), n=2) == e
    with pytest.raises(ParseError):
        parse_endo("X2 tb1", n=2)
    with pytest.raises(ParseError):
        parse_endo("X3 (x) t1", n=2)


def test_series_specs(sm):
    s = parse_form_series("s: eta; s^3: omega", sm)
    assert s == [Form(), sm.eta, Form(), sm.omega]
    a = parse_endo_series("t: X2 (x) tb1", sm)
    assert a.order == 1 and a[1] == FrameEndomorphism.term((0, 2), (1, 1))
    with pytest.raises(ParseError):
        parse_form_series("t: eta", sm)


def test_format_scalar():
    assert format_scalar(gr("1/2")) == "1/2"
    assert format_scalar(-I) == "-i"
    assert format_scalar(gr(0, "3/4")) == "3/4 i"
    assert format_scalar(gr("1/2", "-1/3")) == "(1/2 - 1/3 i)"


def test_format_form_examples(sm):
    assert format_form(Form()) == "0"
    assert format_form(sm.omega) == "-i t1 ^ tb1 - i t2 ^ tb2"


@given(model_names, forms_any_degree(2))
def test_parse_print_roundtrip(name, f):
    m = catalog(name)
    text = format_form(f)
    assert parse_form(text, m) == f
    assert format_form(parse_form(text, m)) == text


@pytest.mark.parametrize("text", ["t1 ^ tb1 + tb1 ^ t1", "(1 + i) (1 - i) t2", "t2 ^ t1 + 0 tb1", "2 (t1 - t1)"])
def test_print_parse_canonicalises(text):
    once = format_form(parse_form(text, n=2))
    assert format_form(parse_form(once, n=2)) == once


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_shipped_model_files(name):
    text = (REPO / "models" / f"{name}.lck").read_text()
    m = parse_model(text, source=name)
    assert m.same_data(catalog(name)) and m.name == name
    assert load_model(str(REPO / "models" / f"{name}.lck")).same_data(catalog(name))
    assert load_model(name).same_data(catalog(name))


def test_model_missing_eta():
    text = "\n".join(l for l in SM_TEXT.splitlines() if not l.startswith("eta"))
    with pytest.raises(ParseError, match="missing section eta"):
        parse_model(text)


def test_model_odd_degree_equation():
    text = SM_TEXT.replace("d t1 = -1/2 i tb1 ^ t1", "d t1 = t1")
    with pytest.raises(ParseError, match="structure equation must have degree 2") as info:
        parse_model(text)
    assert info.value.line == 5


def test_model_validation_failure():
    text = SM_TEXT.replace("eta = -1/2 i t1 + 1/2 i tb1", "eta = t2 + tb2")
    with pytest.raises(ModelError) as info:
        parse_model(text)
    assert "d eta = 0" in str(info.value)
    assert parse_model(text, check=False).eta == t2 + tb2


def test_model_syntax_error_location():
    text = SM_TEXT.replace("omega = -i t1", "omega = -i t1 ^^")
    with pytest.raises(ParseError) as info:
        parse_model(text)
    assert info.value.line == text.splitlines().index(next(l for l in text.splitlines() if "^^" in l)) + 1


def test_load_model_unknown():
    with pytest.raises(ModelError):
        load_model("no_such_model")


def test_emit_json_examples(sm):
    assert form_json(Form()) == []
    assert json.dumps(form_json(sm.omega), separators=(",", ":")) == '[["t1^tb1","0/1-1/1*i"],["t2^tb2","0/1-1/1*i"]]'
    assert endo_json(FrameEndomorphism.term((0, 2), (1, 1))) == [["X2", "tb1", "1/1+0/1*i"]]
    doc = {"command": "x", "model": None, "inputs": {}, "results": {"f": form_json(sm.omega)}, "certificates": {}}
    text = emit_json(doc)
    assert text == emit_json(doc) and text.endswith("\n")
    assert list(json.loads(text)) == ["command", "model", "inputs", "results", "certificates"]
