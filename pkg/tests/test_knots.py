from __future__ import annotations

import json

import pytest

from knotrep.alexander import alexander_polynomial
from knotrep.errors import InconsistentPDError, NotAKnotError, ParseError, UnknownKnotError
from knotrep.knots import (KnotInput, Word, load_table, parse_braid, parse_knot_input, parse_pd, parse_presentation,
                           simplify_presentation, trefoil_two_generator, wirtinger_presentation)

TREFOIL_PD = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"


def test_word_free_reduction():
    w = Word([(0, 1), (1, 1), (1, -1), (0, 2)])
    assert w.letters == ((0, 1), (0, 1), (0, 1))
    assert (w * w.inverse()).letters == ()
    assert Word([(0, 1), (1, -2)]) ** -1 == Word([(1, 2), (0, -1)])


def test_word_substitute_and_cyclic_reduction():
    w = Word([(0, 1), (1, 1), (0, -1)])
    assert w.cyclically_reduced() == Word.gen(1)
    img = w.substitute([Word.gen(1), Word.gen(0)])
    assert img == Word([(1, 1), (0, 1), (1, -1)])


@pytest.mark.parametrize("text,expected", [
    ("s1 s2^-1 s1 s2^-1", (1, -2, 1, -2)),
    ("1 -2 1 -2", (1, -2, 1, -2)),
    ("[1,-2,1,-2]", (1, -2, 1, -2)),
    ("s1 S2", (1, -2)),
    ("s1^(-1)", (-1,)),
])
def test_parse_braid_forms(text, expected):
    assert parse_braid(text) == expected


def test_parse_braid_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse_braid("s1 x2")
    assert err.value.position == 3
    with pytest.raises(ParseError):
        parse_braid("s0")


def test_parse_pd_forms_agree():
    assert parse_pd(TREFOIL_PD) == parse_pd("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]")


def test_pd_errors():
    with pytest.raises(ParseError):
        parse_pd("X[1,2,3]")
    with pytest.raises(InconsistentPDError):
        parse_knot_input("X[1,4,2,5] X[3,6,4,1] X[5,2,6,7]", "pd")
    with pytest.raises(NotAKnotError):
        wirtinger_presentation(parse_knot_input(TREFOIL_PD + " X[7,8,7,8]", "pd"))


def test_links_are_rejected():
    with pytest.raises(NotAKnotError):
        wirtinger_presentation(parse_knot_input("s1 s1", "braid"))
    with pytest.raises(NotAKnotError) as err:
        wirtinger_presentation(parse_knot_input("s1 s1 s2 s2", "braid"))
    assert err.value.code == "NOT_A_KNOT"


def test_unknown_knot():
    with pytest.raises(UnknownKnotError) as err:
        parse_knot_input("9_9", "name", load_table())
    assert err.value.code == "UNKNOWN_KNOT"


def test_wirtinger_shape():
    p = wirtinger_presentation(parse_knot_input("s1 s2^-1 s1 s2^-1", "braid"))
    assert p.num_generators == 4
    assert p.deficiency == 1
    assert p.phi == (1, 1, 1, 1)
    assert p.meridian == 0


def test_presentation_text_round_trip():
    p = wirtinger_presentation("5_2", load_table())
    q = parse_presentation(p.to_text())
    assert (q.generators, q.relators, q.phi) == (p.generators, p.relators, p.phi)


def test_presentation_equation_form():
    p = parse_presentation("<a,b | a b a = b a b>")
    assert p.relator_strings() == ["a b a b^-1 a^-1 b^-1"]
    assert p.phi == (1, 1)


def test_presentation_phi_for_other_weights():
    # x^2 = y^3 is the trefoil group; a meridian generator must be present
    with pytest.raises(NotAKnotError):
        parse_presentation("<x,y | x^2 = y^3>")
    p = parse_presentation("<x,y,m | x^2 = y^3, m = x y^-1>")
    assert p.phi == (3, 2, 1)
    assert p.generators[p.meridian] == "m"
    assert alexander_polynomial(p).to_string() == "t^2 - t + 1"


def test_presentation_rejects_wrong_deficiency_input():
    with pytest.raises(ParseError):
        parse_presentation("<a,b | a b a = b a b")


def test_table_braid_and_pd_agree():
    table = load_table()
    for name, entry in table.items():
        if not entry.pd:
            continue
        by_braid = alexander_polynomial(wirtinger_presentation(KnotInput("braid", braid=entry.braid)))
        by_pd = alexander_polynomial(wirtinger_presentation(KnotInput("pd", pd=entry.pd)))
        assert by_braid == by_pd, name


def test_table_env_override(tmp_path, monkeypatch):
    path = tmp_path / "table.json"
    path.write_text(json.dumps([{"name": "tref", "braid": [1, 1, 1], "pd": [], "comment": "custom"}]))
    monkeypatch.setenv("KNOTREP_TABLE", str(path))
    table = load_table()
    assert list(table) == ["tref"]
    assert alexander_polynomial(wirtinger_presentation("tref", table)).to_string() == "t^2 - t + 1"


def test_simplification_keeps_group_invariants():
    table = load_table()
    for name in ("3_1", "4_1", "5_2", "6_1"):
        p = wirtinger_presentation(name, table)
        q = simplify_presentation(p)
        assert q.num_generators <= p.num_generators
        assert q.deficiency == 1
        assert q.phi[q.meridian] == 1
        assert alexander_polynomial(q) == alexander_polynomial(p)


def test_two_generator_trefoil():
    p = trefoil_two_generator()
    assert p.generators == ("S", "T")
    assert alexander_polynomial(p).to_string() == "t^2 - t + 1"
