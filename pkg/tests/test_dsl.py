import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyfeq import dsl
from polyfeq.equations import solve_equation
from polyfeq.verify import fuzz_inputs, golden_specs

SAMPLE = "group G = Z5; hom c : G -> G = [[2]]; unknown f : G -> G; equation forall x y . f(x + c(y)) = 0; claim degree f <= 1;"


def test_sample_document_lowers_to_homogeneous_equation():
    doc = dsl.parse(SAMPLE.encode())
    assert [type(d).__name__ for d in doc.declarations] == ["GroupDecl", "HomDecl", "UnknownDecl", "EquationDecl", "ClaimDecl"]
    prog = dsl.lower(doc)
    eq = prog.equation
    assert len(eq.unknowns) == 1 and eq.is_homogeneous() and eq.claimed_bound == 1
    assert str(eq.terms[0]) == "f(x + 2*y)"


@pytest.mark.parametrize(
    "text, error, line, col",
    [
        ("group G = Z5; hom c : G -> G = [[2,0]];", dsl.ShapeError, 1, 32),
        ("equation forall x . f(x) = 0;", dsl.ResolutionError, 1, 21),
        ("group G = Z5 $", dsl.LexError, 1, 14),
        ("group G = Z5", dsl.ParseError, 1, 13),
        ("group G = Z5;\nknown t : G -> G = table [1, 2];", dsl.ShapeError, 2, 26),
        ("group G = Z5;\ngroup G = Z3;", dsl.ResolutionError, 2, 7),
        ("group G = Z2; group K = Z3; unknown f : G -> G; unknown g : K -> G;\nequation forall x . f(x) + g(x) = 0;", dsl.ShapeError, 2, 1),
        ("group G = Z2; unknown f : G -> G; equation forall x y . f(x) = 0;", dsl.ResolutionError, 1, 35),
    ],
)
def test_errors_carry_position_and_expectations(text, error, line, col):
    with pytest.raises(error) as exc:
        dsl.parse(text)
    assert (exc.value.line, exc.value.column) == (line, col)
    assert exc.value.expected
    assert f"{line}:{col}:" in str(exc.value)


def test_invalid_utf8():
    with pytest.raises(dsl.LexError) as exc:
        dsl.parse(b"group G = Z5;\n\xff")
    assert (exc.value.line, exc.value.column) == (2, 1)


def test_comments_and_whitespace_are_ignored():
    a = dsl.parse("group   G=Z4xZ2 ; # trailing\n")
    assert a == dsl.parse("group G = Z4 x Z2;")
    assert dsl.print_document(a) == "group G = Z4 x Z2;\n"


def test_spans_are_excluded_from_equality():
    a = dsl.parse("group G = Z5;")
    b = dsl.parse("\n\n   group G = Z5;")
    assert a == b
    assert a.declarations[0].span != b.declarations[0].span
    assert b.declarations[0].span == (5, 18)


def test_builder_shorthand():
    prog = dsl.lower(dsl.parse("knw(p=13, N=3, w=3);"))
    assert prog.equation.name == "knw" and prog.claims[0].bound == 3
    with pytest.raises(dsl.LoweringError):
        dsl.lower(dsl.parse("knw(p=13, N=3, w=4);"))
    with pytest.raises(dsl.ResolutionError):
        dsl.parse("knw(p=13);")


def test_products_need_a_ring():
    text = "group G = Z2; unknown f : G -> G; known k : G -> G = table [0, 1];\nequation forall x y . f(x + y) = k(x)*k(y);"
    with pytest.raises(dsl.LoweringError):
        dsl.lower(dsl.parse(text))


def test_negative_table_values_reduce():
    prog = dsl.lower(dsl.parse("group G = Z5; known t : G -> G = table [0, -2, 7, 3, -1];"))
    assert prog.knowns["t"].to_list() == [0, 3, 2, 3, 4]


def test_explicit_cube_split_solves_to_cube():
    doc = dsl.parse(golden_specs()["cube_split_z7.feq"])
    r = solve_equation(dsl.lower(doc).equation)
    assert r.particular_tables()["f"].to_list() == [0, 1, 1, 6, 1, 6, 6]


def test_twenty_golden_specs_are_canonical():
    specs = golden_specs()
    assert len(specs) == 20
    for name, text in specs.items():
        doc = dsl.parse(text.encode())
        assert dsl.print_document(doc) == text, name
        assert dsl.parse(dsl.print_document(doc)) == doc, name
        dsl.lower(doc)


def test_fuzzed_inputs_never_crash():
    for data in fuzz_inputs(1, 2000):
        try:
            doc = dsl.parse(data)
        except dsl.ParseError as exc:
            assert exc.expected and exc.line >= 1 and exc.column >= 1
        else:
            assert dsl.parse(dsl.print_document(doc)) == doc


@given(st.binary(max_size=512))
def test_random_bytes_parse_or_raise_parse_error(data):
    try:
        dsl.parse(data)
    except dsl.ParseError:
        pass


@given(st.lists(st.integers(-20, 20), min_size=5, max_size=5), st.lists(st.integers(-9, 9), min_size=1, max_size=3))
def test_print_parse_roundtrip_generated(values, coeffs):
    terms = "".join(f"{'-' if c < 0 else '+'} {abs(c)}*f(x + {k}*y) " for k, c in enumerate(coeffs)).lstrip("+ ")
    text = f"group G = Z5; known t : G -> G = table [{', '.join(map(str, values))}]; unknown f : G -> G;\nequation forall x y . {terms} = t(x) - 2*t(y);"
    doc = dsl.parse(text)
    assert dsl.parse(dsl.print_document(doc)) == doc
