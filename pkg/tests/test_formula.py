from src.Formula import (
    TRUE,
    F,
    Not,
    Or,
    P,
    ParseError,
    Var,
    always_future,
    conj,
    implies,
    parse,
    pretty,
    reflexive_rewrite,
    size,
    temporal_mirror,
    variables,
)
import sys
from pathlib import Path
import pytest
from hypothesis import given, strategies as st

# Add src directory to Python path
sys.path.insert(0, str(Path(__file__).parent.parent))


def formulas():
    """Strategy producing small desugared formulas over p, q and r."""
    leaves = st.one_of(st.sampled_from([Var("p"), Var("q"), Var("r")]), st.just(TRUE))
    return st.recursive(
        leaves,
        lambda children: st.one_of(
            children.map(Not),
            children.map(F),
            children.map(P),
            st.tuples(children, children).map(lambda pair: Or(*pair)),
        ),
        max_leaves=8,
    )


def test_parse_desugars_surface_connectives():
    """Test that &, ->, G, H and false are rewritten into the six primitive kinds."""
    p, q = Var("p"), Var("q")
    assert parse("p & q") == conj(p, q)
    assert parse("p -> q") == implies(p, q)
    assert parse("G p") == Not(F(Not(p)))
    assert parse("H p") == Not(P(Not(p)))
    assert parse("false") == Not(TRUE)
    assert parse("true") == TRUE


def test_parse_precedence_and_associativity():
    """Test that unary binds tightest, then &, then |, and -> associates to the right."""
    p, q, r = Var("p"), Var("q"), Var("r")
    assert parse("p | q & r") == Or(p, conj(q, r))
    assert parse("p -> q -> r") == implies(p, implies(q, r))
    assert parse("~F p | q") == Or(Not(F(p)), q)
    assert parse("F F p -> F p") == implies(F(F(p)), F(p))
    assert parse("(p)") == p


def test_parse_identifiers_starting_with_modal_letters():
    """Test that upper-case modal letters are operators while lower-case words are variables."""
    assert parse("Fp") == F(Var("p"))
    assert parse("f_1 | g") == Or(Var("f_1"), Var("g"))


def test_parse_errors_report_offset_and_expectation():
    """Test that malformed input raises ParseError with a byte offset."""
    with pytest.raises(ParseError) as info:
        parse("p &")
    assert info.value.offset == 3

    with pytest.raises(ParseError):
        parse("(p | q")

    with pytest.raises(ParseError) as info:
        parse("p $ q")
    assert info.value.offset == 2

    with pytest.raises(ParseError):
        parse("p q")

    with pytest.raises(ParseError):
        parse("")


def test_pretty_round_trip_on_examples():
    """Test that pretty output parses back to the same formula."""
    for text in ["F F p -> F p", "G F p -> F G p", "(F p & F q) -> F (p & q)", "H ~P true"]:
        formula = parse(text)
        assert parse(pretty(formula)) == formula


@given(formulas())
def test_pretty_round_trip_property(formula):
    """Test parse(pretty(phi)) == phi on random formulas."""
    assert parse(pretty(formula)) == formula


def test_reflexive_rewrite():
    """Test that F psi becomes psi' | F psi' bottom-up, and P dually."""
    p = Var("p")
    assert reflexive_rewrite(F(p)) == Or(p, F(p))
    assert reflexive_rewrite(P(Not(p))) == Or(Not(p), P(Not(p)))
    inner = Or(p, F(p))
    assert reflexive_rewrite(F(F(p))) == Or(inner, F(inner))
    assert reflexive_rewrite(Or(p, TRUE)) == Or(p, TRUE)


def test_temporal_mirror_swaps_directions():
    """Test that the mirror swaps F and P and is an involution."""
    formula = parse("F (p & P q) -> G H r")
    mirrored = temporal_mirror(formula)
    assert mirrored == parse("P (p & F q) -> H G r")
    assert temporal_mirror(mirrored) == formula


def test_size_and_variables():
    """Test node counting and variable collection."""
    assert size(Var("p")) == 1
    assert size(parse("F p")) == 2
    assert size(always_future(Var("p"))) == 4
    assert variables(parse("F q | (p & q)")) == ["q", "p"]
    assert variables(TRUE) == []


def test_str_uses_pretty_printer():
    """Test that str() of a formula is its pretty form."""
    formula = parse("p | F q")
    assert str(formula) == pretty(formula) == "(p | F q)"
