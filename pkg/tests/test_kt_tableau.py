from src.Budget import Budget, BudgetExceeded
from src.ClosureTable import closure
from src.Formula import parse
from src.KtTableau import KtTableau, kt_sat, kt_sat_bounded_oracle, tableau_for
from tests.strategies import formulas
import sys
from pathlib import Path
import pytest
from hypothesis import given, settings, strategies as st

# Add src directory to Python path
sys.path.insert(0, str(Path(__file__).parent.parent))


def root_goal(table):
    """Goal asserting the root formula of a closure."""
    return [2 * table.root]


def test_kt_sat_simple_cases():
    """Test K_t satisfiability on a handful of formulas with known answers."""
    cases = {
        "p": True,
        "p & ~p": False,
        "F p & G ~p": False,
        "F p & P ~p": True,
        "F F p & G ~p": True,
        "p & G H ~p": True,
        "p & F true & G H ~p": False,
        "P q & H F ~q": True,
    }
    for text, expected in cases.items():
        table = closure(parse(text))
        assert kt_sat(table, root_goal(table)) is expected, text


def test_kt_sat_agrees_with_bounded_oracle():
    """Test that the tableau and the brute-force model search agree on small formulas."""
    for text in ["F p & G ~p", "p & G H ~p", "p & F true & G H ~p", "F p & F ~p", "P F p & H ~p"]:
        table = closure(parse(text))
        assert kt_sat(table, root_goal(table)) == kt_sat_bounded_oracle(table, root_goal(table), 2), text


@pytest.mark.slow
@settings(max_examples=100, deadline=None)
@given(formulas(), st.integers(min_value=1, max_value=3))
def test_bounded_models_never_contradict_the_tableau(formula, k):
    """Test that a formula with a model of at most k worlds is never refuted by the tableau."""
    table = closure(formula)
    if not kt_sat(table, root_goal(table)):
        assert not kt_sat_bounded_oracle(table, root_goal(table), k)


@pytest.mark.slow
@settings(max_examples=15, deadline=None)
@given(formulas(max_connectives=4, letters=("p",)))
def test_four_world_models_never_contradict_the_tableau(formula):
    """Test the same implication on one-letter formulas with models of up to four worlds."""
    table = closure(formula)
    if kt_sat_bounded_oracle(table, root_goal(table), 4):
        assert kt_sat(table, root_goal(table))


def test_non_transitive_demand_needs_three_worlds():
    """Test that ~p & F F p & G ~p needs a chain of three worlds in the oracle."""
    table = closure(parse("~p & F F p & G ~p"))
    assert kt_sat(table, root_goal(table))
    assert not kt_sat_bounded_oracle(table, root_goal(table), 2)
    assert kt_sat_bounded_oracle(table, root_goal(table), 3)


def test_goals_are_read_conjunctively():
    """Test that a goal with several signed entries is a conjunction."""
    table = closure(parse("F p"))
    assert kt_sat(table, [2, 1])  # F p and ~p
    assert kt_sat(table, [3, 0])  # ~F p and p
    assert kt_sat(table, [])


def test_surviving_bits_of_future_closure():
    """Test that every propositional type of F p is K_t satisfiable."""
    tableau = KtTableau(closure(parse("F p")))
    assert sorted(tableau.surviving_bits()) == [0, 1, 2, 3]
    assert tableau.types.shape == (4, 2)


def test_tableau_is_cached_per_closure():
    """Test that elimination runs once per closure object."""
    table = closure(parse("F p | P p"))
    assert tableau_for(table) is tableau_for(table)
    assert tableau_for(closure(parse("F p | P p"))) is not tableau_for(table)


def test_budget_is_charged():
    """Test that a tiny expansion budget raises BudgetExceeded."""
    table = closure(parse("F p & P q"))
    with pytest.raises(BudgetExceeded) as info:
        kt_sat(table, root_goal(table), Budget(max_kt_expansions=1))
    assert info.value.counter == "kt_expansions"


def test_oracle_rejects_non_positive_bound():
    """Test that the oracle needs at least one world."""
    table = closure(parse("p"))
    with pytest.raises(ValueError):
        kt_sat_bounded_oracle(table, root_goal(table), 0)
