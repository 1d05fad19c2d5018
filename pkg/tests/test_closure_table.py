from src.ClosureTable import ClosureTable, closure
from src.Formula import F, Not, Or, Var, parse
import sys
from pathlib import Path
import pytest

# Add src directory to Python path
sys.path.insert(0, str(Path(__file__).parent.parent))


@pytest.fixture
def future_closure():
    """Closure of F p: subformula 0 is p, subformula 1 is F p."""
    return closure(parse("F p"))


def test_post_order_numbering(future_closure):
    """Test that children are numbered before their parents and the root comes last."""
    assert future_closure.subformulas == [Var("p"), F(Var("p"))]
    assert future_closure.root == 1
    assert future_closure.child_index == [(), (0,)]
    assert len(future_closure) == 4
    assert future_closure.num_subformulas == 2


def test_shared_subformulas_are_stored_once():
    """Test that repeated subtrees get a single index."""
    table = ClosureTable(parse("F p | ~F p"))
    assert table.subformulas.count(F(Var("p"))) == 1
    assert table.subformulas[table.root] == Or(F(Var("p")), Not(F(Var("p"))))
    for i, children in enumerate(table.child_index):
        assert all(child < i for child in children)


def test_entries_and_negation(future_closure):
    """Test the 2i / 2i + 1 entry encoding."""
    assert future_closure.entry(F(Var("p"))) == 2
    assert future_closure.entry(F(Var("p")), positive=False) == 3
    assert ClosureTable.negate(2) == 3
    assert ClosureTable.negate(3) == 2
    assert ClosureTable.subformula_of(3) == 1
    assert ClosureTable.is_positive(2)
    assert not ClosureTable.is_positive(1)
    assert future_closure.describe(0) == "p"
    assert future_closure.describe(3) == "~F p"


def test_temporal_and_free_nodes():
    """Test that F and P nodes are listed with their argument index."""
    table = closure(parse("F p | P q"))
    p, q = table.index[Var("p")], table.index[Var("q")]
    fp, pq = table.index[F(Var("p"))], table.index[parse("P q")]
    assert table.future_nodes == [(fp, p)]
    assert table.past_nodes == [(pq, q)]
    assert set(table.free_nodes) == {p, q, fp, pq}


def test_evaluate_bits_propagates_boolean_nodes():
    """Test completion of free values to a full bit vector."""
    table = closure(parse("~p | F p"))
    p, fp = table.index[Var("p")], table.index[F(Var("p"))]
    bits = table.evaluate_bits({p: True, fp: False})
    assert (bits >> p) & 1 == 1
    assert (bits >> fp) & 1 == 0
    assert (bits >> table.index[Not(Var("p"))]) & 1 == 0
    assert (bits >> table.root) & 1 == 0


def test_repr_and_str(future_closure):
    """Test the string representation methods of ClosureTable."""
    assert "ClosureTable" in repr(future_closure)
    assert "entries=4" in repr(future_closure)
    text = str(future_closure)
    assert "Closure of F p:" in text
    assert "[2] F p" in text
    assert "[3] ~F p" in text
