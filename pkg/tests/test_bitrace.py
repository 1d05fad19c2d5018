from src.Budget import Budget, BudgetExceeded
from src.BiTrace import BiTrace, BiTraceCatalog
from src.ClosureContext import ClosureContext
from src.Formula import parse
import sys
from pathlib import Path
import pytest

# Add src directory to Python path
sys.path.insert(0, str(Path(__file__).parent.parent))


@pytest.fixture
def catalog():
    """Bi-traces of F p: clusters c0 = {m0, m1} below c1 = {m3}."""
    return BiTraceCatalog(ClosureContext(parse("F p")))


def trace(*values):
    """Bi-trace from its interleaved form (lower, upper, transition, lower, upper, ...)."""
    return BiTrace.from_interleaved(values)


def test_interleaved_form():
    """Test conversion between the interleaved and the three-tuple forms."""
    t = trace(0, 0, 2, 1, 1)
    assert t.lower == (0, 1)
    assert t.upper == (0, 1)
    assert t.transitions == (2,)
    assert t.length == 1
    assert t.initial == (0, 0)
    assert t.final == (1, 1)
    assert t.interleaved() == [0, 0, 2, 1, 1]
    assert str(t) == "(0,0,2,1,1)"
    assert BiTrace.pair(0, 1) == trace(0, 1)
    with pytest.raises(ValueError):
        BiTrace.from_interleaved([0, 0, 2, 1])


def test_validate(catalog):
    """Test bi-trace validity: a transition must fit between the clusters around it."""
    assert catalog.validate(trace(0, 0, 2, 1, 1))
    assert not catalog.validate(trace(0, 0, 0, 1, 1))
    assert catalog.validate(trace(0, 1))
    assert not catalog.validate(trace(1, 0))
    assert not catalog.validate(trace(0, 0, 2, 0, 0))
    assert not catalog.validate(trace(0, 7))


def test_enumerate_all(catalog):
    """Test that F p has exactly 13 bi-traces, shortest first."""
    traces = catalog.all()
    assert len(traces) == 13
    lengths = [t.length for t in traces]
    assert lengths == sorted(lengths)
    assert lengths.count(0) == 3
    assert lengths.count(1) == 6
    assert lengths.count(2) == 4
    assert all(catalog.validate(t) for t in traces)


def test_enumerate_filters(catalog):
    """Test the enumeration filters."""
    assert len(catalog.enumerate(initial_upper=0)) == 9
    assert len(catalog.enumerate(final_lower=1)) == 9
    assert len(catalog.enumerate(max_length=0)) == 3
    assert catalog.enumerate(initial=(0, 1), final=(1, 1), max_length=1) == [
        trace(0, 1, 2, 1, 1),
        trace(0, 1, 3, 1, 1),
    ]
    constant = catalog.enumerate(lower_constant=0)
    assert constant == [trace(0, 0), trace(0, 1), trace(0, 0, 2, 0, 1), trace(0, 0, 3, 0, 1)]
    assert catalog.enumerate(upper_constant=1) == [trace(0, 1), trace(1, 1), trace(0, 1, 2, 1, 1), trace(0, 1, 3, 1, 1)]


def test_concat(catalog):
    """Test plain and merging concatenation."""
    assert catalog.concat(trace(0, 0), 2, trace(1, 1)) == trace(0, 0, 2, 1, 1)
    assert catalog.concat(trace(0, 0), 0, trace(0, 0, 2, 1, 1)) == trace(0, 0, 2, 1, 1)
    assert catalog.concat(trace(1, 1), 2, trace(0, 0)) is None
    assert catalog.concat(trace(0, 0), 0, trace(0, 0)) == trace(0, 0)


def test_splits_invert_concat(catalog):
    """Test that every split of a bi-trace concatenates back to it."""
    t = trace(0, 0, 2, 1, 1)
    splits = catalog.splits(t)
    assert len(splits) == 4
    assert (trace(0, 0), 2, trace(1, 1)) in splits
    for first, a, second in splits:
        assert catalog.concat(first, a, second) == t


def test_enumeration_budget():
    """Test that enumeration charges the shared budget."""
    ctx = ClosureContext(parse("F p"), Budget(max_enumerated=5))
    with pytest.raises(BudgetExceeded):
        BiTraceCatalog(ctx).all()
