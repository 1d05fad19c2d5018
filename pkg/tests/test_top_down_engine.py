from src.Biboundary import Biboundary
from src.BiboundaryUniverse import BiboundaryUniverse
from src.BiTrace import BiTrace
from src.Budget import Budget, BudgetExceeded
from src.ClosureContext import ClosureContext
from src.Derivation import check_derivation
from src.FabricationOracle import FabricationOracle
from src.FabricationRules import GROUND, SHUFFLE, FabricationRules
from src.Formula import parse
from src.Saturation import saturate
from src.TopDownEngine import TopDownEngine
import sys
from pathlib import Path
import pytest

# Add src directory to Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

SMALL_SHAPES = [frozenset(), frozenset("N"), frozenset("S"), frozenset("E"), frozenset("W")]
PAIR_00 = BiTrace.pair(0, 0)
STEP = BiTrace.from_interleaved([0, 0, 2, 1, 1])


def restricted_rules(text, shapes=SMALL_SHAPES, max_trace_length=1, budget=None):
    """Rules over a restricted universe of a formula."""
    context = ClosureContext(parse(text), budget)
    return FabricationRules(context, BiboundaryUniverse(context, shapes=shapes, max_trace_length=max_trace_length))


@pytest.fixture
def future_rules():
    """Unrestricted rules over F p: c0 = {m0, m1} below c1 = {m3}."""
    return FabricationRules(ClosureContext(parse("F p")))


def test_ground_goal(future_rules):
    """Test that a ground goal is proved by the ground rule."""
    engine = TopDownEngine(future_rules)
    assert engine.is_fabricated(Biboundary(0, 0, N=PAIR_00))
    assert engine.derivation(Biboundary(0, 0, N=PAIR_00)).rule == GROUND


def test_empty_shuffle_goal(future_rules):
    """Test that {c0, c1} is a shuffle of the single MCS m2."""
    engine = TopDownEngine(future_rules)
    derivation = engine.derivation(Biboundary(0, 1))
    assert derivation.rule == SHUFFLE
    assert derivation.premises == ()
    assert derivation.aux == (2,)
    assert check_derivation(derivation, future_rules) is None


def test_order_violation_is_not_fabricated(future_rules):
    """Test that {c1, c0} fails before any search."""
    engine = TopDownEngine(future_rules)
    assert not engine.is_fabricated(Biboundary(1, 0))
    assert engine.derivation(Biboundary(1, 0)) is None
    assert future_rules.context.budget.spent["fabrication_steps"] == 0


def test_join_goal_in_full_universe(future_rules):
    """Test that a goal needing a join gets a checkable derivation."""
    engine = TopDownEngine(future_rules)
    goal = Biboundary(0, 1, N=STEP)
    assert engine.is_fabricated(goal)
    derivation = engine.derivation(goal)
    assert derivation.rule not in (GROUND, SHUFFLE)
    assert check_derivation(derivation, future_rules) is None


def test_restricted_universe_blocks_join():
    """Test that the same goal fails when the universe has no room for its premises."""
    engine = TopDownEngine(restricted_rules("F p"))
    assert not engine.is_fabricated(Biboundary(0, 1, N=STEP))


def test_proved_goals_are_memoized(future_rules):
    """Test that proofs are cached and returned unchanged."""
    engine = TopDownEngine(future_rules)
    first = engine.derivation(Biboundary(0, 1))
    assert engine.derivation(Biboundary(0, 1)) is first
    assert Biboundary(0, 1) in engine.proved
    assert "TopDownEngine" in repr(engine)


def test_budget_exhaustion():
    """Test that a tiny step budget raises BudgetExceeded."""
    budget = Budget(max_fabrication_steps=0)
    rules = FabricationRules(ClosureContext(parse("F p"), budget))
    with pytest.raises(BudgetExceeded):
        TopDownEngine(rules, budget).is_fabricated(Biboundary(0, 1))


@pytest.mark.parametrize("text", ["p", "F p", "P p"])
def test_engines_agree_on_restricted_universes(text):
    """Test that both engines fabricate exactly the same members of a small universe."""
    rules = restricted_rules(text)
    saturated = saturate(rules)
    assert saturated.complete
    engine = TopDownEngine(rules)
    for d in rules.universe.all():
        assert engine.is_fabricated(d) == (d in saturated), str(d)


def test_engines_agree_with_corners():
    """Test agreement on a universe of two-edge shapes that carry corners."""
    shapes = [frozenset(), frozenset("NW"), frozenset("SW"), frozenset("N"), frozenset("S"), frozenset("W")]
    rules = restricted_rules("F p", shapes=shapes, max_trace_length=0)
    saturated = saturate(rules)
    engine = TopDownEngine(rules)
    for d in rules.universe.all():
        assert engine.is_fabricated(d) == (d in saturated), str(d)


@pytest.mark.parametrize("text, size", [("p", 47), ("F true", 20)])
def test_engines_agree_on_full_universes(text, size):
    """Test that both engines fabricate exactly the same members of an unrestricted universe."""
    rules = FabricationRules(ClosureContext(parse(text)))
    assert len(rules.universe.all()) == size
    saturated = saturate(rules)
    assert saturated.complete
    engine = TopDownEngine(rules)
    for d in rules.universe.all():
        assert engine.is_fabricated(d) == (d in saturated), str(d)


@pytest.mark.slow
def test_engines_agree_on_full_future_universe():
    """Test engine agreement on every biboundary of the unrestricted F p universe."""
    budget = Budget(max_fabrication_steps=10**9, max_enumerated=10**9, max_saturation_rounds=10**6)
    rules = FabricationRules(ClosureContext(parse("F p"), budget))
    assert len(rules.universe.all()) == 28772
    saturated = saturate(rules)
    assert saturated.complete
    engine = TopDownEngine(rules)
    for d in rules.universe.all():
        assert engine.is_fabricated(d) == (d in saturated), str(d)


def test_oracle_engines():
    """Test the oracle front end with both engines."""
    rules = restricted_rules("F p")
    for engine in ("top-down", "bottom-up"):
        oracle = FabricationOracle(rules, engine)
        assert oracle.is_fabricated(Biboundary(0, 1))
        assert not oracle.is_fabricated(Biboundary(1, 0))
        assert not oracle.is_fabricated(Biboundary(0, 0, N=PAIR_00, W=PAIR_00, l=0))
        assert oracle.derivation(Biboundary(0, 1)).conclusion == Biboundary(0, 1)
        assert oracle.derivation(Biboundary(1, 0)) is None
    assert "proved goals" in FabricationOracle(rules, "top-down").stats()
    with pytest.raises(ValueError):
        FabricationOracle(rules, "sideways")


def test_oracle_reports_truncated_saturation():
    """Test that a truncated bottom-up run surfaces as BudgetExceeded."""
    budget = Budget(max_saturation_rounds=0)
    rules = restricted_rules("F p", budget=budget)
    oracle = FabricationOracle(rules, "bottom-up", budget)
    with pytest.raises(BudgetExceeded) as info:
        oracle.is_fabricated(Biboundary(0, 1))
    assert info.value.counter == "saturation_rounds"
