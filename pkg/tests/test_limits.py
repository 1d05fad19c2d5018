from src.Biboundary import Biboundary, BiboundaryValidator
from src.BiboundaryUniverse import BiboundaryUniverse
from src.BiTrace import BiTrace
from src.ClosureContext import ClosureContext
from src.Formula import parse
from src.Joins import JoinOperator
from src.Limits import DIRECTIONS, LimitOperator
import sys
from pathlib import Path
import pytest

# Add src directory to Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

PAIR_00 = BiTrace.pair(0, 0)


def limits_for(text):
    """Limit operator over the unrestricted universe of a formula."""
    universe = BiboundaryUniverse(ClosureContext(parse(text)))
    return LimitOperator(JoinOperator(universe.validator), universe)


@pytest.fixture
def atom_limits():
    """Limit operator over p: one cluster c0, one bi-trace (c0, c0)."""
    return limits_for("p")


@pytest.fixture
def closed_piece():
    """Closed biboundary of p with every edge (c0, c0) and every corner m0 = {p}."""
    return Biboundary(0, 0, N=PAIR_00, S=PAIR_00, E=PAIR_00, W=PAIR_00, b=0, t=0, l=0, r=0)


def test_directions():
    """Test the two limit directions."""
    assert DIRECTIONS == ("SE", "NW")


def test_self_similar_configuration(atom_limits, closed_piece):
    """Test that four copies of the closed piece form a limit in both directions."""
    d = closed_piece
    assert atom_limits.is_limit_configuration(d, d, d, d, "SE")
    assert atom_limits.is_limit_configuration(d, d, d, d, "NW")


def test_southeast_completions(atom_limits, closed_piece):
    """Test that completions keep -, +, l, W, N and vary the rest."""
    completions = atom_limits.completions(closed_piece, "SE")
    assert len(completions) == 13
    assert Biboundary(0, 0, N=PAIR_00, W=PAIR_00, l=0) in completions
    assert closed_piece in completions
    assert all(c.N == PAIR_00 and c.W == PAIR_00 and c.l == 0 for c in completions)
    assert completions == sorted(completions, key=Biboundary.canonical_key)
    assert atom_limits.completions(closed_piece, "SE") is completions


def test_northwest_completions(atom_limits, closed_piece):
    """Test that northwest completions keep -, +, r, E and S."""
    completions = atom_limits.completions(closed_piece, "NW")
    assert Biboundary(0, 0, E=PAIR_00, S=PAIR_00, r=0) in completions
    assert all(c.E == PAIR_00 and c.S == PAIR_00 and c.r == 0 for c in completions)


def test_is_completion(atom_limits, closed_piece):
    """Test the membership check for completions."""
    assert atom_limits.is_completion(closed_piece, Biboundary(0, 0, N=PAIR_00, W=PAIR_00, l=0), "SE")
    assert not atom_limits.is_completion(closed_piece, Biboundary(0, 0, N=PAIR_00, W=PAIR_00, l=1), "SE")
    assert not atom_limits.is_completion(closed_piece, Biboundary(0, 0, N=PAIR_00, W=PAIR_00, l=0), "NW")
    for candidate in atom_limits.completions(closed_piece, "NW"):
        assert atom_limits.is_completion(closed_piece, candidate, "NW")


def test_limit_completions(atom_limits, closed_piece):
    """Test the set of completions of a limit configuration."""
    d = closed_piece
    assert atom_limits.limit_completions(d, d, d, d, "SE") == set(atom_limits.completions(d, "SE"))


def test_constancy_side_condition():
    """Test that an east edge with a lower cluster other than d0(+) is no configuration."""
    limits = limits_for("F p")
    d0 = Biboundary(1, 1)
    d1 = Biboundary(0, 0, E=BiTrace.pair(0, 1))
    assert limits.validator.validate_biboundary(d1)
    assert limits.limit_completions(d0, d1, d0, d0, "SE") == set()


def test_limit_premises(atom_limits, closed_piece):
    """Test that the self-similar configuration is found from its base."""
    d = closed_piece
    premises = list(atom_limits.limit_premises(d, "SE"))
    assert (d, d, d) in premises
    for d1, d2, d3 in premises:
        assert atom_limits.is_limit_configuration(d, d1, d2, d3, "SE")
    assert (d, d, d) in list(atom_limits.limit_premises(d, "NW"))
    assert list(atom_limits.limit_premises(Biboundary(0, 0), "SE")) == []


def test_bad_direction(atom_limits, closed_piece):
    """Test that an unknown direction raises ValueError."""
    with pytest.raises(ValueError):
        atom_limits.completions(closed_piece, "NE")
    with pytest.raises(ValueError):
        list(atom_limits.limit_premises(closed_piece, "SW"))


def test_validator_is_shared(atom_limits):
    """Test that the operator uses the universe's validator."""
    assert isinstance(atom_limits.validator, BiboundaryValidator)
    assert atom_limits.validator is atom_limits.universe.validator
