import logging

from src.Biboundary import Biboundary
from src.BiboundaryUniverse import BiboundaryUniverse
from src.Joins import JoinOperator

logger = logging.getLogger(__name__)

DIRECTIONS = ("SE", "NW")


def _upper_constant(trace, c) -> bool:
    return trace is None or all(x == c for x in trace.upper)


def _lower_constant(trace, c) -> bool:
    return trace is None or all(x == c for x in trace.lower)


class LimitOperator:
    def __init__(self, joins: JoinOperator, universe: BiboundaryUniverse):
        """
        Southeastern and northwestern limits.

        A southeastern limit configuration places d0 in the northwest cell of
        a 2x2 grid whose composite is d0 again, with d1 to its east, d2 to
        its south and d3 diagonally opposite. The northwestern configuration
        is its temporal dual: d0 sits in the southeast cell, d1 to its west,
        d2 to its north.

        Parameters:
        - joins (JoinOperator): Joins and their inverses.
        - universe (BiboundaryUniverse): Space the completions are drawn from.
        """
        self.joins = joins
        self.universe = universe
        self.validator = joins.validator
        self.context = joins.context
        self._completions = {}

    @staticmethod
    def _check_direction(direction):
        if direction not in DIRECTIONS:
            raise ValueError(f"Limit direction must be one of {DIRECTIONS}, got {direction!r}")

    def is_limit_configuration(self, d0, d1, d2, d3, direction: str) -> bool:
        """
        Check the self-similarity equation and the constancy side conditions.

        Args:
            d0, d1, d2, d3 (Biboundary): Base and the three other grid cells.
            direction (str): "SE" or "NW".

        Returns:
            bool: True if the four biboundaries form a limit configuration.
        """
        self._check_direction(direction)
        if direction == "SE":
            if not (_lower_constant(d1.E, d0.plus) and _upper_constant(d2.S, d0.minus)):
                return False
            lower_row = self.joins.hjoin(d2, d3)
            upper_row = self.joins.hjoin(d0, d1)
        else:
            if not (_upper_constant(d1.W, d0.minus) and _lower_constant(d2.N, d0.plus)):
                return False
            lower_row = self.joins.hjoin(d1, d0)
            upper_row = self.joins.hjoin(d3, d2)
        if lower_row is None or upper_row is None:
            return False
        return self.joins.vjoin(lower_row, upper_row) == d0

    def completions(self, d0: Biboundary, direction: str) -> list:
        """
        Every biboundary of the universe that a limit with base ``d0`` produces.

        Southeast: agrees with d0 on -, +, l, W and N; a defined S has all
        upper clusters d0(-), a defined E all lower clusters d0(+). Northwest:
        agrees on -, +, r, E and S; N lower clusters constantly d0(+), W upper
        clusters constantly d0(-). Remaining corners range over whatever
        validity admits.
        """
        self._check_direction(direction)
        key = (d0, direction)
        cached = self._completions.get(key)
        if cached is not None:
            return cached
        minus, plus = d0.minus, d0.plus
        if direction == "SE":
            fixed_edges = {"W": [d0.W], "N": [d0.N]}
            fixed_corner = ("l", d0.l)
            edge_filters = {
                "S": lambda trace, *_: _upper_constant(trace, minus),
                "E": lambda trace, *_: _lower_constant(trace, plus),
            }
        else:
            fixed_edges = {"E": [d0.E], "S": [d0.S]}
            fixed_corner = ("r", d0.r)
            edge_filters = {
                "N": lambda trace, *_: _lower_constant(trace, plus),
                "W": lambda trace, *_: _upper_constant(trace, minus),
            }
        corner_options = {}
        if fixed_corner[1] is not None:
            corner_options[fixed_corner[0]] = [fixed_corner[1]]
        result = sorted(
            self.universe.generate(
                minus_options=[minus],
                plus_options=[plus],
                edge_filters=edge_filters,
                edge_options=fixed_edges,
                corner_options=corner_options,
            ),
            key=Biboundary.canonical_key,
        )
        logger.debug("%s limit of %s has %d completions", direction, d0, len(result))
        self._completions[key] = result
        return result

    def is_completion(self, d0: Biboundary, candidate: Biboundary, direction: str) -> bool:
        """Membership test for completions(d0, direction) without enumerating them."""
        self._check_direction(direction)
        if not self.universe.contains(candidate):
            return False
        if (candidate.minus, candidate.plus) != (d0.minus, d0.plus):
            return False
        if direction == "SE":
            return (
                (candidate.W, candidate.N, candidate.l) == (d0.W, d0.N, d0.l)
                and _upper_constant(candidate.S, d0.minus)
                and _lower_constant(candidate.E, d0.plus)
            )
        return (
            (candidate.E, candidate.S, candidate.r) == (d0.E, d0.S, d0.r)
            and _lower_constant(candidate.N, d0.plus)
            and _upper_constant(candidate.W, d0.minus)
        )

    def limit_completions(self, d0, d1, d2, d3, direction: str) -> set:
        """The completions of d0, or the empty set if (d0, d1, d2, d3) is no limit configuration."""
        if not self.is_limit_configuration(d0, d1, d2, d3, direction):
            return set()
        return set(self.completions(d0, direction))

    def limit_premises(self, d0: Biboundary, direction: str):
        """
        Yield every triple (d1, d2, d3) of valid biboundaries making d0 a
        limit base in ``direction``.

        The composite is cut into two rows along a shared bi-trace, then the
        row holding d0 is cut along d0's inner edge and the other row is cut
        freely.
        """
        self._check_direction(direction)
        joins = self.joins
        if direction == "SE":
            if d0.E is None:
                return
            rows = joins.vertical_splits(d0, shared_filter=lambda x: x.upper[0] == d0.minus)
            for lower_row, upper_row in rows:
                for left, right in joins.horizontal_splits(upper_row, shared_filter=lambda y: y == d0.E):
                    if left != d0 or not _lower_constant(right.E, d0.plus):
                        continue
                    for d2, d3 in joins.horizontal_splits(lower_row):
                        if _upper_constant(d2.S, d0.minus):
                            yield right, d2, d3
        else:
            if d0.W is None:
                return
            rows = joins.vertical_splits(d0, shared_filter=lambda x: x.lower[-1] == d0.plus)
            for lower_row, upper_row in rows:
                for left, right in joins.horizontal_splits(lower_row, shared_filter=lambda y: y == d0.W):
                    if right != d0 or not _upper_constant(left.W, d0.minus):
                        continue
                    for d3, d2 in joins.horizontal_splits(upper_row):
                        if _lower_constant(d2.N, d0.plus):
                            yield left, d2, d3
