import logging
import math
import threading

from src.Biboundary import Biboundary
from src.Budget import Budget
from src.Derivation import Derivation
from src.FabricationRules import (
    FabricationRules, GROUND, HJOIN, NW_LIMIT, SE_LIMIT, SHUFFLE, VJOIN,
)

logger = logging.getLogger(__name__)

NO_CYCLE = math.inf


class _Outcome:
    """Result of one bounded search: a derivation or None, whether the depth bound cut anything, lowest cycle index hit."""

    __slots__ = ("derivation", "cut", "low")

    def __init__(self, derivation=None, cut=False, low=NO_CYCLE):
        self.derivation = derivation
        self.cut = cut
        self.low = low

    def absorb(self, other: "_Outcome"):
        self.cut = self.cut or other.cut
        self.low = min(self.low, other.low)


class TopDownEngine:
    def __init__(self, rules: FabricationRules, budget: Budget = None, initial_bound: int = 2):
        """
        Goal-directed fabrication check. A goal is fabricated if it is
        ground, or a shuffle, or a join, or a limit, tried in that order;
        premises are searched recursively.

        Least-fixpoint semantics is kept by cutting cycles on the current
        path and by iterative deepening on derivation height. Proven goals
        are memoized globally; failures only when neither a depth cut nor a
        cycle through an open ancestor influenced them.

        Parameters:
        - rules (FabricationRules): Constructors and universe.
        - budget (Budget): Resource caps. Default is the context's budget.
        - initial_bound (int): First derivation height tried.
        """
        self.rules = rules
        self.universe = rules.universe
        self.validator = rules.validator
        self.budget = budget if budget is not None else rules.context.budget
        self.initial_bound = initial_bound
        self.max_bound = self.universe.size_bound()
        self._proved = {}
        self._failed = set()
        self._lock = threading.RLock()

    # ---------------------------------------------------------------- public

    def is_fabricated(self, d: Biboundary) -> bool:
        """
        Raises:
            BudgetExceeded: When the fabrication-step budget runs out.
        """
        with self._lock:
            if d in self._proved:
                return True
            if d in self._failed:
                return False
            bound = self.initial_bound
            while True:
                outcome = self._search(d, bound, {})
                if outcome.derivation is not None:
                    logger.debug("Fabricated %s within height %d", d, bound)
                    return True
                if not outcome.cut or bound >= self.max_bound:
                    self._failed.add(d)
                    return False
                bound = min(2 * bound, self.max_bound)
                logger.debug("Deepening search for %s to height %d", d, bound)

    def derivation(self, d: Biboundary):
        """The derivation found for ``d``, or None if it is not fabricated."""
        return self._proved.get(d) if self.is_fabricated(d) else None

    @property
    def proved(self) -> dict:
        return dict(self._proved)

    # ---------------------------------------------------------------- search

    def _admissible(self, d: Biboundary) -> bool:
        return self.universe.contains(d) and self.validator.satisfies_fabrication_invariant(d)

    def _search(self, d: Biboundary, depth: int, path: dict) -> _Outcome:
        known = self._proved.get(d)
        if known is not None:
            return _Outcome(known)
        if d in self._failed:
            return _Outcome()
        if d in path:
            return _Outcome(low=path[d])
        if not self._admissible(d):
            self._failed.add(d)
            return _Outcome()
        self.budget.charge("fabrication_steps")

        if self.validator.is_ground(d):
            return self._prove(Derivation(GROUND, d))
        outcome = _Outcome()
        shuffle = self._empty_shuffle(d)
        if shuffle is not None:
            return self._prove(shuffle)
        if depth <= 1:
            outcome.cut = True
            return outcome

        index = len(path)
        path[d] = index
        try:
            for option in (self._try_shuffle, self._try_joins, self._try_limits):
                found = option(d, depth - 1, path, outcome)
                if found is not None:
                    return self._prove(found)
        finally:
            del path[d]

        if not outcome.cut and outcome.low >= index:
            self._failed.add(d)
            outcome.low = NO_CYCLE
        return outcome

    def _prove(self, derivation: Derivation) -> _Outcome:
        self._proved.setdefault(derivation.conclusion, derivation)
        return _Outcome(self._proved[derivation.conclusion])

    def _all_premises(self, premises, depth, path, outcome):
        """Search premises in order; their derivations, or None at the first failure."""
        derivations = []
        for premise in premises:
            if not self._admissible(premise):
                return None
            child = self._search(premise, depth, path)
            outcome.absorb(child)
            if child.derivation is None:
                return None
            derivations.append(child.derivation)
        return tuple(derivations)

    # --------------------------------------------------------------- options

    def _empty_shuffle(self, d: Biboundary):
        shuffles = self.rules.shuffles
        if not shuffles.inner_clusters_constant(d):
            return None
        need_up, need_down = shuffles.needs_delta(d.minus, d.plus)
        if need_up or need_down:
            return None
        witness = shuffles.find_witness(d.minus, d.plus)
        if witness is None:
            return None
        return Derivation(SHUFFLE, d, (), witness[1])

    def _try_shuffle(self, d, depth, path, outcome):
        shuffles = self.rules.shuffles
        if not shuffles.inner_clusters_constant(d) or not shuffles.fitting_mcs(d.minus, d.plus):
            return None
        pool = {}
        for candidate in shuffles.closed_candidates(d.minus, d.plus):
            if not self._admissible(candidate):
                continue
            child = self._search(candidate, depth, path)
            outcome.absorb(child)
            if child.derivation is None:
                continue
            pool[candidate] = child.derivation
            witness = shuffles.find_witness(d.minus, d.plus, pool)
            if witness is not None:
                delta, mcs_ids = witness
                return Derivation(SHUFFLE, d, tuple(pool[x] for x in delta), mcs_ids)
        return None

    def _try_joins(self, d, depth, path, outcome):
        joins = self.rules.joins
        for rule, splits in ((VJOIN, joins.vertical_splits(d)), (HJOIN, joins.horizontal_splits(d))):
            for pair in splits:
                premises = self._all_premises(pair, depth, path, outcome)
                if premises is not None:
                    return Derivation(rule, d, premises)
        return None

    def _limit_bases(self, d, direction):
        """Candidate bases d0 whose completions may contain d."""
        if direction == "SE":
            if not (
                (d.S is None or all(c == d.minus for c in d.S.upper))
                and (d.E is None or all(c == d.plus for c in d.E.lower))
            ):
                return []
            fixed, corner = {"W": [d.W], "N": [d.N]}, ("l", d.l)
        else:
            if not (
                (d.N is None or all(c == d.plus for c in d.N.lower))
                and (d.W is None or all(c == d.minus for c in d.W.upper))
            ):
                return []
            fixed, corner = {"E": [d.E], "S": [d.S]}, ("r", d.r)
        # the base needs its inner edge for the row split
        inner = "E" if direction == "SE" else "W"
        fixed[inner] = [t for t in self.universe.edge_candidates(inner, d.minus, d.plus)]
        corners = {corner[0]: [corner[1]]} if corner[1] is not None else {}
        return sorted(
            self.universe.generate(
                minus_options=[d.minus], plus_options=[d.plus],
                edge_options=fixed, corner_options=corners,
            ),
            key=Biboundary.canonical_key,
        )

    def _try_limits(self, d, depth, path, outcome):
        limits = self.rules.limits
        for rule, direction in ((SE_LIMIT, "SE"), (NW_LIMIT, "NW")):
            for d0 in self._limit_bases(d, direction):
                if not self._admissible(d0):
                    continue
                base = self._all_premises((d0,), depth, path, outcome)
                if base is None:
                    continue
                for triple in limits.limit_premises(d0, direction):
                    rest = self._all_premises(triple, depth, path, outcome)
                    if rest is not None:
                        return Derivation(rule, d, base + rest)
        return None

    def __repr__(self):
        return f"TopDownEngine(proved={len(self._proved)}, failed={len(self._failed)})"
