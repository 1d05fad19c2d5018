import itertools
import logging
import weakref

import numpy as np

from src.Budget import Budget
from src.ClosureTable import ClosureTable
from src.Formula import Var, Top, Not, Or, F, P

logger = logging.getLogger(__name__)


class KtTableau:
    def __init__(self, closure: ClosureTable, budget: Budget = None):
        """
        Graph tableau for the minimal tense logic K_t over a closure.

        Nodes are complete types: propositionally consistent sign choices for
        every subformula. A node survives when each F-demand has a surviving
        successor containing the argument and each P-demand a surviving
        predecessor containing it, where node a may precede node b iff
        (psi in b implies F psi in a) and (psi in a implies P psi in b).
        The surviving nodes are computed once per closure (global caching)
        and are exactly the K_t-satisfiable types.

        Parameters:
        - closure (ClosureTable): The closure the entries are drawn from.
        - budget (Budget): Shared resource caps. Default is a fresh Budget.
        """
        self.closure = closure
        self.budget = budget if budget is not None else Budget()
        self._types = None
        self._alive = None

    @property
    def types(self) -> np.ndarray:
        """Boolean matrix (types x subformulas) of all propositionally consistent types."""
        if self._types is None:
            free = self.closure.free_nodes
            self.budget.charge("kt_expansions", 1 << len(free))
            rows = []
            for values in itertools.product((False, True), repeat=len(free)):
                bits = self.closure.evaluate_bits(dict(zip(free, values)))
                rows.append([(bits >> i) & 1 for i in range(self.closure.num_subformulas)])
            self._types = np.array(rows, dtype=bool).reshape(
                len(rows), self.closure.num_subformulas
            )
        return self._types

    def _successor_mask(self, row, alive):
        types = self.types
        forbidden = [j for i, j in self.closure.future_nodes if not row[i]]
        required = [i for i, j in self.closure.past_nodes if row[j]]
        return alive & ~types[:, forbidden].any(axis=1) & types[:, required].all(axis=1)

    def _predecessor_mask(self, row, alive):
        types = self.types
        required = [i for i, j in self.closure.future_nodes if row[j]]
        forbidden = [j for i, j in self.closure.past_nodes if not row[i]]
        return alive & types[:, required].all(axis=1) & ~types[:, forbidden].any(axis=1)

    def _supported(self, a, alive):
        row = self.types[a]
        successors = None
        for i, j in self.closure.future_nodes:
            if row[i]:
                if successors is None:
                    successors = self._successor_mask(row, alive)
                if not (successors & self.types[:, j]).any():
                    return False
        predecessors = None
        for i, j in self.closure.past_nodes:
            if row[i]:
                if predecessors is None:
                    predecessors = self._predecessor_mask(row, alive)
                if not (predecessors & self.types[:, j]).any():
                    return False
        return True

    @property
    def alive(self) -> np.ndarray:
        """Mask of the types surviving elimination."""
        if self._alive is None:
            alive = np.ones(len(self.types), dtype=bool)
            changed = True
            rounds = 0
            while changed:
                changed = False
                rounds += 1
                for a in np.flatnonzero(alive):
                    self.budget.charge("kt_expansions")
                    if not self._supported(a, alive):
                        alive[a] = False
                        changed = True
            logger.debug(
                "K_t elimination: %d of %d types survive after %d rounds",
                int(alive.sum()), len(alive), rounds,
            )
            self._alive = alive
        return self._alive

    def goal_mask(self, goal) -> np.ndarray:
        mask = np.ones(len(self.types), dtype=bool)
        for entry in goal:
            column = self.types[:, ClosureTable.subformula_of(entry)]
            mask &= column if ClosureTable.is_positive(entry) else ~column
        return mask

    def is_satisfiable(self, goal) -> bool:
        """True iff the conjunction of the signed entries holds at a point of some temporal model."""
        return bool((self.alive & self.goal_mask(goal)).any())

    def surviving_bits(self) -> list:
        """Bit vectors (bit i = subformula i) of the surviving types."""
        weights = 1 << np.arange(self.closure.num_subformulas, dtype=np.int64)
        rows = self.types[self.alive]
        return [int(v) for v in (rows.astype(np.int64) @ weights)]


_tableaux = weakref.WeakKeyDictionary()


def tableau_for(closure: ClosureTable, budget: Budget = None) -> KtTableau:
    """Tableau cached per closure, so elimination runs once per formula."""
    cached = _tableaux.get(closure)
    if cached is None:
        cached = KtTableau(closure, budget)
        _tableaux[closure] = cached
    return cached


def kt_sat(closure: ClosureTable, goal, budget: Budget = None) -> bool:
    """
    Decide K_t satisfiability of a goal.

    Args:
        closure (ClosureTable): Closure the entries belong to.
        goal (iterable of int): Signed closure entries, read conjunctively.
        budget (Budget): Optional resource caps.

    Returns:
        bool: Whether the goal is satisfiable at a point of some temporal frame.

    Raises:
        BudgetExceeded: When the tableau runs out of expansions.
    """
    return tableau_for(closure, budget).is_satisfiable(goal)


def _evaluate(closure, relation, valuation, names):
    """Truth table (valuations x worlds) of every subformula in a finite model."""
    values = []
    weights = relation.astype(np.int64)
    for i, node in enumerate(closure.subformulas):
        if isinstance(node, Top):
            value = np.ones(valuation.shape[:2], dtype=bool)
        elif isinstance(node, Not):
            value = ~values[closure.child_index[i][0]]
        elif isinstance(node, Or):
            left, right = closure.child_index[i]
            value = values[left] | values[right]
        elif isinstance(node, F):
            # F psi at w iff some successor u of w satisfies psi
            value = (values[closure.child_index[i][0]].astype(np.int64) @ weights.T) > 0
        elif isinstance(node, P):
            value = (values[closure.child_index[i][0]].astype(np.int64) @ weights) > 0
        else:
            value = valuation[:, :, names.index(node.name)]
        values.append(value)
    return values


def kt_sat_bounded_oracle(closure: ClosureTable, goal, k: int) -> bool:
    """
    Brute-force K_t satisfiability over all models with at most ``k`` worlds.

    Enumerates every accessibility relation and every valuation of the
    closure's proposition letters; intended for tests with small ``k``.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    names = sorted({node.name for node in closure.subformulas if isinstance(node, Var)})
    goal = list(goal)
    for n in range(1, k + 1):
        letters = n * len(names)
        codes = np.arange(1 << letters, dtype=np.int64)
        valuation = ((codes[:, None] >> np.arange(letters)) & 1).astype(bool)
        valuation = valuation.reshape(len(codes), n, max(len(names), 1)) if names \
            else np.zeros((1, n, 1), dtype=bool)
        for code in range(1 << (n * n)):
            relation = np.array(
                [(code >> bit) & 1 for bit in range(n * n)], dtype=bool
            ).reshape(n, n)
            values = _evaluate(closure, relation, valuation, names)
            holds = np.ones(valuation.shape[:2], dtype=bool)
            for entry in goal:
                column = values[ClosureTable.subformula_of(entry)]
                holds &= column if ClosureTable.is_positive(entry) else ~column
            if holds.any():
                return True
    return False
