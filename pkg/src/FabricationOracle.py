import logging

from src.Biboundary import Biboundary
from src.Budget import Budget, BudgetExceeded
from src.FabricationRules import FabricationRules
from src.Saturation import FabricatedSet, saturate
from src.TopDownEngine import TopDownEngine

logger = logging.getLogger(__name__)

ENGINES = ("bottom-up", "top-down")


class FabricationOracle:
    def __init__(
            self,
            rules: FabricationRules,
            engine: str = "top-down",
            budget: Budget = None,
            threads: int = 1,
            order_seed: int = None):
        """
        Answers "is this biboundary fabricated?" with either engine.

        The bottom-up engine saturates the whole universe on first use and
        answers by lookup; the top-down engine searches per goal.

        Parameters:
        - rules (FabricationRules): Constructors and universe.
        - engine (str): "bottom-up" or "top-down".
        - budget (Budget): Resource caps. Default is the context's budget.
        - threads (int): Worker threads for saturation.
        - order_seed (int): Iteration-order seed for saturation.
        """
        if engine not in ENGINES:
            raise ValueError(f"Engine must be one of {ENGINES}, got {engine!r}")
        self.rules = rules
        self.engine = engine
        self.budget = budget if budget is not None else rules.context.budget
        self.threads = threads
        self.order_seed = order_seed
        self._fabricated: FabricatedSet = None
        self._top_down = TopDownEngine(rules, self.budget) if engine == "top-down" else None

    @property
    def fabricated_set(self) -> FabricatedSet:
        """
        Raises:
            BudgetExceeded: If saturation was truncated.
        """
        if self._fabricated is None:
            self._fabricated = saturate(self.rules, self.budget, self.threads, self.order_seed)
            logger.info("Bottom-up engine: %d fabricated biboundaries", len(self._fabricated))
        if not self._fabricated.complete:
            counter = self._fabricated.stats.get("truncated by", "saturation_rounds")
            raise BudgetExceeded(counter, self.budget.limits[counter])
        return self._fabricated

    def is_fabricated(self, d: Biboundary) -> bool:
        if not self.rules.universe.contains(d):
            return False
        if self._top_down is not None:
            return self._top_down.is_fabricated(d)
        return d in self.fabricated_set

    def derivation(self, d: Biboundary):
        """Derivation of ``d``, or None if it is not fabricated."""
        if not self.is_fabricated(d):
            return None
        if self._top_down is not None:
            return self._top_down.derivation(d)
        return self.fabricated_set.derivation(d)

    def stats(self) -> dict:
        if self._top_down is not None:
            return {"proved goals": len(self._top_down.proved)}
        return dict(self._fabricated.stats) if self._fabricated is not None else {}

    def __repr__(self):
        return f"FabricationOracle(engine={self.engine!r})"
