from src.Biboundary import Biboundary, BiboundaryValidator
from src.BiboundaryUniverse import BiboundaryUniverse
from src.ClosureContext import ClosureContext
from src.Joins import JoinOperator
from src.Limits import LimitOperator
from src.Shuffles import ShuffleOperator
from src.TriangularBiboundary import TriangularOperator, TriBiboundary

GROUND = "ground"
VJOIN = "vjoin"
HJOIN = "hjoin"
SE_LIMIT = "se-limit"
NW_LIMIT = "nw-limit"
SHUFFLE = "shuffle"
TRI_GROUND = "tri-ground"
TRI_JOIN = "tri-join"

RECTANGULAR_RULES = (GROUND, VJOIN, HJOIN, SE_LIMIT, NW_LIMIT, SHUFFLE)
TRIANGULAR_RULES = (TRI_GROUND, TRI_JOIN)
LIMIT_DIRECTIONS = {SE_LIMIT: "SE", NW_LIMIT: "NW"}


class FabricationRules:
    def __init__(self, context: ClosureContext, universe: BiboundaryUniverse = None, max_arity: int = None):
        """
        Bundle of every constructor of fabricated biboundaries over one
        closure context, plus a one-step checker for each rule.

        Parameters:
        - context (ClosureContext): The closure context.
        - universe (BiboundaryUniverse): Search space. Default is unrestricted.
        - max_arity (int): Shuffle arity cap. Default is the formula size.
        """
        self.context = context
        self.universe = universe if universe is not None else BiboundaryUniverse(context)
        self.validator: BiboundaryValidator = self.universe.validator
        self.catalog = self.validator.catalog
        self.joins = JoinOperator(self.validator)
        self.limits = LimitOperator(self.joins, self.universe)
        self.shuffles = ShuffleOperator(self.universe, max_arity)
        self.triangles = TriangularOperator(self.joins)

    def check_step(self, rule: str, conclusion, premises, aux=()) -> bool:
        """
        Check one rule application, taking the premises as given.

        Args:
            rule (str): Rule tag.
            conclusion (Biboundary or TriBiboundary): Claimed result.
            premises (sequence): Conclusions of the premise nodes, in order.
            aux (sequence of int): MCS set of a shuffle, empty otherwise.

        Returns:
            bool: True if the rule produces ``conclusion`` from ``premises``.
        """
        premises = list(premises)
        if rule in TRIANGULAR_RULES:
            return self._check_triangular(rule, conclusion, premises, aux)
        if rule not in RECTANGULAR_RULES or not isinstance(conclusion, Biboundary):
            return False
        if not all(isinstance(p, Biboundary) for p in premises):
            return False
        if not self.universe.contains(conclusion):
            return False
        if rule != SHUFFLE and aux:
            return False

        if rule == GROUND:
            return not premises and self.validator.is_ground(conclusion)
        if rule in (VJOIN, HJOIN):
            if len(premises) != 2:
                return False
            join = self.joins.vjoin if rule == VJOIN else self.joins.hjoin
            return join(*premises) == conclusion
        if rule in LIMIT_DIRECTIONS:
            direction = LIMIT_DIRECTIONS[rule]
            return (
                len(premises) == 4
                and all(self.validator.validate_biboundary(p) for p in premises)
                and self.limits.is_limit_configuration(*premises, direction)
                and self.limits.is_completion(premises[0], conclusion, direction)
            )
        cap = self.shuffles.max_arity
        return (
            len(premises) <= cap
            and 1 <= len(aux) <= cap
            and len(set(aux)) == len(aux)
            and all(isinstance(m, int) and 0 <= m < len(self.context.mcs) for m in aux)
            and self.shuffles.check_shuffle(conclusion, premises, aux)
        )

    def _check_triangular(self, rule, conclusion, premises, aux) -> bool:
        tri = self.triangles
        if aux or not isinstance(conclusion, TriBiboundary) or not tri.validate_tri(conclusion):
            return False
        if rule == TRI_GROUND:
            return not premises and tri.is_ground_tri(conclusion)
        if len(premises) != 3:
            return False
        t1, d, t2 = premises
        if not (isinstance(t1, TriBiboundary) and isinstance(d, Biboundary) and isinstance(t2, TriBiboundary)):
            return False
        return (
            tri.is_ground_tri(t1)
            and tri.tri_depth(t2) < tri.tri_depth(conclusion)
            and tri.tri_join(t1, d, t2) == conclusion
        )
