import logging
import random
from concurrent.futures import ThreadPoolExecutor

from src.Biboundary import Biboundary
from src.Budget import Budget, BudgetExceeded
from src.Derivation import Derivation
from src.FabricationRules import (
    FabricationRules, GROUND, HJOIN, NW_LIMIT, RECTANGULAR_RULES, SE_LIMIT, SHUFFLE, VJOIN,
)

logger = logging.getLogger(__name__)

RULE_RANK = {rule: rank for rank, rule in enumerate(RECTANGULAR_RULES)}


def derivation_key(derivation: Derivation) -> tuple:
    """Total order used to pick one derivation among several found in the same round."""
    return (
        RULE_RANK[derivation.rule],
        tuple(p.conclusion.canonical_key() for p in derivation.premises),
        tuple(derivation.aux),
    )


class FabricatedSet:
    def __init__(self, members: dict, complete: bool, stats: dict):
        """
        Result of saturation.

        Parameters:
        - members (dict): Biboundary -> Derivation.
        - complete (bool): True if the fixpoint was reached, False if a budget truncated it.
        - stats (dict): Rounds, members per rule and budget spent.
        """
        self.members = members
        self.complete = complete
        self.stats = stats

    def __contains__(self, d: Biboundary) -> bool:
        return d in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members, key=Biboundary.canonical_key))

    def derivation(self, d: Biboundary):
        return self.members.get(d)

    def closed_members(self) -> list:
        return [d for d in self if d.is_closed]

    def ground_members(self) -> list:
        return [d for d in self if self.members[d].rule == GROUND]

    def __repr__(self):
        return f"FabricatedSet(members={len(self.members)}, complete={self.complete})"

    def __str__(self):
        output = "Fabricated Set:\n"
        output += f"  Members: {len(self.members)}\n"
        output += f"  Complete: {self.complete}\n"
        for name, value in self.stats.items():
            output += f"  {name}: {value}\n"
        return output


class Saturator:
    def __init__(self, rules: FabricationRules, budget: Budget = None, threads: int = 1, order_seed: int = None):
        """
        Bottom-up computation of the fabricated biboundaries of a universe:
        start from the ground ones and close under joins, limits and
        shuffles, round by round, until nothing new appears.

        Every round derives from the snapshot of the previous one, so the
        fixpoint and the derivations chosen do not depend on iteration order
        or on the number of worker threads.

        Parameters:
        - rules (FabricationRules): Constructors and universe.
        - budget (Budget): Resource caps. Default is the context's budget.
        - threads (int): Worker threads for candidate generation.
        - order_seed (int): Seed for shuffling iteration order; None keeps canonical order.
        """
        if threads < 1:
            raise ValueError("threads must be at least 1")
        self.rules = rules
        self.universe = rules.universe
        self.budget = budget if budget is not None else rules.context.budget
        self.threads = threads
        self.order_seed = order_seed
        self._random = random.Random(order_seed)
        self._limit_premises = {}
        self._fired = set()
        self._enabled = set()

    def _ordered(self, items) -> list:
        items = sorted(items, key=Biboundary.canonical_key)
        if self.order_seed is not None:
            self._random.shuffle(items)
        return items

    # -------------------------------------------------------------- producers

    def _joins(self, members, fresh) -> list:
        joins = self.rules.joins
        by_north, by_south, by_east, by_west = {}, {}, {}, {}
        for d in members:
            for index, trace in ((by_north, d.N), (by_south, d.S), (by_east, d.E), (by_west, d.W)):
                if trace is not None:
                    index.setdefault(trace, []).append(d)
        fresh_set = set(fresh)
        found = []

        def combine(rule, join, lower_index, upper_index, lower_key, upper_key):
            for d1 in fresh:
                trace = getattr(d1, lower_key)
                for d2 in upper_index.get(trace, []) if trace is not None else []:
                    found.append((rule, join(d1, d2), (d1, d2)))
            for d2 in fresh:
                trace = getattr(d2, upper_key)
                for d1 in lower_index.get(trace, []) if trace is not None else []:
                    if d1 not in fresh_set:
                        found.append((rule, join(d1, d2), (d1, d2)))

        combine(VJOIN, joins.vjoin, by_north, by_south, "N", "S")
        combine(HJOIN, joins.hjoin, by_east, by_west, "E", "W")
        self.budget.charge("fabrication_steps", len(found))
        return [(rule, d, premises, ()) for rule, d, premises in found if d is not None]

    def _premises_of(self, d0, direction) -> list:
        key = (d0, direction)
        if key not in self._limit_premises:
            self._limit_premises[key] = list(self.rules.limits.limit_premises(d0, direction))
        return self._limit_premises[key]

    def _limits(self, members) -> list:
        limits = self.rules.limits
        found = []
        for d0 in self._ordered(members):
            for rule, direction in ((SE_LIMIT, "SE"), (NW_LIMIT, "NW")):
                if (d0, direction) in self._fired:
                    continue
                self.budget.charge("fabrication_steps")
                for triple in self._premises_of(d0, direction):
                    if all(p in members for p in triple):
                        self._fired.add((d0, direction))
                        for d in limits.completions(d0, direction):
                            found.append((rule, d, (d0,) + triple, ()))
                        break
        return found

    def _shuffles(self, members) -> list:
        shuffles = self.rules.shuffles
        closed = sorted((d for d in members if d.is_closed), key=Biboundary.canonical_key)
        k = len(self.rules.context.clusters)
        found = []
        for minus in range(k):
            for plus in range(k):
                if (minus, plus) in self._enabled:
                    continue
                self.budget.charge("fabrication_steps")
                witness = shuffles.find_witness(minus, plus, closed)
                if witness is None:
                    continue
                self._enabled.add((minus, plus))
                delta, mcs_ids = witness
                for dp in shuffles.shuffle_shapes(minus, plus):
                    found.append((SHUFFLE, dp, delta, mcs_ids))
        return found

    # ------------------------------------------------------------------ driver

    def saturate(self) -> FabricatedSet:
        """
        Run rounds to the fixpoint.

        Returns:
            FabricatedSet: Complete, or truncated with ``complete`` False when
            a budget ran out.
        """
        members = {}
        per_rule = {rule: 0 for rule in RECTANGULAR_RULES}
        rounds = 0
        complete = True
        truncated_by = None
        try:
            for d in self.universe.all():
                if self.rules.validator.is_ground(d):
                    members[d] = Derivation(GROUND, d)
                    per_rule[GROUND] += 1
            fresh = set(members)
            while fresh:
                self.budget.charge("saturation_rounds")
                rounds += 1
                snapshot = dict(members)
                candidates = self._round(snapshot, fresh)
                chosen = {}
                for rule, d, premises, aux in candidates:
                    if d in snapshot or not self.universe.contains(d):
                        continue
                    derivation = Derivation(rule, d, tuple(snapshot[p] for p in premises), tuple(aux))
                    best = chosen.get(d)
                    if best is None or derivation_key(derivation) < derivation_key(best):
                        chosen[d] = derivation
                for d, derivation in chosen.items():
                    members[d] = derivation
                    per_rule[derivation.rule] += 1
                fresh = set(chosen)
                logger.info("Saturation round %d: %d new, %d total", rounds, len(fresh), len(members))
        except BudgetExceeded as error:
            complete = False
            truncated_by = error.counter
            logger.warning("Saturation truncated after %d rounds: %s", rounds, error)

        stats = {"rounds": rounds, "members": len(members)}
        if truncated_by is not None:
            stats["truncated by"] = truncated_by
        stats.update({f"by {rule}": count for rule, count in per_rule.items()})
        stats.update({f"spent {name}": value for name, value in self.budget.spent.items()})
        return FabricatedSet(members, complete, stats)

    def _round(self, snapshot: dict, fresh: set) -> list:
        members = set(snapshot)
        fresh = self._ordered(fresh)
        if self.threads == 1:
            return self._joins(members, fresh) + self._limits(members) + self._shuffles(members)
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            jobs = [
                pool.submit(self._joins, members, fresh),
                pool.submit(self._limits, members),
                pool.submit(self._shuffles, members),
            ]
            results = [job.result() for job in jobs]
        return [candidate for result in results for candidate in result]


def saturate(rules: FabricationRules, budget: Budget = None, threads: int = 1, order_seed: int = None) -> FabricatedSet:
    """Least set of fabricated biboundaries of the rules' universe."""
    return Saturator(rules, budget, threads, order_seed).saturate()
