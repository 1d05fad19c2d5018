import logging

from src.Biboundary import Biboundary
from src.Budget import Budget, BudgetExceeded
from src.ClosureContext import ClosureContext
from src.Derivation import Certificate
from src.FabricationOracle import FabricationOracle
from src.FabricationRules import FabricationRules
from src.Formula import Formula, negate, reflexive_rewrite
from src.Verdict import BUDGET, NOT_VALID, SAT, UNSAT, VALID, Verdict, Witness

logger = logging.getLogger(__name__)


class AssemblyDecider:
    FRAME = None

    def __init__(
            self,
            formula: Formula,
            reflexive: bool = False,
            engine: str = "top-down",
            budget: Budget = None,
            threads: int = 1,
            order_seed: int = None):
        """
        Shared machinery of the satisfiability checks that glue fabricated
        pieces around a center MCS.

        Parameters:
        - formula (Formula): Formula whose satisfiability is decided.
        - reflexive (bool): Decide over the reflexive closure of the frame.
        - engine (str): Fabrication engine, "top-down" or "bottom-up".
        - budget (Budget): Resource caps. Default is a fresh Budget.
        - threads (int): Worker threads for the bottom-up engine.
        - order_seed (int): Iteration-order seed for the bottom-up engine.
        """
        self.formula = formula
        self.reflexive = reflexive
        self.engine = engine
        self.budget = budget if budget is not None else Budget()
        self.threads = threads
        self.order_seed = order_seed
        self.context: ClosureContext = None
        self.rules: FabricationRules = None
        self.oracle: FabricationOracle = None

    def _prepare(self):
        target = reflexive_rewrite(self.formula) if self.reflexive else self.formula
        self.context = ClosureContext(target, self.budget)
        self.rules = FabricationRules(self.context)
        self.oracle = FabricationOracle(
            self.rules, self.engine, self.budget, self.threads, self.order_seed
        )
        self._pieces = {}

    # -------------------------------------------------------------- candidates

    def centers(self) -> list:
        """Realizable MCS containing the formula."""
        ctx = self.context
        root = 2 * ctx.closure.root
        return [m for m in sorted(ctx.realizable_mcs()) if ctx.mcs[m].contains(root)]

    def candidate_traces(self) -> list:
        """Bi-traces built only from realizable clusters and MCS, shortest first."""
        ctx = self.context
        clusters = ctx.realizable_clusters()
        alive = ctx.realizable_mcs()
        return [
            t for t in self.rules.catalog.all()
            if set(t.lower + t.upper) <= clusters and set(t.transitions) <= alive
        ]

    def cluster_order(self, first: int) -> list:
        """Realizable clusters with ``first`` tried before the others."""
        rest = sorted(c for c in self.context.realizable_clusters() if c != first)
        return [first] + rest

    def fabricated(self, d: Biboundary) -> bool:
        cached = self._pieces.get(d)
        if cached is None:
            cached = (
                self.rules.universe.contains(d)
                and self.rules.validator.satisfies_fabrication_invariant(d)
                and self.oracle.is_fabricated(d)
            )
            self._pieces[d] = cached
        return cached

    def first_fabricated(self, candidates):
        for d in candidates:
            if self.fabricated(d):
                return d
        return None

    # ------------------------------------------------------------------ decide

    def search(self):
        raise NotImplementedError

    def stats(self) -> dict:
        ctx = self.context
        result = {}
        if ctx is not None:
            result["mcs"] = len(ctx.mcs)
            result["clusters"] = len(ctx.clusters)
            result["realizable mcs"] = len(ctx.realizable_mcs())
            result.update(self.oracle.stats())
        result.update({f"spent {name}": value for name, value in self.budget.spent.items()})
        return result

    def decide(self) -> Verdict:
        """Satisfiability verdict; BUDGET when any budget runs out first."""
        try:
            self._prepare()
            witness = self.search()
        except BudgetExceeded as error:
            logger.info("Gave up on %s: %s", self.formula, error)
            return Verdict(BUDGET, self.formula, self.FRAME, self.reflexive, "sat", stats=self.stats())
        answer = SAT if witness is not None else UNSAT
        logger.info("%s over %s: %s", self.formula, self.FRAME, answer)
        return Verdict(answer, self.formula, self.FRAME, self.reflexive, "sat", witness, self.stats())

    def certificate(self, roots: dict) -> Certificate:
        return Certificate(self.formula, self.FRAME, self.reflexive, roots, self.context)


class MinkowskiDecider(AssemblyDecider):
    """
    Satisfiability over the plane with the strict componentwise order: a
    center MCS and four fabricated quadrants agreeing on the four half-lines
    through the center.
    """

    FRAME = "mink"

    def search(self):
        ctx = self.context
        traces = self.candidate_traces()
        by_initial_upper, by_final_lower = {}, {}
        for t in traces:
            by_initial_upper.setdefault(t.upper[0], []).append(t)
            by_final_lower.setdefault(t.lower[-1], []).append(t)
        logger.debug("%d centers, %d candidate traces", len(self.centers()), len(traces))

        for m in self.centers():
            for t_n in traces:
                for t_e in by_initial_upper[t_n.upper[0]]:
                    minus = t_n.upper[0]
                    ne = self.first_fabricated(
                        Biboundary(minus, plus, S=t_e, W=t_n, b=m)
                        for plus in self.cluster_order(minus)
                    )
                    if ne is None:
                        continue
                    for t_s in traces:
                        se = Biboundary(t_s.upper[0], t_e.lower[-1], N=t_e, W=t_s, l=m)
                        if not self.fabricated(se):
                            continue
                        for t_w in by_final_lower[t_s.lower[-1]]:
                            ctx.budget.charge("enumerated")
                            plus = t_s.lower[-1]
                            sw = self.first_fabricated(
                                Biboundary(low, plus, N=t_w, E=t_s, t=m)
                                for low in self.cluster_order(plus)
                            )
                            if sw is None:
                                continue
                            nw = Biboundary(t_w.upper[0], t_n.lower[-1], S=t_w, E=t_n, r=m)
                            if not self.fabricated(nw):
                                continue
                            return self._witness(
                                m, {"n": t_n, "e": t_e, "s": t_s, "w": t_w},
                                {"NE": ne, "NW": nw, "SE": se, "SW": sw},
                            )
        return None

    def _witness(self, m, traces, quadrants) -> Witness:
        roots = {f"quadrant {name}": self.oracle.derivation(d) for name, d in quadrants.items()}
        return Witness(m, traces, quadrants, {}, self.certificate(roots))


def _expected_quadrants(witness: Witness) -> dict:
    m, t, q = witness.center, witness.traces, witness.quadrants
    return {
        "NE": Biboundary(q["NE"].minus, q["NE"].plus, S=t["e"], W=t["n"], b=m),
        "NW": Biboundary(q["NW"].minus, q["NW"].plus, S=t["w"], E=t["n"], r=m),
        "SE": Biboundary(q["SE"].minus, q["SE"].plus, N=t["e"], W=t["s"], l=m),
        "SW": Biboundary(q["SW"].minus, q["SW"].plus, N=t["w"], E=t["s"], t=m),
    }


def check_center(witness: Witness):
    """Reason the center is unusable, or None."""
    ctx = witness.certificate.context
    m = witness.center
    if not isinstance(m, int) or not 0 <= m < len(ctx.mcs):
        return f"center {m!r} is not an MCS id"
    if not ctx.mcs[m].contains(2 * ctx.closure.root):
        return f"center m{m} does not contain the formula"
    return None


def check_minkowski_witness(witness: Witness):
    """
    Check a quadrant witness: derivations, center and shared half-lines.

    Returns:
        str or None: Reason for rejection, or None if accepted.
    """
    problem = check_center(witness)
    if problem is not None:
        return problem
    if set(witness.quadrants) != {"NE", "NW", "SE", "SW"} or set(witness.traces) != {"n", "e", "s", "w"}:
        return "witness needs quadrants NE, NW, SE, SW and traces n, e, s, w"
    for name, expected in _expected_quadrants(witness).items():
        if witness.quadrants[name] != expected:
            return f"quadrant {name} does not match the shared traces and center"
    failure = witness.certificate.check()
    if failure is not None:
        return f"derivation of {failure[0]} rejected at node path {list(failure[1])}"
    return None


def decide_sat_minkowski(formula: Formula, reflexive: bool = False, **options) -> Verdict:
    """
    Satisfiability over the plane ordered componentwise strictly, or over its
    reflexive closure.

    Args:
        formula (Formula): Desugared formula.
        reflexive (bool): Use the reflexive closure of the order.
        **options: engine, budget, threads, order_seed.

    Returns:
        Verdict: SAT with a witness, UNSAT, or BUDGET.
    """
    return MinkowskiDecider(formula, reflexive, **options).decide()


def validity_from(sat_verdict: Verdict, formula: Formula) -> Verdict:
    """Turn the satisfiability verdict of the negation into a validity verdict of ``formula``."""
    answer = {SAT: NOT_VALID, UNSAT: VALID, BUDGET: BUDGET}[sat_verdict.answer]
    return Verdict(
        answer, formula, sat_verdict.frame, sat_verdict.reflexive, "valid",
        sat_verdict.witness, sat_verdict.stats,
    )


def decide_valid_minkowski(formula: Formula, reflexive: bool = False, **options) -> Verdict:
    """Validity as unsatisfiability of the negation; a NOT-VALID verdict carries the negation's witness."""
    return validity_from(decide_sat_minkowski(negate(formula), reflexive, **options), formula)
