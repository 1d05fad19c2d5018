import logging

from src.Biboundary import Biboundary
from src.Derivation import Derivation
from src.FabricationOracle import FabricationOracle
from src.FabricationRules import TRI_GROUND, TRI_JOIN, FabricationRules
from src.Formula import Formula, negate
from src.MinkowskiDecider import AssemblyDecider, check_center, validity_from
from src.TriangularBiboundary import TriBiboundary
from src.Verdict import Verdict, Witness

logger = logging.getLogger(__name__)


class TriangularFabrication:
    def __init__(self, rules: FabricationRules, oracle: FabricationOracle):
        """
        Fabrication of triangular biboundaries: ground, or the join of a
        ground triangle, a fabricated square and a fabricated triangle of
        strictly smaller depth. Recursion on depth, memoized.

        Parameters:
        - rules (FabricationRules): Supplies the triangular operator.
        - oracle (FabricationOracle): Decides the rectangular pieces.
        """
        self.rules = rules
        self.triangles = rules.triangles
        self.oracle = oracle
        self._memo = {}

    def derivation(self, t: TriBiboundary):
        """Derivation of ``t``, or None if it is not fabricated."""
        if t in self._memo:
            return self._memo[t]
        tri = self.triangles
        found = None
        if tri.validate_tri(t):
            if tri.is_ground_tri(t):
                found = Derivation(TRI_GROUND, t)
            else:
                found = self._joined(t)
        self._memo[t] = found
        return found

    def _joined(self, t: TriBiboundary):
        tri = self.triangles
        depth = tri.tri_depth(t)
        if depth == 0:
            return None
        for t1, d, t2 in tri.decompositions(t):
            self.rules.context.budget.charge("fabrication_steps")
            if tri.tri_depth(t2) >= depth:
                continue
            if not self.oracle.is_fabricated(d):
                continue
            rest = self.derivation(t2)
            if rest is None:
                continue
            logger.debug("Triangle %s joined from %s, %s, %s", t, t1, d, t2)
            return Derivation(
                TRI_JOIN, t,
                (Derivation(TRI_GROUND, t1), self.oracle.derivation(d), rest),
            )
        return None

    def is_fabricated_tri(self, t: TriBiboundary) -> bool:
        return self.derivation(t) is not None


class IntervalDecider(AssemblyDecider):
    """
    Satisfiability over the strict intervals of the reals, ordered by
    overlaps, meets or before. The intervals form the open half-plane above
    the diagonal; around the distinguished point it splits into a square
    (northwest), a triangle (southeast) and two trapezoids, each a square
    plus a triangle along the diagonal.
    """

    FRAME = "hs"

    def _prepare(self):
        super()._prepare()
        self.tri_fabrication = TriangularFabrication(self.rules, self.oracle)

    def _triangle(self, candidates):
        for t in candidates:
            if self.tri_fabrication.is_fabricated_tri(t):
                return t
        return None

    def _east_trapezoid(self, m, t_n, t_e, traces):
        """Square with S = t_e, W = t_n, E = e1 plus the triangle with W = e1."""
        ctx = self.context
        minus = t_n.upper[0]
        for e1 in traces:
            square = self.first_fabricated(
                Biboundary(minus, e1.lower[-1], S=t_e, W=t_n, E=e1, b=m, r=r)
                for r in range(len(ctx.mcs))
            )
            if square is None:
                continue
            low = e1.upper[0]
            triangle = self._triangle(TriBiboundary(low, high, W=e1) for high in self.cluster_order(low))
            if triangle is not None:
                return e1, square, triangle
        return None

    def _south_trapezoid(self, m, t_s, t_w, traces):
        """Square with S = s2, E = t_s, N = t_w plus the triangle with N = s2."""
        ctx = self.context
        plus = t_s.lower[-1]
        for s2 in traces:
            square = self.first_fabricated(
                Biboundary(s2.upper[0], plus, S=s2, E=t_s, N=t_w, t=m, r=r)
                for r in range(len(ctx.mcs))
            )
            if square is None:
                continue
            high = s2.lower[-1]
            triangle = self._triangle(TriBiboundary(low, high, N=s2) for low in self.cluster_order(high))
            if triangle is not None:
                return s2, square, triangle
        return None

    def search(self):
        traces = self.candidate_traces()
        by_initial_upper, by_final_lower = {}, {}
        for t in traces:
            by_initial_upper.setdefault(t.upper[0], []).append(t)
            by_final_lower.setdefault(t.lower[-1], []).append(t)

        for m in self.centers():
            for t_n in traces:
                for t_e in by_initial_upper[t_n.upper[0]]:
                    east = self._east_trapezoid(m, t_n, t_e, traces)
                    if east is None:
                        continue
                    for t_s in traces:
                        corner = TriBiboundary(t_s.upper[0], t_e.lower[-1], N=t_e, W=t_s, l=m)
                        if not self.tri_fabrication.is_fabricated_tri(corner):
                            continue
                        for t_w in by_final_lower[t_s.lower[-1]]:
                            self.context.budget.charge("enumerated")
                            nw = Biboundary(t_w.upper[0], t_n.lower[-1], S=t_w, E=t_n, r=m)
                            if not self.fabricated(nw):
                                continue
                            south = self._south_trapezoid(m, t_s, t_w, traces)
                            if south is None:
                                continue
                            return self._witness(m, t_n, t_e, t_s, t_w, nw, corner, east, south)
        return None

    def _witness(self, m, t_n, t_e, t_s, t_w, nw, corner, east, south) -> Witness:
        e1, d1, tau1 = east
        s2, d2, tau2 = south
        traces = {"n": t_n, "e": t_e, "s": t_s, "w": t_w, "e1": e1, "s2": s2}
        quadrants = {"NW": nw, "NE": d1, "SW": d2}
        triangles = {"SE": corner, "NE": tau1, "SW": tau2}
        roots = {f"quadrant {name}": self.oracle.derivation(d) for name, d in quadrants.items()}
        roots.update({
            f"triangle {name}": self.tri_fabrication.derivation(t) for name, t in triangles.items()
        })
        return Witness(m, traces, quadrants, triangles, self.certificate(roots))


def check_interval_witness(witness: Witness):
    """
    Check an interval-frame witness: derivations, center and the bindings
    of squares and triangles to the shared traces.

    Returns:
        str or None: Reason for rejection, or None if accepted.
    """
    problem = check_center(witness)
    if problem is not None:
        return problem
    q, tri, t, m = witness.quadrants, witness.triangles, witness.traces, witness.center
    if set(q) != {"NW", "NE", "SW"} or set(tri) != {"SE", "NE", "SW"}:
        return "witness needs squares NW, NE, SW and triangles SE, NE, SW"
    if set(t) != {"n", "e", "s", "w", "e1", "s2"}:
        return "witness needs traces n, e, s, w, e1, s2"
    expected = {
        "square NW": (q["NW"], Biboundary(q["NW"].minus, q["NW"].plus, S=t["w"], E=t["n"], r=m)),
        "square NE": (q["NE"], Biboundary(q["NE"].minus, q["NE"].plus, S=t["e"], W=t["n"], E=t["e1"], b=m, r=q["NE"].r)),
        "square SW": (q["SW"], Biboundary(q["SW"].minus, q["SW"].plus, S=t["s2"], E=t["s"], N=t["w"], t=m, r=q["SW"].r)),
        "triangle SE": (tri["SE"], TriBiboundary(tri["SE"].minus, tri["SE"].plus, N=t["e"], W=t["s"], l=m)),
        "triangle NE": (tri["NE"], TriBiboundary(tri["NE"].minus, tri["NE"].plus, W=t["e1"])),
        "triangle SW": (tri["SW"], TriBiboundary(tri["SW"].minus, tri["SW"].plus, N=t["s2"])),
    }
    for name, (actual, wanted) in expected.items():
        if actual != wanted:
            return f"{name} does not match the shared traces and center"
    failure = witness.certificate.check()
    if failure is not None:
        return f"derivation of {failure[0]} rejected at node path {list(failure[1])}"
    return None


def decide_sat_hs(formula: Formula, reflexive: bool = False, **options) -> Verdict:
    """
    Satisfiability over strict intervals with the overlaps-meets-before
    relation, or over its reflexive closure.

    Args:
        formula (Formula): Desugared formula.
        reflexive (bool): Use the reflexive closure of the relation.
        **options: engine, budget, threads, order_seed.
    """
    return IntervalDecider(formula, reflexive, **options).decide()


def decide_valid_hs(formula: Formula, reflexive: bool = False, **options) -> Verdict:
    return validity_from(decide_sat_hs(negate(formula), reflexive, **options), formula)
