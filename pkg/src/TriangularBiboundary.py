"""Triangular biboundaries: the boundary data of a triangle under the diagonal of the strict-interval half-plane."""

import logging
from dataclasses import dataclass
from typing import Optional

from src.BiTrace import BiTrace
from src.Biboundary import Biboundary, BiboundaryValidator, fields_from_dict, fields_to_dict
from src.Joins import JoinOperator

logger = logging.getLogger(__name__)

TRI_EDGE_KEYS = ("N", "W")
TRI_CORNER_KEYS = ("l",)


@dataclass(frozen=True)
class TriBiboundary:
    """
    Partial map on {-, +, l, N, W}. ``minus`` and ``plus`` are read at the
    two diagonal vertices, the hypotenuse carries no data.
    """

    minus: int
    plus: int
    N: Optional[BiTrace] = None
    W: Optional[BiTrace] = None
    l: Optional[int] = None

    @property
    def shape(self) -> frozenset:
        return frozenset(k for k in TRI_EDGE_KEYS if getattr(self, k) is not None)

    def canonical_key(self) -> tuple:
        def edge(trace):
            return (-1, ()) if trace is None else trace.key()

        return (self.minus, self.plus, edge(self.N), edge(self.W), -1 if self.l is None else self.l)

    def to_dict(self, context) -> dict:
        return fields_to_dict(self, context, TRI_EDGE_KEYS, TRI_CORNER_KEYS)

    @classmethod
    def from_dict(cls, data: dict, context) -> "TriBiboundary":
        return cls(**fields_from_dict(data, context, TRI_EDGE_KEYS, TRI_CORNER_KEYS))

    def __str__(self):
        parts = [f"-:c{self.minus}", f"+:c{self.plus}"]
        for k in TRI_EDGE_KEYS:
            if getattr(self, k) is not None:
                parts.append(f"{k}:{getattr(self, k)}")
        if self.l is not None:
            parts.append(f"l:m{self.l}")
        return "<" + ", ".join(parts) + ">"


class TriangularOperator:
    def __init__(self, joins: JoinOperator):
        """
        Validity, groundness, depth and the three-part join of triangular
        biboundaries.

        Parameters:
        - joins (JoinOperator): Supplies the validator, the bi-trace catalog
          and the side concatenation shared with rectangular joins.
        """
        self.joins = joins
        self.validator: BiboundaryValidator = joins.validator
        self.context = joins.context
        self.catalog = joins.catalog
        self._valid = {}

    def violations(self, t: TriBiboundary) -> list:
        """Names of the violated conditions; empty iff t is a triangular biboundary."""
        ctx = self.context
        k = len(ctx.clusters)
        if not (0 <= t.minus < k and 0 <= t.plus < k):
            return ["clusters"]
        problems = []
        for key in TRI_EDGE_KEYS:
            trace = getattr(t, key)
            if trace is not None and not self.catalog.validate(trace):
                problems.append(f"edge-{key}")
        defined = t.N is not None and t.W is not None
        if (t.l is not None) != defined or (t.l is not None and not 0 <= t.l < len(ctx.mcs)):
            problems.append("definedness-l")
        if problems:
            return problems

        if (t.W is not None and t.W.upper[0] != t.minus) or (t.N is not None and t.N.lower[-1] != t.plus):
            problems.append("edge-clusters")
        if t.l is not None:
            above = t.N.upper[0]
            below = t.W.lower[-1]
            if not (
                ctx.mcs_leq_cluster(t.l, above)
                and ctx.covered(ctx.mcs_future_defects(t.l), ctx.future_outlet(ctx.cluster_union[above]))
                and ctx.cluster_leq_mcs(below, t.l)
                and ctx.covered(ctx.mcs_past_defects(t.l), ctx.past_outlet(ctx.cluster_union[below]))
            ):
                problems.append("corner-l")
        outlet = 0
        if t.N is not None:
            outlet = ctx.future_outlet(ctx.union_bits(ctx.interpolant(*t.N.final)))
        if not ctx.covered(ctx.cluster_future_defects(t.plus), outlet):
            problems.append("future-defects")
        outlet = 0
        if t.W is not None:
            outlet = ctx.past_outlet(ctx.union_bits(ctx.interpolant(*t.W.initial)))
        if not ctx.covered(ctx.cluster_past_defects(t.minus), outlet):
            problems.append("past-defects")
        return problems

    def validate_tri(self, t: TriBiboundary) -> bool:
        cached = self._valid.get(t)
        if cached is None:
            cached = not self.violations(t)
            self._valid[t] = cached
        return cached

    def is_ground_tri(self, t: TriBiboundary) -> bool:
        """
        Single diagonal cluster c; inner clusters of N and W equal c; a
        cluster defect of c is passed along every upper cluster and
        transition of N (future) or every lower cluster and transition of W
        (past).
        """
        ctx = self.context
        if t.minus != t.plus:
            return False
        c = t.plus
        if t.N is not None and any(x != c for x in t.N.lower):
            return False
        if t.W is not None and any(x != c for x in t.W.upper):
            return False

        future = ctx.cluster_future_defects(c)
        if future:
            if t.N is None:
                return False
            for x in t.N.upper:
                future &= ctx.future_outlet(ctx.cluster_union[x])
            for m in t.N.transitions:
                future &= ctx.future_outlet(ctx.mcs[m].bits)
            if future != ctx.cluster_future_defects(c):
                return False

        past = ctx.cluster_past_defects(c)
        if past:
            if t.W is None:
                return False
            for x in t.W.lower:
                past &= ctx.past_outlet(ctx.cluster_union[x])
            for m in t.W.transitions:
                past &= ctx.past_outlet(ctx.mcs[m].bits)
            if past != ctx.cluster_past_defects(c):
                return False
        return True

    def tri_depth(self, t: TriBiboundary) -> int:
        return self.context.height(t.minus, t.plus)

    def tri_join(self, t1: TriBiboundary, d: Biboundary, t2: TriBiboundary):
        """
        Compose a triangle from a triangle t1 below the square d and a
        triangle t2 to its right, along t1(N) = d(S) and d(E) = t2(W).
        The southeast corner of d is discarded.

        Returns:
            TriBiboundary or None: The composite when defined and valid.
        """
        if d.S is None or d.E is None or t1.N != d.S or d.E != t2.W:
            return None
        ok, west = self.joins.join_side(t1.W, t1.l, d.W, d.b)
        if not ok:
            return None
        ok, north = self.joins.join_side(d.N, d.t, t2.N, t2.l)
        if not ok:
            return None
        composite = TriBiboundary(
            minus=t1.minus, plus=t2.plus, N=north, W=west,
            l=d.l if north is not None and west is not None else None,
        )
        if not self.validate_tri(composite):
            return None
        return composite

    def decompositions(self, t: TriBiboundary):
        """
        Yield every (t1, d, t2) with t1 ground, all three valid and
        tri_join(t1, d, t2) == t.
        """
        ctx = self.context
        c = t.minus
        bottoms = self.catalog.enumerate(lower_constant=c, final_lower=c)
        sides = self.catalog.all()
        west_splits = self.joins.edge_splits(t.W)
        north_splits = self.joins.edge_splits(t.N)
        for shared_south in bottoms:
            for w1, a, w2 in west_splits:
                t1 = TriBiboundary(
                    minus=c, plus=c, N=shared_south, W=w1,
                    l=a if w1 is not None else None,
                )
                if not (self.validate_tri(t1) and self.is_ground_tri(t1)):
                    continue
                for shared_east in sides:
                    for n1, a2, n2 in north_splits:
                        t2 = TriBiboundary(
                            minus=shared_east.upper[0], plus=t.plus, N=n2, W=shared_east,
                            l=a2 if n2 is not None else None,
                        )
                        if not self.validate_tri(t2):
                            continue
                        base = Biboundary(
                            minus=shared_south.upper[0], plus=shared_east.lower[-1],
                            S=shared_south, E=shared_east, W=w2, N=n1,
                            b=a if w2 is not None else None,
                            t=a2 if n1 is not None else None,
                            l=t.l if w2 is not None and n1 is not None else None,
                        )
                        for r in range(len(ctx.mcs)):
                            d = base.replace(r=r)
                            if not self.validator.validate_biboundary(d):
                                continue
                            if self.tri_join(t1, d, t2) == t:
                                yield t1, d, t2

    def all_tri(self, minus_options=None, plus_options=None, n_options=None, w_options=None) -> list:
        """
        Valid triangular biboundaries matching the given options; an option
        list may contain None for an undefined edge.
        """
        ctx = self.context
        k = len(ctx.clusters)
        result = []
        for minus in (range(k) if minus_options is None else minus_options):
            for plus in (range(k) if plus_options is None else plus_options):
                norths = [None] + self.catalog.enumerate(final_lower=plus) if n_options is None else n_options
                wests = [None] + self.catalog.enumerate(initial_upper=minus) if w_options is None else w_options
                for north in norths:
                    for west in wests:
                        corners = [None] if north is None or west is None else range(len(ctx.mcs))
                        for l in corners:
                            t = TriBiboundary(minus=minus, plus=plus, N=north, W=west, l=l)
                            if self.validate_tri(t):
                                result.append(t)
        return sorted(result, key=TriBiboundary.canonical_key)
