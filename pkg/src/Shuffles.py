import logging
from functools import lru_cache

from src.Biboundary import Biboundary
from src.BiboundaryUniverse import BiboundaryUniverse
from src.Formula import size

logger = logging.getLogger(__name__)

FULL_SHAPE = frozenset(("N", "S", "E", "W"))


class ShuffleOperator:
    def __init__(self, universe: BiboundaryUniverse, max_arity: int = None):
        """
        Shuffles: a biboundary whose inside is filled with copies of
        fabricated closed biboundaries and single points labelled by MCS.

        Parameters:
        - universe (BiboundaryUniverse): Space shuffles are drawn from.
        - max_arity (int): Cap on |Delta| and |M|. Default is the size of the formula.
        """
        self.universe = universe
        self.validator = universe.validator
        self.context = universe.context
        self.max_arity = size(self.context.formula) if max_arity is None else max_arity

    # ------------------------------------------------------------ conditions

    @staticmethod
    def inner_clusters_constant(dp: Biboundary) -> bool:
        """Inner clusters: W and S constantly dp(-) above the edge, E and N constantly dp(+) below it."""
        return (
            (dp.W is None or all(c == dp.minus for c in dp.W.upper))
            and (dp.S is None or all(c == dp.minus for c in dp.S.upper))
            and (dp.E is None or all(c == dp.plus for c in dp.E.lower))
            and (dp.N is None or all(c == dp.plus for c in dp.N.lower))
        )

    def fitting_mcs(self, minus: int, plus: int) -> frozenset:
        """MCS allowed in M between the two clusters; the same set as the interpolant."""
        return self.context.interpolant(minus, plus)

    def delta_fits(self, d: Biboundary, minus: int, plus: int) -> bool:
        """Whether the closed biboundary ``d`` may be placed inside a shuffle with clusters (minus, plus)."""
        ctx = self.context
        if not d.is_closed:
            return False
        up = ctx.future_outlet(ctx.cluster_union[plus])
        down = ctx.past_outlet(ctx.cluster_union[minus])
        return (
            ctx.mcs_leq_cluster(d.t, plus)
            and ctx.covered(ctx.mcs_future_defects(d.t), up)
            and all(c == plus for c in d.N.upper)
            and all(c == plus for c in d.E.upper)
            and ctx.cluster_leq_mcs(minus, d.b)
            and ctx.covered(ctx.mcs_past_defects(d.b), down)
            and all(c == minus for c in d.S.lower)
            and all(c == minus for c in d.W.lower)
        )

    def _trace_union(self, trace) -> int:
        ctx = self.context
        union = 0
        for low, high in trace.pairs():
            union |= ctx.union_bits(ctx.interpolant(low, high))
        return union | ctx.union_bits(trace.transitions)

    @lru_cache(maxsize=None)
    def future_outlet_of(self, d: Biboundary) -> int:
        """F-nodes passed up to a point of ``d`` lying in the future of everything below-left of it."""
        ctx = self.context
        union = ctx.union_bits((d.b, d.l, d.r)) | self._trace_union(d.W) | self._trace_union(d.S)
        return ctx.future_outlet(union)

    @lru_cache(maxsize=None)
    def past_outlet_of(self, d: Biboundary) -> int:
        ctx = self.context
        union = ctx.union_bits((d.t, d.l, d.r)) | self._trace_union(d.N) | self._trace_union(d.E)
        return ctx.past_outlet(union)

    def _mcs_outlets(self, mcs_ids):
        ctx = self.context
        union = ctx.union_bits(mcs_ids)
        return ctx.future_outlet(union), ctx.past_outlet(union)

    def _defects_covered(self, minus, plus, delta, mcs_ids) -> bool:
        ctx = self.context
        up, down = self._mcs_outlets(mcs_ids)
        for d in delta:
            up |= self.future_outlet_of(d)
            down |= self.past_outlet_of(d)
        return (
            ctx.covered(ctx.cluster_future_defects(minus), up)
            and ctx.covered(ctx.cluster_past_defects(plus), down)
        )

    def check_shuffle(self, dp: Biboundary, delta, mcs_ids) -> bool:
        """
        Whether ``dp`` is the shuffle of the closed biboundaries ``delta``
        and the MCS ids ``mcs_ids``.

        Args:
            dp (Biboundary): Candidate conclusion.
            delta (iterable of Biboundary): Closed premises, possibly empty.
            mcs_ids (iterable of int): Nonempty set of MCS ids.

        Returns:
            bool: True if every shuffle condition holds.
        """
        delta = list(delta)
        mcs_ids = list(mcs_ids)
        if not mcs_ids or not self.validator.validate_biboundary(dp):
            return False
        if any(not d.is_closed or not self.validator.validate_biboundary(d) for d in delta):
            return False
        if not self.inner_clusters_constant(dp):
            return False
        fitting = self.fitting_mcs(dp.minus, dp.plus)
        if any(m not in fitting for m in mcs_ids):
            return False
        if any(not self.delta_fits(d, dp.minus, dp.plus) for d in delta):
            return False
        return self._defects_covered(dp.minus, dp.plus, delta, mcs_ids)

    # ------------------------------------------------------------ enumeration

    def shuffle_shapes(self, minus: int, plus: int) -> list:
        """Every member of the universe with clusters (minus, plus) satisfying the inner-cluster condition."""
        return sorted(
            self.universe.generate(
                minus_options=[minus],
                plus_options=[plus],
                edge_filters={
                    "W": lambda trace, *_: all(c == minus for c in trace.upper),
                    "S": lambda trace, *_: all(c == minus for c in trace.upper),
                    "E": lambda trace, *_: all(c == plus for c in trace.lower),
                    "N": lambda trace, *_: all(c == plus for c in trace.lower),
                },
            ),
            key=Biboundary.canonical_key,
        )

    def enumerate_shuffles(self, delta, mcs_ids) -> set:
        """
        All shuffles of ``delta`` and ``mcs_ids`` in the universe.

        Raises:
            ValueError: If M is empty or an arity exceeds the cap.
        """
        delta = list(delta)
        mcs_ids = list(mcs_ids)
        if not mcs_ids:
            raise ValueError("A shuffle needs a nonempty set of MCS")
        if len(delta) > self.max_arity or len(mcs_ids) > self.max_arity:
            raise ValueError(f"Shuffle arity is capped at {self.max_arity}")
        result = set()
        k = len(self.context.clusters)
        for minus in range(k):
            for plus in range(k):
                fitting = self.fitting_mcs(minus, plus)
                if any(m not in fitting for m in mcs_ids):
                    continue
                if any(not self.delta_fits(d, minus, plus) for d in delta):
                    continue
                if not self._defects_covered(minus, plus, delta, mcs_ids):
                    continue
                result.update(self.shuffle_shapes(minus, plus))
        return result

    def find_witness(self, minus: int, plus: int, closed_pool=()):
        """
        Pick (Delta, M) making every inner-cluster-correct biboundary with
        clusters (minus, plus) a shuffle, drawing Delta from ``closed_pool``.

        Greedy cover: at each step take the fitting MCS or fitting pool member
        covering most of the still uncovered defects, ties broken by order.

        Returns:
            tuple or None: (Delta, M) as tuples, or None if no cover exists.
        """
        ctx = self.context
        fitting = sorted(self.fitting_mcs(minus, plus))
        if not fitting:
            return None
        need_up = ctx.cluster_future_defects(minus)
        need_down = ctx.cluster_past_defects(plus)
        candidates = []
        for m in fitting:
            up, down = self._mcs_outlets([m])
            candidates.append(("m", m, up, down))
        for d in closed_pool:
            if self.delta_fits(d, minus, plus):
                candidates.append(("d", d, self.future_outlet_of(d), self.past_outlet_of(d)))
        delta, chosen = [], []
        while need_up or need_down:
            best, gain = None, 0
            for candidate in candidates:
                covered = bin(need_up & candidate[2]).count("1") + bin(need_down & candidate[3]).count("1")
                if covered > gain:
                    best, gain = candidate, covered
            if best is None:
                return None
            need_up &= ~best[2]
            need_down &= ~best[3]
            (chosen if best[0] == "m" else delta).append(best[1])
        if not chosen:
            chosen.append(fitting[0])
        return tuple(sorted(delta, key=Biboundary.canonical_key)), tuple(sorted(chosen))

    def needs_delta(self, minus: int, plus: int) -> tuple:
        """Defect masks (future of minus, past of plus) that no fitting MCS covers."""
        ctx = self.context
        up, down = self._mcs_outlets(self.fitting_mcs(minus, plus))
        return (
            ctx.cluster_future_defects(minus) & ~up,
            ctx.cluster_past_defects(plus) & ~down,
        )

    def closed_candidates(self, minus: int, plus: int):
        """
        Yield closed universe members that fit inside a shuffle with clusters
        (minus, plus) and cover a defect no fitting MCS covers.
        """
        if FULL_SHAPE not in self.universe.shapes:
            return
        need_up, need_down = self.needs_delta(minus, plus)
        if not (need_up or need_down):
            return
        b_ok = [m for m in range(len(self.context.mcs)) if self.context.cluster_leq_mcs(minus, m)]
        t_ok = [m for m in range(len(self.context.mcs)) if self.context.mcs_leq_cluster(m, plus)]
        members = self.universe.generate(
            edge_filters={
                "N": lambda trace, *_: all(c == plus for c in trace.upper),
                "E": lambda trace, *_: all(c == plus for c in trace.upper),
                "S": lambda trace, *_: all(c == minus for c in trace.lower),
                "W": lambda trace, *_: all(c == minus for c in trace.lower),
            },
            corner_options={"b": b_ok, "t": t_ok},
            shapes=[FULL_SHAPE],
        )
        for d in members:
            if not self.delta_fits(d, minus, plus):
                continue
            if (self.future_outlet_of(d) & need_up) or (self.past_outlet_of(d) & need_down):
                yield d
