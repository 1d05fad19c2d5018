import itertools
import logging
from functools import lru_cache

from src.Biboundary import Biboundary, BiboundaryValidator, EDGE_KEYS, CORNER_EDGES
from src.ClosureContext import ClosureContext

logger = logging.getLogger(__name__)

ALL_SHAPES = tuple(
    frozenset(combo)
    for size in range(5)
    for combo in itertools.combinations(EDGE_KEYS, size)
)


class BiboundaryUniverse:
    def __init__(
            self,
            context: ClosureContext,
            validator: BiboundaryValidator = None,
            shapes=None,
            max_trace_length: int = None):
        """
        The space of biboundaries the fabrication engines work in.

        Unrestricted by default. A restriction (allowed sets of defined edges,
        maximal bi-trace length) keeps exhaustive runs small; fabrication
        inside a restricted universe under-approximates fabrication in the
        full one.

        Parameters:
        - context (ClosureContext): The closure context.
        - validator (BiboundaryValidator): Validity checks. Default builds one.
        - shapes (iterable of sets of edge keys): Allowed edge shapes. Default all 16.
        - max_trace_length (int): Maximal transitions per edge. Default unbounded.
        """
        self.context = context
        self.validator = validator if validator is not None else BiboundaryValidator(context)
        self.catalog = self.validator.catalog
        self.shapes = ALL_SHAPES if shapes is None else tuple(frozenset(s) for s in shapes)
        self.max_trace_length = max_trace_length
        self._all = None

    @property
    def restricted(self) -> bool:
        return set(self.shapes) != set(ALL_SHAPES) or self.max_trace_length is not None

    def _trace_allowed(self, trace) -> bool:
        return trace is None or self.max_trace_length is None or trace.length <= self.max_trace_length

    def contains(self, d: Biboundary) -> bool:
        return (
            d.shape in self.shapes
            and all(self._trace_allowed(getattr(d, k)) for k in EDGE_KEYS)
            and self.validator.validate_biboundary(d)
        )

    # ------------------------------------------------------------- corners

    @lru_cache(maxsize=None)
    def _b_options(self, minus):
        ctx = self.context
        up = ctx.future_outlet(ctx.cluster_union[minus])
        return tuple(
            m for m in range(len(ctx.mcs))
            if ctx.mcs_leq_cluster(m, minus) and ctx.covered(ctx.mcs_future_defects(m), up)
        )

    @lru_cache(maxsize=None)
    def _t_options(self, plus):
        ctx = self.context
        down = ctx.past_outlet(ctx.cluster_union[plus])
        return tuple(
            m for m in range(len(ctx.mcs))
            if ctx.cluster_leq_mcs(plus, m) and ctx.covered(ctx.mcs_past_defects(m), down)
        )

    @lru_cache(maxsize=None)
    def _side_corner_options(self, above, below):
        """MCS fitting a corner with ``above`` ahead of it and ``below`` behind it (conditions on l and r)."""
        ctx = self.context
        up = ctx.future_outlet(ctx.cluster_union[above])
        down = ctx.past_outlet(ctx.cluster_union[below])
        return tuple(
            m for m in range(len(ctx.mcs))
            if ctx.mcs_leq_cluster(m, above)
            and ctx.covered(ctx.mcs_future_defects(m), up)
            and ctx.cluster_leq_mcs(below, m)
            and ctx.covered(ctx.mcs_past_defects(m), down)
        )

    def corner_options(self, key, minus, plus, edges) -> tuple:
        """Corner values admitted by the local validity condition of ``key``."""
        if key == "b":
            return self._b_options(minus)
        if key == "t":
            return self._t_options(plus)
        if key == "l":
            return self._side_corner_options(edges["N"].upper[0], edges["W"].lower[-1])
        return self._side_corner_options(edges["E"].upper[0], edges["S"].lower[-1])

    # -------------------------------------------------------------- generate

    def edge_candidates(self, key, minus, plus):
        """Bi-traces for edge ``key`` anchored at the given clusters."""
        if key in ("W", "S"):
            traces = self.catalog.enumerate(initial_upper=minus, max_length=self.max_trace_length)
        else:
            traces = self.catalog.enumerate(final_lower=plus, max_length=self.max_trace_length)
        return traces

    def generate(
            self,
            minus_options=None,
            plus_options=None,
            edge_filters=None,
            edge_options=None,
            corner_options=None,
            shapes=None):
        """
        Lazily yield the members of the universe matching constraints.

        Args:
            minus_options, plus_options (iterable of int): Allowed clusters.
            edge_filters (dict): Edge key -> predicate on (trace, minus, plus).
            edge_options (dict): Edge key -> explicit list of candidates, where
                None stands for the undefined edge.
            corner_options (dict): Corner key -> allowed MCS ids.
            shapes (iterable of frozenset): Further restriction of shapes.

        Yields:
            Biboundary: Valid members in canonical order per (minus, plus, shape).
        """
        ctx = self.context
        k = len(ctx.clusters)
        minus_options = range(k) if minus_options is None else minus_options
        plus_options = range(k) if plus_options is None else plus_options
        edge_filters = edge_filters or {}
        edge_options = edge_options or {}
        corner_options = corner_options or {}
        allowed_shapes = [s for s in self.shapes if shapes is None or s in set(map(frozenset, shapes))]
        for key in edge_options:
            if None not in edge_options[key]:
                allowed_shapes = [s for s in allowed_shapes if key in s]
            if not any(t is not None for t in edge_options[key]):
                allowed_shapes = [s for s in allowed_shapes if key not in s]

        for minus in minus_options:
            for plus in plus_options:
                candidates = {}
                for key in EDGE_KEYS:
                    if key in edge_options:
                        pool = [t for t in edge_options[key] if t is not None]
                        if key in ("W", "S"):
                            pool = [t for t in pool if t.upper[0] == minus and self._trace_allowed(t)]
                        else:
                            pool = [t for t in pool if t.lower[-1] == plus and self._trace_allowed(t)]
                    else:
                        pool = self.edge_candidates(key, minus, plus)
                    accept = edge_filters.get(key)
                    if accept is not None:
                        pool = [t for t in pool if accept(t, minus, plus)]
                    candidates[key] = pool
                for shape in allowed_shapes:
                    keys = [key for key in EDGE_KEYS if key in shape]
                    for combo in itertools.product(*(candidates[key] for key in keys)):
                        edges = {key: None for key in EDGE_KEYS}
                        edges.update(zip(keys, combo))
                        yield from self._with_corners(minus, plus, edges, corner_options)

    def _with_corners(self, minus, plus, edges, corner_options):
        corner_keys = [
            key for key, (e1, e2) in CORNER_EDGES.items()
            if edges[e1] is not None and edges[e2] is not None
        ]
        pools = []
        for key in corner_keys:
            pool = self.corner_options(key, minus, plus, edges)
            if key in corner_options:
                allowed = set(corner_options[key])
                pool = [m for m in pool if m in allowed]
            pools.append(pool)
        for values in itertools.product(*pools):
            self.context.budget.charge("enumerated")
            d = Biboundary(minus=minus, plus=plus, **edges, **dict(zip(corner_keys, values)))
            if self.validator.validate_biboundary(d):
                yield d

    def all(self) -> list:
        """Every member of the universe (only sensible for small contexts or restrictions)."""
        if self._all is None:
            self._all = sorted(self.generate(), key=Biboundary.canonical_key)
            logger.info("Universe holds %d biboundaries", len(self._all))
        return self._all

    def size_bound(self) -> int:
        """Upper bound on the number of members, used as a derivation height bound."""
        ctx = self.context
        traces = len(self.catalog.all())
        return len(ctx.clusters) ** 2 * (traces + 1) ** 4 * (len(ctx.mcs) + 1) ** 4
