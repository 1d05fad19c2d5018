"""Biboundaries: the finite boundary description of a labelled rectangle."""

import dataclasses
from dataclasses import dataclass
from typing import Optional

from src.BiTrace import BiTrace, BiTraceCatalog
from src.ClosureContext import ClosureContext

EDGE_KEYS = ("N", "S", "E", "W")
CORNER_KEYS = ("b", "t", "l", "r")
# corner -> the two edges meeting there
CORNER_EDGES = {"b": ("S", "W"), "t": ("N", "E"), "l": ("N", "W"), "r": ("S", "E")}


@dataclass(frozen=True)
class Biboundary:
    """
    Partial map on {-, +, b, t, l, r, N, S, E, W}.

    ``minus`` / ``plus`` are cluster ids (just inside the southwest and the
    northeast corner), the edges are bi-traces oriented west to east and
    south to north, the corners are MCS ids: b southwest, t northeast,
    l northwest, r southeast.
    """

    minus: int
    plus: int
    N: Optional[BiTrace] = None
    S: Optional[BiTrace] = None
    E: Optional[BiTrace] = None
    W: Optional[BiTrace] = None
    b: Optional[int] = None
    t: Optional[int] = None
    l: Optional[int] = None
    r: Optional[int] = None

    @property
    def shape(self) -> frozenset:
        return frozenset(k for k in EDGE_KEYS if getattr(self, k) is not None)

    @property
    def is_closed(self) -> bool:
        return len(self.shape) == 4

    def replace(self, **changes) -> "Biboundary":
        return dataclasses.replace(self, **changes)

    def diagonal_dual(self) -> "Biboundary":
        """Reflect in the diagonal: N<->E, S<->W, l<->r."""
        return Biboundary(
            minus=self.minus, plus=self.plus,
            N=self.E, S=self.W, E=self.N, W=self.S,
            b=self.b, t=self.t, l=self.r, r=self.l,
        )

    def canonical_key(self) -> tuple:
        def edge(trace):
            return (-1, ()) if trace is None else trace.key()

        def corner(m):
            return -1 if m is None else m

        return (
            self.minus, self.plus,
            edge(self.N), edge(self.S), edge(self.E), edge(self.W),
            corner(self.b), corner(self.t), corner(self.l), corner(self.r),
        )

    def to_dict(self, context: ClosureContext) -> dict:
        """Canonical form: clusters as sorted MCS-id lists, bi-traces as interleaved arrays."""
        return fields_to_dict(self, context, EDGE_KEYS, CORNER_KEYS)

    @classmethod
    def from_dict(cls, data: dict, context: ClosureContext) -> "Biboundary":
        return cls(**fields_from_dict(data, context, EDGE_KEYS, CORNER_KEYS))

    def __str__(self):
        parts = [f"-:c{self.minus}", f"+:c{self.plus}"]
        for k in EDGE_KEYS:
            if getattr(self, k) is not None:
                parts.append(f"{k}:{getattr(self, k)}")
        for k in CORNER_KEYS:
            if getattr(self, k) is not None:
                parts.append(f"{k}:m{getattr(self, k)}")
        return "{" + ", ".join(parts) + "}"


def cluster_members(context: ClosureContext, c: int) -> list:
    return sorted(context.clusters[c].members)


def cluster_from_members(context: ClosureContext, members) -> int:
    wanted = frozenset(members)
    for cluster in context.clusters:
        if cluster.members == wanted:
            return cluster.index
    raise ValueError(f"No cluster with members {sorted(wanted)}")


def trace_to_list(context: ClosureContext, trace: BiTrace) -> list:
    values = []
    for position, value in enumerate(trace.interleaved()):
        values.append(value if position % 3 == 2 else cluster_members(context, value))
    return values


def trace_from_list(context: ClosureContext, values) -> BiTrace:
    decoded = []
    for position, value in enumerate(values):
        if position % 3 == 2:
            if not isinstance(value, int):
                raise ValueError(f"Transition value must be an MCS id, got {value!r}")
            decoded.append(value)
        else:
            decoded.append(cluster_from_members(context, value))
    return BiTrace.from_interleaved(decoded)


def fields_to_dict(d, context, edge_keys, corner_keys):
    data = {
        "minus": cluster_members(context, d.minus),
        "plus": cluster_members(context, d.plus),
    }
    for k in edge_keys:
        trace = getattr(d, k)
        data[k] = None if trace is None else trace_to_list(context, trace)
    for k in corner_keys:
        data[k] = getattr(d, k)
    return data


def fields_from_dict(data, context, edge_keys, corner_keys):
    fields = {
        "minus": cluster_from_members(context, data["minus"]),
        "plus": cluster_from_members(context, data["plus"]),
    }
    for k in edge_keys:
        if data.get(k) is not None:
            fields[k] = trace_from_list(context, data[k])
    for k in corner_keys:
        value = data.get(k)
        if value is not None:
            if not isinstance(value, int) or not 0 <= value < len(context.mcs):
                raise ValueError(f"Corner {k} must be an MCS id, got {value!r}")
            fields[k] = value
    return fields


class BiboundaryValidator:
    def __init__(self, context: ClosureContext, catalog: BiTraceCatalog = None):
        """
        Validity, groundness and the fabrication invariant of biboundaries
        over one closure context.

        Parameters:
        - context (ClosureContext): Order and defect bookkeeping.
        - catalog (BiTraceCatalog): Bi-trace operations. Default builds one.
        """
        self.context = context
        self.catalog = catalog if catalog is not None else BiTraceCatalog(context)
        self._valid = {}

    def _up_to_cluster(self, defects, c):
        ctx = self.context
        return ctx.covered(defects, ctx.future_outlet(ctx.cluster_union[c]))

    def _down_to_cluster(self, defects, c):
        ctx = self.context
        return ctx.covered(defects, ctx.past_outlet(ctx.cluster_union[c]))

    def violations(self, d: Biboundary) -> list:
        """Names of the violated conditions; empty iff d is a biboundary."""
        ctx = self.context
        k = len(ctx.clusters)
        if not (0 <= d.minus < k and 0 <= d.plus < k):
            return ["clusters"]
        problems = []
        for key in EDGE_KEYS:
            trace = getattr(d, key)
            if trace is not None and not self.catalog.validate(trace):
                problems.append(f"edge-{key}")
        for corner, (e1, e2) in CORNER_EDGES.items():
            value = getattr(d, corner)
            defined = getattr(d, e1) is not None and getattr(d, e2) is not None
            if (value is not None) != defined:
                problems.append(f"definedness-{corner}")
            elif value is not None and not 0 <= value < len(ctx.mcs):
                problems.append(f"definedness-{corner}")
        if problems:
            return problems

        if d.b is not None and not (
            ctx.mcs_leq_cluster(d.b, d.minus)
            and self._up_to_cluster(ctx.mcs_future_defects(d.b), d.minus)
        ):
            problems.append("corner-b")
        if d.t is not None and not (
            ctx.cluster_leq_mcs(d.plus, d.t)
            and self._down_to_cluster(ctx.mcs_past_defects(d.t), d.plus)
        ):
            problems.append("corner-t")
        if (
            (d.W is not None and d.W.upper[0] != d.minus)
            or (d.S is not None and d.S.upper[0] != d.minus)
            or (d.E is not None and d.E.lower[-1] != d.plus)
            or (d.N is not None and d.N.lower[-1] != d.plus)
        ):
            problems.append("edge-clusters")
        if d.l is not None:
            above = d.N.upper[0]
            below = d.W.lower[-1]
            if not (
                ctx.mcs_leq_cluster(d.l, above)
                and self._up_to_cluster(ctx.mcs_future_defects(d.l), above)
                and ctx.cluster_leq_mcs(below, d.l)
                and self._down_to_cluster(ctx.mcs_past_defects(d.l), below)
            ):
                problems.append("corner-l")
        if d.r is not None:
            above = d.E.upper[0]
            below = d.S.lower[-1]
            if not (
                ctx.mcs_leq_cluster(d.r, above)
                and self._up_to_cluster(ctx.mcs_future_defects(d.r), above)
                and ctx.cluster_leq_mcs(below, d.r)
                and self._down_to_cluster(ctx.mcs_past_defects(d.r), below)
            ):
                problems.append("corner-r")

        outlet = 0
        if d.N is not None:
            outlet |= ctx.future_outlet(ctx.union_bits(ctx.interpolant(*d.N.final)))
        if d.E is not None:
            outlet |= ctx.future_outlet(ctx.union_bits(ctx.interpolant(*d.E.final)))
        if d.t is not None:
            outlet |= ctx.future_outlet(ctx.mcs[d.t].bits)
        if not ctx.covered(ctx.cluster_future_defects(d.plus), outlet):
            problems.append("future-defects")

        outlet = 0
        if d.S is not None:
            outlet |= ctx.past_outlet(ctx.union_bits(ctx.interpolant(*d.S.initial)))
        if d.W is not None:
            outlet |= ctx.past_outlet(ctx.union_bits(ctx.interpolant(*d.W.initial)))
        if d.b is not None:
            outlet |= ctx.past_outlet(ctx.mcs[d.b].bits)
        if not ctx.covered(ctx.cluster_past_defects(d.minus), outlet):
            problems.append("past-defects")
        return problems

    def validate_biboundary(self, d: Biboundary) -> bool:
        cached = self._valid.get(d)
        if cached is None:
            cached = not self.violations(d)
            self._valid[d] = cached
        return cached

    def is_ground(self, d: Biboundary) -> bool:
        """Equal clusters, inner clusters of every defined edge equal to them."""
        if d.minus != d.plus:
            return False
        c = d.plus
        return (
            (d.N is None or all(x == c for x in d.N.lower))
            and (d.E is None or all(x == c for x in d.E.lower))
            and (d.S is None or all(x == c for x in d.S.upper))
            and (d.W is None or all(x == c for x in d.W.upper))
        )

    def satisfies_fabrication_invariant(self, d: Biboundary) -> bool:
        """
        Order facts shared by every fabricated biboundary: - <= +, - below the
        first inner cluster of N and E, last inner cluster of S and W below +.
        Ground biboundaries have them and joins, limits and shuffles keep them.
        """
        ctx = self.context
        return (
            ctx.cluster_leq(d.minus, d.plus)
            and (d.N is None or ctx.cluster_leq(d.minus, d.N.lower[0]))
            and (d.E is None or ctx.cluster_leq(d.minus, d.E.lower[0]))
            and (d.S is None or ctx.cluster_leq(d.S.upper[-1], d.plus))
            and (d.W is None or ctx.cluster_leq(d.W.upper[-1], d.plus))
        )

    def height(self, d: Biboundary) -> int:
        return self.context.height(d.minus, d.plus)
