"""Maximal consistent sets of a closure and the order structure built on them."""

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from src.Budget import Budget
from src.ClosureTable import ClosureTable
from src.Formula import Formula, pretty
from src.KtTableau import tableau_for

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Mcs:
    index: int
    bits: int

    def contains(self, entry: int) -> bool:
        present = (self.bits >> (entry >> 1)) & 1
        return bool(present) if entry & 1 == 0 else not present


@dataclass(frozen=True)
class Cluster:
    index: int
    members: frozenset


class ClosureContext:
    def __init__(self, formula: Formula, budget: Budget = None):
        """
        Everything derived from the closure of one formula: the maximal
        consistent sets (MCS), the preorder between them, the clusters and
        the defect bookkeeping used by bi-traces and biboundaries.

        MCS are numbered by descending bit vector (bit i = subformula i in
        the set); clusters by their sorted member ids. Both numberings are
        deterministic and are what certificates refer to.

        Parameters:
        - formula (Formula): Desugared formula.
        - budget (Budget): Resource caps. Default is a fresh Budget.
        """
        self.formula = formula
        self.budget = budget if budget is not None else Budget()
        self.closure = ClosureTable(formula)
        self.tableau = tableau_for(self.closure, self.budget)

        bits = sorted(self.tableau.surviving_bits(), reverse=True)
        self.mcs = [Mcs(i, b) for i, b in enumerate(bits)]
        s = self.closure.num_subformulas
        self.membership = np.array(
            [[(b >> i) & 1 for i in range(s)] for b in bits], dtype=bool
        ).reshape(len(bits), s)

        self.future_mask = 0
        self.past_mask = 0
        for i, _ in self.closure.future_nodes:
            self.future_mask |= 1 << i
        for i, _ in self.closure.past_nodes:
            self.past_mask |= 1 << i

        self.lesssim = self._compute_lesssim()
        self.reflexive = np.diag(self.lesssim).copy()
        self.clusters, self.cluster_of = self._compute_clusters()
        self._compute_cluster_orders()
        self._interpolants = {}
        self._realizable = None
        logger.info(
            "Closure of %s: %d entries, %d MCS, %d clusters",
            pretty(formula), len(self.closure), len(self.mcs), len(self.clusters),
        )

    # ------------------------------------------------------------------ order

    def _compute_lesssim(self) -> np.ndarray:
        member = self.membership
        n = len(self.mcs)
        lesssim = np.ones((n, n), dtype=bool)
        for i, j in self.closure.future_nodes:
            # psi in n or F psi in n  requires  F psi in m
            needed = member[:, j] | member[:, i]
            lesssim &= ~needed[None, :] | member[:, i][:, None]
        for i, j in self.closure.past_nodes:
            # psi in m or P psi in m  requires  P psi in n
            needed = member[:, j] | member[:, i]
            lesssim &= ~needed[:, None] | member[:, i][None, :]
        return lesssim

    def _compute_clusters(self):
        equivalent = self.lesssim & self.lesssim.T
        cluster_of = np.full(len(self.mcs), -1, dtype=int)
        groups = []
        for m in range(len(self.mcs)):
            if not self.reflexive[m] or cluster_of[m] >= 0:
                continue
            members = [n for n in range(len(self.mcs)) if self.reflexive[n] and equivalent[m, n]]
            for n in members:
                cluster_of[n] = len(groups)
            groups.append(tuple(members))
        # ids are assigned in order of smallest member, which is already sorted
        clusters = [Cluster(i, frozenset(g)) for i, g in enumerate(groups)]
        return clusters, cluster_of

    def _compute_cluster_orders(self):
        k = len(self.clusters)
        n = len(self.mcs)
        self.cluster_union = [self.union_bits(c.members) for c in self.clusters]
        representative = [min(c.members) for c in self.clusters]
        self.cluster_leq_matrix = np.zeros((k, k), dtype=bool)
        self.mcs_leq_cluster_matrix = np.zeros((n, k), dtype=bool)
        self.cluster_leq_mcs_matrix = np.zeros((k, n), dtype=bool)
        for c, cluster in enumerate(self.clusters):
            members = sorted(cluster.members)
            self.mcs_leq_cluster_matrix[:, c] = self.lesssim[:, members].all(axis=1)
            self.cluster_leq_mcs_matrix[c, :] = self.lesssim[members, :].all(axis=0)
        for c in range(k):
            for d in range(k):
                self.cluster_leq_matrix[c, d] = self.lesssim[representative[c], representative[d]]

    def mcs_lesssim(self, m: int, n: int) -> bool:
        return bool(self.lesssim[m, n])

    def cluster_leq(self, c: int, d: int) -> bool:
        return bool(self.cluster_leq_matrix[c, d])

    def cluster_less(self, c: int, d: int) -> bool:
        return c != d and bool(self.cluster_leq_matrix[c, d])

    def mcs_leq_cluster(self, m: int, c: int) -> bool:
        """m <= c: m precedes every member of c."""
        return bool(self.mcs_leq_cluster_matrix[m, c])

    def mcs_less_cluster(self, m: int, c: int) -> bool:
        return m not in self.clusters[c].members and self.mcs_leq_cluster(m, c)

    def cluster_leq_mcs(self, c: int, m: int) -> bool:
        """c <= m: every member of c precedes m."""
        return bool(self.cluster_leq_mcs_matrix[c, m])

    def cluster_less_mcs(self, c: int, m: int) -> bool:
        return m not in self.clusters[c].members and self.cluster_leq_mcs(c, m)

    @lru_cache(maxsize=None)
    def height(self, low: int, high: int) -> int:
        """Length of the longest chain of clusters from ``low`` to ``high``; 0 if low is not below high."""
        if not self.cluster_leq(low, high):
            return 0
        if low == high:
            return 1
        best = 0
        for middle in range(len(self.clusters)):
            if self.cluster_less(low, middle) and self.cluster_leq(middle, high):
                best = max(best, self.height(middle, high))
        return 1 + best

    # ---------------------------------------------------------------- defects

    def union_bits(self, mcs_ids) -> int:
        union = 0
        for m in mcs_ids:
            union |= self.mcs[m].bits
        return union

    def _arguments_present(self, union: int, nodes) -> int:
        lifted = 0
        for i, j in nodes:
            if (union >> j) & 1:
                lifted |= 1 << i
        return lifted

    def future_outlet(self, union: int) -> int:
        """Mask of F-nodes F psi passed up to a set with this union (psi or F psi present)."""
        return (union & self.future_mask) | self._arguments_present(union, self.closure.future_nodes)

    def past_outlet(self, union: int) -> int:
        return (union & self.past_mask) | self._arguments_present(union, self.closure.past_nodes)

    def mcs_future_defects(self, m: int) -> int:
        return self.mcs[m].bits & self.future_mask

    def mcs_past_defects(self, m: int) -> int:
        return self.mcs[m].bits & self.past_mask

    def cluster_future_defects(self, c: int) -> int:
        union = self.cluster_union[c]
        return union & self.future_mask & ~self._arguments_present(union, self.closure.future_nodes)

    def cluster_past_defects(self, c: int) -> int:
        union = self.cluster_union[c]
        return union & self.past_mask & ~self._arguments_present(union, self.closure.past_nodes)

    @staticmethod
    def covered(defects: int, outlet: int) -> bool:
        return defects & ~outlet == 0

    @staticmethod
    def _entries(mask: int) -> frozenset:
        entries = set()
        i = 0
        while mask:
            if mask & 1:
                entries.add(2 * i)
            mask >>= 1
            i += 1
        return frozenset(entries)

    def _dispatch_defects(self, x, of_mcs, of_cluster):
        if isinstance(x, Cluster):
            return of_cluster(x.index)
        if isinstance(x, Mcs):
            return of_mcs(x.index)
        mask = 0
        for member in x:
            mask |= of_mcs(member.index if isinstance(member, Mcs) else member)
        return mask

    def future_defects(self, x) -> frozenset:
        """
        Future defects as positive closure entries.

        Args:
            x (Mcs | Cluster | iterable of Mcs): For an MCS every F-entry it
                contains; for a plain set the union over members; for a
                Cluster the F-entries whose argument no member contains.
        """
        return self._entries(
            self._dispatch_defects(x, self.mcs_future_defects, self.cluster_future_defects)
        )

    def past_defects(self, x) -> frozenset:
        return self._entries(
            self._dispatch_defects(x, self.mcs_past_defects, self.cluster_past_defects)
        )

    def _union_of(self, target) -> int:
        if isinstance(target, Cluster):
            return self.cluster_union[target.index]
        if isinstance(target, Mcs):
            return target.bits
        return self.union_bits(t.index if isinstance(t, Mcs) else t for t in target)

    def passed_up(self, entry: int, target) -> bool:
        """True iff psi or F psi (entry = F psi) belongs to some member of ``target``."""
        return bool((self.future_outlet(self._union_of(target)) >> (entry >> 1)) & 1)

    def passed_down(self, entry: int, target) -> bool:
        return bool((self.past_outlet(self._union_of(target)) >> (entry >> 1)) & 1)

    # ------------------------------------------------------------ interpolant

    def interpolant(self, low: int, high: int) -> frozenset:
        """
        MCS m with low <= m <= high whose future defects pass up to ``high``
        and whose past defects pass down to ``low``.
        """
        key = (low, high)
        if key not in self._interpolants:
            result = []
            if self.cluster_leq(low, high):
                up = self.future_outlet(self.cluster_union[high])
                down = self.past_outlet(self.cluster_union[low])
                for m in range(len(self.mcs)):
                    if (
                        self.cluster_leq_mcs(low, m)
                        and self.mcs_leq_cluster(m, high)
                        and self.covered(self.mcs_future_defects(m), up)
                        and self.covered(self.mcs_past_defects(m), down)
                    ):
                        result.append(m)
            self._interpolants[key] = frozenset(result)
        return self._interpolants[key]

    # ------------------------------------------------------------ realizable

    def realizable_mcs(self) -> frozenset:
        """
        Greatest set of MCS that can label a point of a serial temporal model:
        every F psi needs a realizable n with m <~ n and psi in n (dually for
        P), and m needs a cluster with a realizable member above and below it.
        """
        if self._realizable is None:
            alive = np.ones(len(self.mcs), dtype=bool)
            changed = True
            while changed:
                changed = False
                cluster_alive = np.array(
                    [any(alive[m] for m in c.members) for c in self.clusters], dtype=bool
                )
                for m in np.flatnonzero(alive):
                    if not self._realizable_at(m, alive, cluster_alive):
                        alive[m] = False
                        changed = True
            self._realizable = frozenset(int(m) for m in np.flatnonzero(alive))
            logger.debug("%d of %d MCS realizable", len(self._realizable), len(self.mcs))
        return self._realizable

    def _realizable_at(self, m, alive, cluster_alive):
        if len(self.clusters) == 0:
            return False
        if not (self.mcs_leq_cluster_matrix[m] & cluster_alive).any():
            return False
        if not (self.cluster_leq_mcs_matrix[:, m] & cluster_alive).any():
            return False
        successors = alive & self.lesssim[m, :]
        for i, j in self.closure.future_nodes:
            if self.membership[m, i] and not (successors & self.membership[:, j]).any():
                return False
        predecessors = alive & self.lesssim[:, m]
        for i, j in self.closure.past_nodes:
            if self.membership[m, i] and not (predecessors & self.membership[:, j]).any():
                return False
        return True

    def realizable_clusters(self) -> frozenset:
        alive = self.realizable_mcs()
        return frozenset(c.index for c in self.clusters if c.members & alive)

    # ---------------------------------------------------------------- lookup

    def find_mcs(self, assignment: dict) -> int:
        """
        Id of the unique MCS agreeing with a partial assignment
        {subformula: truth value}.

        Raises:
            ValueError: If no MCS or more than one MCS matches.
        """
        matches = [
            m.index for m in self.mcs
            if all(
                bool((m.bits >> self.closure.index[f]) & 1) == value
                for f, value in assignment.items()
            )
        ]
        if len(matches) != 1:
            raise ValueError(f"{len(matches)} MCS match the assignment")
        return matches[0]

    def mcs_entries(self, m: int) -> list:
        """Sorted closure entries of an MCS."""
        bits = self.mcs[m].bits
        return [
            2 * i + (0 if (bits >> i) & 1 else 1)
            for i in range(self.closure.num_subformulas)
        ]

    def dump(self) -> str:
        """Line-oriented table of MCS (sorted entry indices) and clusters (bracketed id lists)."""
        lines = [f"# closure entries: {len(self.closure)}"]
        for i in range(self.closure.num_subformulas):
            lines.append(f"# {2 * i} = {pretty(self.closure.subformulas[i])}")
        lines.append(f"# mcs: {len(self.mcs)}")
        for m in self.mcs:
            marker = "" if self.reflexive[m.index] else " irreflexive"
            entries = " ".join(str(e) for e in self.mcs_entries(m.index))
            lines.append(f"m{m.index}: {entries}{marker}")
        lines.append(f"# clusters: {len(self.clusters)}")
        for c in self.clusters:
            above = [d.index for d in self.clusters if self.cluster_less(c.index, d.index)]
            members = ",".join(str(m) for m in sorted(c.members))
            lines.append(f"c{c.index}: [{members}] below [{','.join(map(str, above))}]")
        return "\n".join(lines)

    def __repr__(self):
        return f"ClosureContext({pretty(self.formula)!r})"

    def __str__(self):
        return (
            f"Closure Context:\n"
            f"  Formula: {pretty(self.formula)}\n"
            f"  Closure entries: {len(self.closure)}\n"
            f"  MCS: {len(self.mcs)}\n"
            f"  Clusters: {len(self.clusters)}\n"
        )
