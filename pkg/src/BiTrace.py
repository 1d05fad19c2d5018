import logging
from dataclasses import dataclass

from src.ClosureContext import ClosureContext

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BiTrace:
    """
    Record of one closed edge: cluster pairs (lower[i], upper[i]) for
    i = 0..n and transition MCS transitions[i-1] between pair i-1 and pair i.
    Lower clusters lie on the south/west side of the edge, upper clusters on
    the north/east side.
    """

    lower: tuple
    upper: tuple
    transitions: tuple = ()

    @classmethod
    def pair(cls, low: int, high: int) -> "BiTrace":
        return cls((low,), (high,), ())

    @classmethod
    def from_interleaved(cls, values) -> "BiTrace":
        values = list(values)
        if len(values) < 2 or (len(values) - 2) % 3 != 0:
            raise ValueError(f"Not an interleaved bi-trace: {values}")
        lower = tuple(values[0::3])
        upper = tuple(values[1::3])
        transitions = tuple(values[2::3])
        return cls(lower, upper, transitions)

    @property
    def length(self) -> int:
        return len(self.transitions)

    @property
    def initial(self) -> tuple:
        return (self.lower[0], self.upper[0])

    @property
    def final(self) -> tuple:
        return (self.lower[-1], self.upper[-1])

    def pairs(self):
        return list(zip(self.lower, self.upper))

    def interleaved(self) -> list:
        values = [self.lower[0], self.upper[0]]
        for b, low, high in zip(self.transitions, self.lower[1:], self.upper[1:]):
            values.extend([b, low, high])
        return values

    def key(self) -> tuple:
        return (self.length, tuple(self.interleaved()))

    def __str__(self):
        return "(" + ",".join(str(v) for v in self.interleaved()) + ")"


class BiTraceCatalog:
    def __init__(self, context: ClosureContext):
        """
        Validation, concatenation, splitting and enumeration of the bi-traces
        of one closure context.

        Parameters:
        - context (ClosureContext): Supplies clusters, order and interpolants.
        """
        self.context = context
        self._valid = {}
        self._all = None
        self._by_initial_upper = None
        self._by_final_lower = None

    def _pair_ok(self, low, high):
        return self.context.cluster_leq(low, high) and bool(self.context.interpolant(low, high))

    def _transition_ok(self, low_before, b, high_after):
        ctx = self.context
        return (
            ctx.cluster_leq_mcs(low_before, b)
            and ctx.mcs_leq_cluster(b, high_after)
            and ctx.covered(ctx.mcs_future_defects(b), ctx.future_outlet(ctx.cluster_union[high_after]))
            and ctx.covered(ctx.mcs_past_defects(b), ctx.past_outlet(ctx.cluster_union[low_before]))
        )

    def _step_ok(self, low, high, next_low, next_high):
        ctx = self.context
        return (
            ctx.cluster_leq(low, next_low)
            and ctx.cluster_leq(high, next_high)
            and (ctx.cluster_less(low, next_low) or ctx.cluster_less(high, next_high))
        )

    def validate(self, trace: BiTrace) -> bool:
        """All bi-trace constraints: pairs ordered with nonempty interpolant, strict growth, transitions in between."""
        cached = self._valid.get(trace)
        if cached is not None:
            return cached
        ok = len(trace.lower) == len(trace.upper) == len(trace.transitions) + 1
        k = len(self.context.clusters)
        m = len(self.context.mcs)
        if ok:
            ok = all(0 <= c < k for c in trace.lower + trace.upper) and all(
                0 <= b < m for b in trace.transitions
            )
        if ok:
            ok = all(self._pair_ok(low, high) for low, high in trace.pairs())
        if ok:
            for i, b in enumerate(trace.transitions):
                if not (
                    self._step_ok(trace.lower[i], trace.upper[i], trace.lower[i + 1], trace.upper[i + 1])
                    and self._transition_ok(trace.lower[i], b, trace.upper[i + 1])
                ):
                    ok = False
                    break
        self._valid[trace] = ok
        return ok

    def concat(self, first: BiTrace, a: int, second: BiTrace):
        """
        ``first + a + second``: the plain interleaving if it is a bi-trace,
        otherwise the merge at a shared pair whose interpolant contains a,
        otherwise None.
        """
        joined = BiTrace(
            first.lower + second.lower,
            first.upper + second.upper,
            first.transitions + (a,) + second.transitions,
        )
        if self.validate(joined):
            return joined
        if first.final == second.initial and a in self.context.interpolant(*first.final):
            merged = BiTrace(
                first.lower + second.lower[1:],
                first.upper + second.upper[1:],
                first.transitions + second.transitions,
            )
            if self.validate(merged):
                return merged
        return None

    def splits(self, trace: BiTrace) -> list:
        """Every (first, a, second) with concat(first, a, second) == trace."""
        result = []
        n = trace.length
        for k in range(1, n + 1):
            first = BiTrace(trace.lower[:k], trace.upper[:k], trace.transitions[:k - 1])
            second = BiTrace(trace.lower[k:], trace.upper[k:], trace.transitions[k:])
            result.append((first, trace.transitions[k - 1], second))
        for k in range(n + 1):
            first = BiTrace(trace.lower[:k + 1], trace.upper[:k + 1], trace.transitions[:k])
            second = BiTrace(trace.lower[k:], trace.upper[k:], trace.transitions[k:])
            for a in sorted(self.context.interpolant(trace.lower[k], trace.upper[k])):
                result.append((first, a, second))
        return result

    def all(self) -> list:
        """Every bi-trace of the context, shortest first."""
        if self._all is None:
            ctx = self.context
            k = len(ctx.clusters)
            pairs = [(lo, hi) for lo in range(k) for hi in range(k) if self._pair_ok(lo, hi)]
            found = []

            def extend(trace):
                ctx.budget.charge("enumerated")
                found.append(trace)
                low, high = trace.final
                for next_low, next_high in pairs:
                    if not self._step_ok(low, high, next_low, next_high):
                        continue
                    for b in range(len(ctx.mcs)):
                        if self._transition_ok(low, b, next_high):
                            extend(BiTrace(
                                trace.lower + (next_low,),
                                trace.upper + (next_high,),
                                trace.transitions + (b,),
                            ))

            for low, high in pairs:
                extend(BiTrace.pair(low, high))
            found.sort(key=BiTrace.key)
            for trace in found:
                self._valid[trace] = True
            self._all = found
            self._by_initial_upper = {}
            self._by_final_lower = {}
            for trace in found:
                self._by_initial_upper.setdefault(trace.upper[0], []).append(trace)
                self._by_final_lower.setdefault(trace.lower[-1], []).append(trace)
            logger.info("Enumerated %d bi-traces over %d clusters", len(found), k)
        return self._all

    def enumerate(
            self,
            initial=None,
            final=None,
            initial_upper=None,
            final_lower=None,
            upper_constant=None,
            lower_constant=None,
            max_length=None) -> list:
        """
        Bi-traces satisfying every given filter.

        Args:
            initial, final (tuple): Required first / last cluster pair.
            initial_upper (int): Required first upper cluster.
            final_lower (int): Required last lower cluster.
            upper_constant, lower_constant (int): Every upper / lower cluster
                must equal this cluster.
            max_length (int): Maximal number of transitions.

        Returns:
            list: Matching bi-traces, shortest first.
        """
        traces = self.all()
        if initial_upper is not None:
            traces = self._by_initial_upper.get(initial_upper, [])
        elif final_lower is not None:
            traces = self._by_final_lower.get(final_lower, [])
        result = []
        for trace in traces:
            if initial is not None and trace.initial != tuple(initial):
                continue
            if final is not None and trace.final != tuple(final):
                continue
            if initial_upper is not None and trace.upper[0] != initial_upper:
                continue
            if final_lower is not None and trace.lower[-1] != final_lower:
                continue
            if upper_constant is not None and any(c != upper_constant for c in trace.upper):
                continue
            if lower_constant is not None and any(c != lower_constant for c in trace.lower):
                continue
            if max_length is not None and trace.length > max_length:
                continue
            result.append(trace)
        return result
