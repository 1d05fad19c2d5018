from src.Formula import Formula, Var, Top, Not, Or, F, P, pretty


class ClosureTable:
    def __init__(self, formula: Formula):
        """
        Closure of a desugared formula: every distinct subformula with a
        positive and a negated entry.

        Subformulas are numbered in post-order of first occurrence, so every
        child has a smaller index than its parent. Entry 2*i is subformula i,
        entry 2*i + 1 is its negation; negation on entries is ``e ^ 1``.

        Parameters:
        - formula (Formula): The desugared root formula.
        """
        self.formula = formula
        self.subformulas = []
        self.index = {}
        self._collect(formula)
        self.root = self.index[formula]

        self.child_index = []
        for node in self.subformulas:
            self.child_index.append(tuple(self.index[c] for c in node.children()))

        # (node index, argument index) for every F and P subformula
        self.future_nodes = [
            (i, self.child_index[i][0])
            for i, node in enumerate(self.subformulas)
            if isinstance(node, F)
        ]
        self.past_nodes = [
            (i, self.child_index[i][0])
            for i, node in enumerate(self.subformulas)
            if isinstance(node, P)
        ]
        # Var, F and P nodes take free truth values; the rest are computed
        self.free_nodes = [
            i
            for i, node in enumerate(self.subformulas)
            if isinstance(node, (Var, F, P))
        ]

    def _collect(self, root):
        stack = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if node in self.index:
                continue
            if expanded:
                self.index[node] = len(self.subformulas)
                self.subformulas.append(node)
                continue
            stack.append((node, True))
            for child in reversed(node.children()):
                if child not in self.index:
                    stack.append((child, False))

    def __len__(self):
        return 2 * len(self.subformulas)

    @property
    def num_subformulas(self):
        return len(self.subformulas)

    def entry(self, formula: Formula, positive: bool = True) -> int:
        """Entry index of ``formula`` (or of its negation)."""
        return 2 * self.index[formula] + (0 if positive else 1)

    @staticmethod
    def negate(entry: int) -> int:
        return entry ^ 1

    @staticmethod
    def subformula_of(entry: int) -> int:
        return entry >> 1

    @staticmethod
    def is_positive(entry: int) -> bool:
        return entry & 1 == 0

    def describe(self, entry: int) -> str:
        text = pretty(self.subformulas[entry >> 1])
        return text if self.is_positive(entry) else "~" + text

    def evaluate_bits(self, free_values: dict) -> int:
        """
        Complete a truth assignment of the free nodes (Var, F, P) to a bit
        vector over all subformulas, propagating Top, Not and Or bottom-up.
        """
        bits = 0
        for i, node in enumerate(self.subformulas):
            if isinstance(node, Top):
                value = True
            elif isinstance(node, Not):
                value = not (bits >> self.child_index[i][0]) & 1
            elif isinstance(node, Or):
                left, right = self.child_index[i]
                value = bool((bits >> left) & 1 or (bits >> right) & 1)
            else:
                value = free_values[i]
            if value:
                bits |= 1 << i
        return bits

    def __repr__(self):
        return f"ClosureTable({pretty(self.formula)!r}, entries={len(self)})"

    def __str__(self):
        lines = [f"Closure of {pretty(self.formula)}:"]
        for i, node in enumerate(self.subformulas):
            lines.append(f"  [{2 * i}] {pretty(node)}    [{2 * i + 1}] ~{pretty(node)}")
        return "\n".join(lines)


def closure(formula: Formula) -> ClosureTable:
    return ClosureTable(formula)
