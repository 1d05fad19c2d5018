from src.Biboundary import Biboundary, BiboundaryValidator


class JoinOperator:
    def __init__(self, validator: BiboundaryValidator):
        """
        Vertical and horizontal joins of biboundaries and their inverses.

        Parameters:
        - validator (BiboundaryValidator): Validity checks and bi-trace catalog.
        """
        self.validator = validator
        self.context = validator.context
        self.catalog = validator.catalog

    def join_side(self, lower_trace, lower_corner, upper_trace, upper_corner):
        """
        Composite of one side of a vertical join: (ok, trace). Both pieces
        undefined gives (True, None); both defined needs matching corners and
        a defined concatenation.
        """
        if lower_trace is None and upper_trace is None:
            return True, None
        if lower_trace is None or upper_trace is None or lower_corner != upper_corner:
            return False, None
        joined = self.catalog.concat(lower_trace, lower_corner, upper_trace)
        return joined is not None, joined

    def vjoin(self, d1: Biboundary, d2: Biboundary):
        """
        Stack ``d2`` on top of ``d1`` along d1(N) = d2(S).

        Returns:
            Biboundary or None: The composite when it is defined and valid.
        """
        if d1.N is None or d1.N != d2.S:
            return None
        ok, west = self.join_side(d1.W, d1.l, d2.W, d2.b)
        if not ok:
            return None
        ok, east = self.join_side(d1.E, d1.t, d2.E, d2.r)
        if not ok:
            return None
        composite = Biboundary(
            minus=d1.minus, plus=d2.plus,
            N=d2.N, S=d1.S, E=east, W=west,
            b=d1.b, r=d1.r, l=d2.l, t=d2.t,
        )
        if not self.validator.validate_biboundary(composite):
            return None
        return composite

    def hjoin(self, d1: Biboundary, d2: Biboundary):
        """Place ``d2`` east of ``d1`` along d1(E) = d2(W)."""
        joined = self.vjoin(d1.diagonal_dual(), d2.diagonal_dual())
        return None if joined is None else joined.diagonal_dual()

    def edge_splits(self, trace):
        if trace is None:
            return [(None, None, None)]
        return self.catalog.splits(trace)

    def vertical_splits(self, d: Biboundary, shared_filter=None):
        """
        Yield every pair (d1, d2) of valid biboundaries with vjoin(d1, d2) == d.

        The shared edge X ranges over all bi-traces; then d1(+) and d2(-)
        are forced to the final lower and initial upper cluster of X, and
        the west and east sides of d are cut at a transition or at a pair.
        ``shared_filter`` restricts the bi-traces tried for X.
        """
        for shared in self.catalog.all():
            if shared_filter is not None and not shared_filter(shared):
                continue
            for w1, a, w2 in self.edge_splits(d.W):
                for e1, a2, e2 in self.edge_splits(d.E):
                    d1 = Biboundary(
                        minus=d.minus, plus=shared.lower[-1],
                        N=shared, S=d.S, E=e1, W=w1,
                        b=d.b, r=d.r,
                        l=a if w1 is not None else None,
                        t=a2 if e1 is not None else None,
                    )
                    if not self.validator.validate_biboundary(d1):
                        continue
                    d2 = Biboundary(
                        minus=shared.upper[0], plus=d.plus,
                        N=d.N, S=shared, E=e2, W=w2,
                        l=d.l, t=d.t,
                        b=a if w2 is not None else None,
                        r=a2 if e2 is not None else None,
                    )
                    if not self.validator.validate_biboundary(d2):
                        continue
                    if self.vjoin(d1, d2) == d:
                        yield d1, d2

    def horizontal_splits(self, d: Biboundary, shared_filter=None):
        """Yield every pair (d1, d2) with hjoin(d1, d2) == d (d1 west, d2 east)."""
        for lower, upper in self.vertical_splits(d.diagonal_dual(), shared_filter):
            yield lower.diagonal_dual(), upper.diagonal_dual()
