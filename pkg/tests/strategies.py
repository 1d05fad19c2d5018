"""Random formulas and K_t reference answers shared by the decider property tests."""

from src.ClosureTable import closure
from src.Formula import F, Not, Or, P, Top, Var
from src.KtTableau import kt_sat
from hypothesis import strategies as st

LETTERS = ("p", "q", "r")


def sized_formulas(size: int, letters=LETTERS):
    """Strategy producing formulas with exactly ``size`` primitive connectives."""
    if size == 0:
        return st.one_of(st.sampled_from([Var(x) for x in letters]), st.just(Top()))
    unary = st.sampled_from([Not, F, P]).flatmap(lambda op: sized_formulas(size - 1, letters).map(op))
    binary = st.integers(min_value=0, max_value=size - 1).flatmap(
        lambda left: st.tuples(
            sized_formulas(left, letters), sized_formulas(size - 1 - left, letters)
        ).map(lambda pair: Or(*pair))
    )
    return st.one_of(unary, binary)


def formulas(max_connectives: int = 6, letters=LETTERS):
    """Strategy producing formulas over ``letters`` with at most ``max_connectives`` connectives."""
    return st.integers(min_value=0, max_value=max_connectives).flatmap(
        lambda size: sized_formulas(size, letters)
    )


def kt_satisfiable(formula) -> bool:
    table = closure(formula)
    return kt_sat(table, [2 * table.root])


def kt_valid(formula) -> bool:
    return not kt_satisfiable(Not(formula))
