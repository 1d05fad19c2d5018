"""Abstract syntax, parser and syntactic transformations of the basic temporal language."""

import re
from dataclasses import dataclass
from functools import lru_cache


class Formula:
    """
    Base class of the six primitive node kinds.

    Stored formulas are always desugared: And, Implies, G, H and false only
    exist in the surface grammar and are rewritten by the parser (or by the
    helper constructors below) into Not, Or, F, P and true.
    """

    def children(self):
        return ()

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    child: Formula

    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class F(Formula):
    child: Formula

    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class P(Formula):
    child: Formula

    def children(self):
        return (self.child,)


TRUE = Top()


def conj(left: Formula, right: Formula) -> Formula:
    return Not(Or(Not(left), Not(right)))


def implies(left: Formula, right: Formula) -> Formula:
    return Or(Not(left), right)


def always_future(child: Formula) -> Formula:
    return Not(F(Not(child)))


def always_past(child: Formula) -> Formula:
    return Not(P(Not(child)))


def falsum() -> Formula:
    return Not(TRUE)


def negate(formula: Formula) -> Formula:
    """Negation without collapsing double negations (structure is preserved)."""
    return Not(formula)


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, expected: str):
        """
        Syntax error raised by the formula parser.

        Parameters:
        - message (str): Human readable description.
        - offset (int): Byte offset (UTF-8) of the offending token in the input.
        - expected (str): Description of the tokens that would have been accepted.
        """
        super().__init__(f"{message} at byte {offset} (expected {expected})")
        self.offset = offset
        self.expected = expected


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<op>[|&~()])|(?P<modal>[FPGH])(?![A-Za-z0-9_])"
    r"|(?P<word>[a-z][a-z0-9_]*)|(?P<modal_prefix>[FPGH]))"
)


class FormulaParser:
    """
    Recursive descent parser for the grammar

        formula := impl ; impl := or ("->" impl)? ; or := and ("|" and)* ;
        and := unary ("&" unary)* ;
        unary := "~" unary | "F" unary | "P" unary | "G" unary | "H" unary | atom ;
        atom := "true" | "false" | ident | "(" formula ")"
    """

    def __init__(self, text: str):
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _byte_offset(self, char_offset: int) -> int:
        return len(self.text[:char_offset].encode("utf-8"))

    def _tokenize(self, text):
        tokens = []
        index = 0
        while index < len(text):
            if text[index].isspace():
                index += 1
                continue
            match = _TOKEN_RE.match(text, index)
            if match is None or match.end() == index:
                raise ParseError(
                    f"Unexpected character {text[index]!r}",
                    self._byte_offset(index),
                    "an operator, a parenthesis, 'true', 'false' or an identifier",
                )
            start = match.start(match.lastgroup)
            tokens.append((match.group(match.lastgroup), start))
            index = match.end()
        tokens.append((None, len(text)))
        return tokens

    def _peek(self):
        return self.tokens[self.pos][0]

    def _offset(self):
        return self._byte_offset(self.tokens[self.pos][1])

    def _consume(self, expected=None):
        token = self._peek()
        if expected is not None and token != expected:
            found = "end of input" if token is None else repr(token)
            raise ParseError(f"Found {found}", self._offset(), repr(expected))
        self.pos += 1
        return token

    def parse(self) -> Formula:
        formula = self._parse_impl()
        if self._peek() is not None:
            raise ParseError(
                f"Unexpected token {self._peek()!r}",
                self._offset(),
                "'->', '|', '&' or end of input",
            )
        return formula

    def _parse_impl(self):
        left = self._parse_or()
        if self._peek() == "->":
            self._consume("->")
            return implies(left, self._parse_impl())
        return left

    def _parse_or(self):
        formula = self._parse_and()
        while self._peek() == "|":
            self._consume("|")
            formula = Or(formula, self._parse_and())
        return formula

    def _parse_and(self):
        formula = self._parse_unary()
        while self._peek() == "&":
            self._consume("&")
            formula = conj(formula, self._parse_unary())
        return formula

    def _parse_unary(self):
        token = self._peek()
        if token == "~":
            self._consume()
            return Not(self._parse_unary())
        if token == "F":
            self._consume()
            return F(self._parse_unary())
        if token == "P":
            self._consume()
            return P(self._parse_unary())
        if token == "G":
            self._consume()
            return always_future(self._parse_unary())
        if token == "H":
            self._consume()
            return always_past(self._parse_unary())
        return self._parse_atom()

    def _parse_atom(self):
        token = self._peek()
        if token == "(":
            self._consume("(")
            formula = self._parse_impl()
            self._consume(")")
            return formula
        if token == "true":
            self._consume()
            return TRUE
        if token == "false":
            self._consume()
            return falsum()
        if token is not None and re.fullmatch(r"[a-z][a-z0-9_]*", token):
            self._consume()
            return Var(token)
        found = "end of input" if token is None else repr(token)
        raise ParseError(
            f"Found {found}",
            self._offset(),
            "'~', 'F', 'P', 'G', 'H', '(', 'true', 'false' or an identifier",
        )


def parse(text: str) -> Formula:
    """
    Parse a formula of the surface grammar into a desugared AST.

    Parameters:
    - text (str): Formula text, e.g. "F F p -> F p".

    Returns:
    - Formula: The desugared abstract syntax tree.
    """
    return FormulaParser(text).parse()


def pretty(formula: Formula) -> str:
    """Print a desugared formula so that parse(pretty(phi)) == phi."""
    if isinstance(formula, Var):
        return formula.name
    if isinstance(formula, Top):
        return "true"
    if isinstance(formula, Or):
        return f"({pretty(formula.left)} | {pretty(formula.right)})"
    prefix = {Not: "~", F: "F ", P: "P "}[type(formula)]
    return prefix + pretty(formula.child)


@lru_cache(maxsize=None)
def reflexive_rewrite(formula: Formula) -> Formula:
    """
    Translate a formula read over a reflexive frame into one read over its
    irreflexive kernel: every F psi becomes psi' | F psi' bottom-up, where
    psi' is the rewritten child, and dually for P.
    """
    if isinstance(formula, (Var, Top)):
        return formula
    if isinstance(formula, Not):
        return Not(reflexive_rewrite(formula.child))
    if isinstance(formula, Or):
        return Or(reflexive_rewrite(formula.left), reflexive_rewrite(formula.right))
    child = reflexive_rewrite(formula.child)
    return Or(child, type(formula)(child))


@lru_cache(maxsize=None)
def temporal_mirror(formula: Formula) -> Formula:
    """Swap F and P throughout."""
    if isinstance(formula, (Var, Top)):
        return formula
    if isinstance(formula, Not):
        return Not(temporal_mirror(formula.child))
    if isinstance(formula, Or):
        return Or(temporal_mirror(formula.left), temporal_mirror(formula.right))
    if isinstance(formula, F):
        return P(temporal_mirror(formula.child))
    return F(temporal_mirror(formula.child))


def size(formula: Formula) -> int:
    """Node count of the desugared tree (shared subtrees counted each time)."""
    return 1 + sum(size(child) for child in formula.children())


def variables(formula: Formula) -> list:
    """Proposition letters in order of first occurrence."""
    seen = []
    stack = [formula]
    while stack:
        node = stack.pop()
        if isinstance(node, Var) and node.name not in seen:
            seen.append(node.name)
        stack.extend(reversed(node.children()))
    return seen
