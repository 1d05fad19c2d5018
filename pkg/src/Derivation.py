"""Derivation trees of fabricated biboundaries and the certificate format built on them."""

import json
import logging
from dataclasses import dataclass, field

from src.Biboundary import Biboundary
from src.ClosureContext import ClosureContext
from src.FabricationRules import FabricationRules, TRIANGULAR_RULES
from src.Formula import parse, pretty, reflexive_rewrite
from src.TriangularBiboundary import TriBiboundary

logger = logging.getLogger(__name__)

CERT_VERSION = 1
FRAMES = ("mink", "hs")


class CertificateError(ValueError):
    """Malformed certificate document."""


@dataclass(frozen=True, eq=False)
class Derivation:
    """
    One rule application: ``conclusion`` follows from the conclusions of
    ``premises`` by ``rule``; ``aux`` holds the MCS ids of a shuffle.
    Subtrees may be shared, so nodes compare by identity.
    """

    rule: str
    conclusion: object
    premises: tuple = ()
    aux: tuple = field(default=())

    def nodes(self) -> list:
        """Every distinct node, premises before the nodes using them."""
        order, seen = [], set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if id(node) in seen:
                continue
            if expanded:
                seen.add(id(node))
                order.append(node)
                continue
            stack.append((node, True))
            for premise in reversed(node.premises):
                if id(premise) not in seen:
                    stack.append((premise, False))
        return order

    def height(self) -> int:
        heights = {}
        for node in self.nodes():
            heights[id(node)] = 1 + max((heights[id(p)] for p in node.premises), default=0)
        return heights[id(self)]

    def __str__(self):
        return f"{self.rule}: {self.conclusion} <- {len(self.premises)} premises"


def check_derivation(derivation: Derivation, rules: FabricationRules):
    """
    Re-check every rule application of a derivation.

    Args:
        derivation (Derivation): Root node.
        rules (FabricationRules): Constructors of the closure context.

    Returns:
        tuple or None: None if accepted, otherwise the path of premise
        positions from the root to the first failing node.
    """
    verdicts = {}

    def visit(node, path):
        known = verdicts.get(id(node))
        if known is not None:
            return None if known else path
        for position, premise in enumerate(node.premises):
            failure = visit(premise, path + (position,))
            if failure is not None:
                verdicts[id(node)] = False
                return failure
        ok = rules.check_step(
            node.rule, node.conclusion, [p.conclusion for p in node.premises], node.aux
        )
        verdicts[id(node)] = ok
        if not ok:
            logger.debug("Rejected %s at %s", node, path)
        return None if ok else path

    return visit(derivation, ())


def context_for(formula_text: str, reflexive: bool, budget=None) -> ClosureContext:
    """Closure context of a certificate header: parse, then rewrite for reflexive frames."""
    formula = parse(formula_text)
    if reflexive:
        formula = reflexive_rewrite(formula)
    return ClosureContext(formula, budget)


class Certificate:
    def __init__(self, formula, frame: str, reflexive: bool, roots: dict, context: ClosureContext):
        """
        Self-contained proof that some biboundaries are fabricated.

        Parameters:
        - formula (Formula): Formula the closure context is built from,
          before any reflexive rewrite.
        - frame (str): "mink" or "hs".
        - reflexive (bool): Whether the reflexive rewrite is applied.
        - roots (dict): Name -> Derivation.
        - context (ClosureContext): Context the MCS and cluster ids refer to.
        """
        if frame not in FRAMES:
            raise ValueError(f"Frame must be one of {FRAMES}, got {frame!r}")
        self.formula = formula
        self.frame = frame
        self.reflexive = reflexive
        self.roots = dict(roots)
        self.context = context

    def header(self) -> dict:
        return {
            "cert-version": CERT_VERSION,
            "formula": pretty(self.formula),
            "frame": self.frame,
            "reflexive": self.reflexive,
        }

    def to_dict(self) -> dict:
        """Header, a node table in dependency order and the root indices."""
        index, nodes = {}, []
        for root in self.roots.values():
            for node in root.nodes():
                if id(node) in index:
                    continue
                index[id(node)] = len(nodes)
                nodes.append({
                    "rule": node.rule,
                    "conclusion": node.conclusion.to_dict(self.context),
                    "premises": [index[id(p)] for p in node.premises],
                    "aux": list(node.aux),
                })
        data = self.header()
        data["nodes"] = nodes
        data["roots"] = {name: index[id(root)] for name, root in self.roots.items()}
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, data: dict, budget=None) -> "Certificate":
        """
        Rebuild a certificate, including its closure context, from JSON data.

        Raises:
            CertificateError: On a wrong version or a malformed document.
        """
        if not isinstance(data, dict):
            raise CertificateError("Certificate must be a JSON object")
        if data.get("cert-version") != CERT_VERSION:
            raise CertificateError(f"Unsupported cert-version {data.get('cert-version')!r}")
        try:
            frame = data["frame"]
            reflexive = bool(data["reflexive"])
            context = context_for(data["formula"], reflexive, budget)
            built = []
            for position, entry in enumerate(data["nodes"]):
                rule = entry["rule"]
                kind = TriBiboundary if rule in TRIANGULAR_RULES else Biboundary
                premise_ids = entry.get("premises", [])
                if any(not isinstance(i, int) or not 0 <= i < position for i in premise_ids):
                    raise CertificateError(f"Node {position} refers to a later or unknown node")
                built.append(Derivation(
                    rule=rule,
                    conclusion=kind.from_dict(entry["conclusion"], context),
                    premises=tuple(built[i] for i in premise_ids),
                    aux=tuple(entry.get("aux", [])),
                ))
            roots = {name: built[i] for name, i in data["roots"].items()}
            return cls(parse(data["formula"]), frame, reflexive, roots, context)
        except CertificateError:
            raise
        except (KeyError, TypeError, ValueError, IndexError) as error:
            raise CertificateError(f"Malformed certificate: {error}") from error

    @classmethod
    def loads(cls, text: str, budget=None) -> "Certificate":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as error:
            raise CertificateError(f"Certificate is not JSON: {error}") from error
        return cls.from_dict(data, budget)

    def check(self, rules: FabricationRules = None):
        """
        Check every root.

        Returns:
            tuple or None: None if accepted, otherwise (root name, failing path).
        """
        rules = rules if rules is not None else FabricationRules(self.context)
        for name in sorted(self.roots):
            failure = check_derivation(self.roots[name], rules)
            if failure is not None:
                logger.info("Certificate root %s rejected at %s", name, list(failure))
                return name, failure
        return None

    def __repr__(self):
        return f"Certificate({pretty(self.formula)!r}, frame={self.frame!r}, roots={sorted(self.roots)})"
