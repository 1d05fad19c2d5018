import json

from src.Biboundary import trace_from_list, trace_to_list
from src.Derivation import Certificate
from src.Formula import Formula, pretty

SAT = "SAT"
UNSAT = "UNSAT"
VALID = "VALID"
NOT_VALID = "NOT-VALID"
BUDGET = "BUDGET"
ANSWERS = (SAT, UNSAT, VALID, NOT_VALID, BUDGET)


class Witness:
    def __init__(self, center: int, traces: dict, quadrants: dict, triangles: dict, certificate: Certificate):
        """
        Model description behind a SAT / NOT-VALID verdict.

        Parameters:
        - center (int): MCS id at the distinguished point.
        - traces (dict): Name -> BiTrace of the shared half-lines.
        - quadrants (dict): Name -> fabricated Biboundary.
        - triangles (dict): Name -> fabricated TriBiboundary (interval frames only).
        - certificate (Certificate): Derivations of every piece, roots named
          "quadrant <name>" and "triangle <name>".
        """
        self.center = center
        self.traces = dict(traces)
        self.quadrants = dict(quadrants)
        self.triangles = dict(triangles)
        self.certificate = certificate

    def to_dict(self) -> dict:
        context = self.certificate.context
        data = self.certificate.to_dict()
        roots = data["roots"]
        data["center"] = self.center
        data["traces"] = {name: trace_to_list(context, t) for name, t in sorted(self.traces.items())}
        data["quadrants"] = {name: roots[f"quadrant {name}"] for name in sorted(self.quadrants)}
        if self.triangles:
            data["triangles"] = {name: roots[f"triangle {name}"] for name in sorted(self.triangles)}
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, data: dict, budget=None) -> "Witness":
        """
        Raises:
            CertificateError: If the embedded certificate is malformed.
            KeyError, ValueError: If the witness fields are malformed.
        """
        certificate = Certificate.from_dict(data, budget)
        context = certificate.context
        traces = {name: trace_from_list(context, values) for name, values in data["traces"].items()}
        quadrants = {
            name: certificate.roots[f"quadrant {name}"].conclusion for name in data["quadrants"]
        }
        triangles = {
            name: certificate.roots[f"triangle {name}"].conclusion for name in data.get("triangles", {})
        }
        return cls(data["center"], traces, quadrants, triangles, certificate)


class Verdict:
    def __init__(
            self,
            answer: str,
            formula: Formula,
            frame: str,
            reflexive: bool,
            query: str,
            witness: Witness = None,
            stats: dict = None):
        """
        Outcome of a satisfiability or validity query.

        Parameters:
        - answer (str): One of SAT, UNSAT, VALID, NOT-VALID, BUDGET.
        - formula (Formula): The queried formula.
        - frame (str): "mink" or "hs".
        - reflexive (bool): Whether the reflexive closure of the frame was used.
        - query (str): "sat" or "valid".
        - witness (Witness): Present for SAT and NOT-VALID.
        - stats (dict): Counts gathered while deciding.
        """
        if answer not in ANSWERS:
            raise ValueError(f"Answer must be one of {ANSWERS}, got {answer!r}")
        self.answer = answer
        self.formula = formula
        self.frame = frame
        self.reflexive = reflexive
        self.query = query
        self.witness = witness
        self.stats = dict(stats or {})

    @property
    def decided(self) -> bool:
        return self.answer != BUDGET

    def report(self) -> str:
        """Human-readable summary, one fact per line."""
        frame = self.frame + ("-reflexive" if self.reflexive else "")
        lines = [
            "=== Temporal Decision Report ===",
            f"Formula: {pretty(self.formula)}",
            f"Frame: {frame}",
            f"Query: {self.query}",
            f"Verdict: {self.answer}",
        ]
        if self.witness is not None:
            lines.append(f"Witness center: m{self.witness.center}")
            for name, trace in sorted(self.witness.traces.items()):
                lines.append(f"Trace {name}: {trace}")
            for name, piece in sorted(self.witness.quadrants.items()):
                lines.append(f"Quadrant {name}: {piece}")
            for name, piece in sorted(self.witness.triangles.items()):
                lines.append(f"Triangle {name}: {piece}")
        lines.append("=== Statistics ===")
        for name, value in self.stats.items():
            lines.append(f"{name}: {value}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"Verdict({self.answer!r}, {pretty(self.formula)!r}, frame={self.frame!r})"

    def __str__(self):
        return self.answer
