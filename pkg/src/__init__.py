"""Small output helpers shared by the command line and the tests."""


def save_verdict_report(verdict, output_file):
    """
    Save a verdict as a text report.

    Parameters:
        verdict (Verdict): The decided (or budget-limited) verdict
        output_file (Path): Path to save the report
    """
    # Ensure the directory exists
    output_file.parent.mkdir(parents=True, exist_ok=True)
    with open(output_file, "w", encoding="utf-8") as f:
        f.write(verdict.report())


def save_witness(witness, output_file):
    """
    Save a witness as JSON accepted by the certificate checker.

    Parameters:
        witness (Witness): Center, shared traces, pieces and derivations
        output_file (Path): Path to save the JSON document
    """
    output_file.parent.mkdir(parents=True, exist_ok=True)
    with open(output_file, "w", encoding="utf-8") as f:
        f.write(witness.dumps())
        f.write("\n")
