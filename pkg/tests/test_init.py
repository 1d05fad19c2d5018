from src import save_verdict_report, save_witness
import sys
from pathlib import Path
import tempfile
import json
from unittest.mock import MagicMock

# Add src directory to Python path
sys.path.insert(0, str(Path(__file__).parent.parent))


def test_save_verdict_report():
    """Test the save_verdict_report function that writes a verdict report to a file."""
    # Create mock verdict
    verdict = MagicMock()
    verdict.report.return_value = "=== Temporal Decision Report ===\nVerdict: SAT\n"

    # Use a temporary directory for the test
    with tempfile.TemporaryDirectory() as temp_dir:
        # Nested folder that does not exist yet
        output_file = Path(temp_dir) / "reports" / "verdict.txt"

        save_verdict_report(verdict, output_file)

        assert output_file.exists(), "Report file was not created"
        content = output_file.read_text()
        assert "=== Temporal Decision Report ===" in content
        assert "Verdict: SAT" in content
        assert verdict.report.call_count == 1


def test_save_witness():
    """Test the save_witness function that writes a witness as JSON."""
    witness = MagicMock()
    witness.dumps.return_value = json.dumps({"center": 0, "roots": {}})

    with tempfile.TemporaryDirectory() as temp_dir:
        output_file = Path(temp_dir) / "out" / "witness.json"

        save_witness(witness, output_file)

        assert output_file.exists(), "Witness file was not created"
        content = output_file.read_text()
        assert content.endswith("\n")
        assert json.loads(content) == {"center": 0, "roots": {}}


def test_overwrites_existing_files():
    """Test that saving twice keeps only the latest report."""
    first, second = MagicMock(), MagicMock()
    first.report.return_value = "first\n"
    second.report.return_value = "second\n"

    with tempfile.TemporaryDirectory() as temp_dir:
        output_file = Path(temp_dir) / "verdict.txt"
        save_verdict_report(first, output_file)
        save_verdict_report(second, output_file)
        assert output_file.read_text() == "second\n"
