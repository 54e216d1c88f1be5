"""Re-run every oracle into a temp dir and compare with the frozen fixtures."""
import subprocess
import sys
import tempfile
from pathlib import Path

ORACLES = {
    "bitpack_oracle.py": "golden_programs.json",
    "codec_oracle.py": "codec_vectors.json",
    "dock_oracle.py": "dock_fixtures.json",
    "fsm_oracle.py": "fsm_vectors.jsonl",
    "physics_oracle.py": "physics_reference.json",
}


def main(oracle_dir, fixture_dir):
    stale = []
    with tempfile.TemporaryDirectory() as tmp:
        for script, fixture in ORACLES.items():
            out = Path(tmp) / fixture
            subprocess.run([sys.executable, str(Path(oracle_dir) / script), str(out)], check=True)
            if out.read_bytes() != (Path(fixture_dir) / fixture).read_bytes():
                stale.append(fixture)
    for f in stale:
        print(f"stale fixture: {f}")
    return 1 if stale else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
