"""Smoke test for the Python extension.

Builds the extension with cargo, copies the shared library next to a temporary
module path and exercises solve, synthesize and simulate on a small graph.
Run with `python3 python/smoke_test.py` or under pytest.
"""

import importlib
import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

GRAPH = {
    "vertices": ["a", "b", "c", "d", "e", "f", "g"],
    "initial": "a",
    "edges": [["a", "b"], ["a", "e"], ["b", "c"], ["b", "d"], ["e", "f"], ["e", "g"]],
}
BLUE = {"kind": "reach", "set": ["c", "d", "g"]}
RED = {"kind": "reach", "set": ["d", "f"]}


def load_extension():
    subprocess.run(
        ["cargo", "build", "-q", "-p", "bidsched-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "debug" / "libbidsched.so"
    staging = Path(tempfile.mkdtemp())
    shutil.copy(lib, staging / "bidsched.so")
    sys.path.insert(0, str(staging))
    return importlib.import_module("bidsched")


def test_round_trip():
    bs = load_extension()
    graph = json.dumps(GRAPH)

    blue = json.loads(bs.solve(graph, json.dumps(BLUE)))
    assert blue["values"]["a"] == "1/4"
    red = json.loads(bs.solve(graph, json.dumps(RED), iterative=True))
    assert red["values"]["a"] == "1/2"

    outcome = json.loads(bs.synthesize(graph, json.dumps([BLUE, RED])))
    assert outcome["status"] == "success", outcome

    tender_1, tender_2 = outcome["tenders"]
    split = bs.default_split(outcome["threshold_1"], outcome["threshold_2"])
    summary, trace = bs.simulate(
        graph,
        json.dumps(tender_1),
        json.dumps(tender_2),
        split,
        70,
        json.dumps([BLUE, RED]),
    )
    summary = json.loads(summary)
    assert summary["final_vertex"] == "d"
    assert [v["status"] for v in summary["verdicts"]] == ["satisfied", "satisfied"]
    assert len(trace.splitlines()) == summary["steps"]

    try:
        bs.solve("{}", json.dumps(BLUE))
    except ValueError:
        pass
    else:
        raise AssertionError("malformed graph accepted")


if __name__ == "__main__":
    test_round_trip()
    print("python smoke test: ok")
