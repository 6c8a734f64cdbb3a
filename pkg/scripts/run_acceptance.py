import sys
import os
import time

# Add parent dir to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.errors import LemmaFailure
from app.services.decomposition import TorsoKind, build_tree, verify_uniqueness
from app.services.fixtures import corpus, k4_minus_edge
from app.services.lemma_suite import run_corpus
from app.services.matroid_kernel import is_connected
from app.services.report_engine import decompose


def check_k4_minus_edge():
    start = time.perf_counter()
    tree = build_tree(k4_minus_edge())
    elapsed = time.perf_counter() - start
    kinds = {tree.matroid.labels(tree.parts[v]): tree.kinds[v] for v in tree.nodes}
    expected = {("0", "1"): TorsoKind.CIRCUIT, ("2",): TorsoKind.COCIRCUIT, ("3", "4"): TorsoKind.CIRCUIT}
    ok = kinds == expected and elapsed < 1.0
    print(f"{'✅' if ok else '❌'} K4-e decomposes into a circuit-cocircuit-circuit path ({elapsed:.3f}s)")
    return ok


def check_determinism():
    outputs = {decompose(k4_minus_edge()).model_dump_json(indent=2) for _ in range(10)}
    ok = len(outputs) == 1
    print(f"{'✅' if ok else '❌'} decompose output is byte-identical across 10 runs")
    return ok


def check_suites():
    start = time.perf_counter()
    reports = run_corpus("all")
    elapsed = time.perf_counter() - start
    failed = [report for report in reports if not report.passed]
    for report in failed:
        for failure in report.failures:
            print(f"   {report.fixture}: {failure}")
    print(f"{'✅' if not failed else '❌'} lemma and duality suites: {len(reports) - len(failed)}/{len(reports)} fixtures ({elapsed:.1f}s)")
    return not failed


def check_uniqueness():
    start = time.perf_counter()
    checked = 0
    failed = []
    for name, M in corpus():
        if M.size < 3 or M.size > 7 or not is_connected(M):
            continue
        try:
            verify_uniqueness(M)
        except LemmaFailure as e:
            print(f"   {name}: {e.detail}")
            failed.append(name)
        checked += 1
    elapsed = time.perf_counter() - start
    print(f"{'✅' if not failed else '❌'} unique decomposition on {checked - len(failed)}/{checked} connected fixtures ({elapsed:.1f}s)")
    return not failed


if __name__ == "__main__":
    results = [check_k4_minus_edge(), check_determinism(), check_suites(), check_uniqueness()]
    sys.exit(0 if all(results) else 1)
