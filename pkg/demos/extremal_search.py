"""Exact extremal values by branch and bound, with budgets and caching.

f(n, P) is the maximum number of ones an n x n matrix can carry while
avoiding P under ordinary containment; m(n, B) is the analogue for
interval minors.  The search is exact, deterministic, and resumable: a
budget-curtailed run leaves a lower-bound record in the cache that a
later, larger-budget run picks up.
"""

import tempfile

from patternforge import (
    SearchConfig,
    TensorMatrix,
    all_ones,
    load_records,
    max_ones_avoiding,
    max_ones_avoiding_minor,
    ratio_sequence,
    serialize_tensor,
)

IDENTITY2 = TensorMatrix((2, 2), [(1, 1), (2, 2)])


def main():
    print("f(n, 2x2 identity) for n = 1..5:")
    for n in range(1, 6):
        rec = max_ones_avoiding(n, IDENTITY2)
        print(f"  n={n}: value={rec.value} status={rec.status} "
              f"elapsed={rec.elapsed:.3f}s")

    rec = max_ones_avoiding(4, IDENTITY2)
    print("\nwitness attaining f(4) = 7:")
    for line in serialize_tensor(rec.witness).rstrip().splitlines():
        print(f"  {line}")

    print("\nm(n, all-ones 2x2) for n = 1..4:")
    for n in range(1, 5):
        rec = max_ones_avoiding_minor(n, all_ones((2, 2)))
        print(f"  n={n}: value={rec.value} status={rec.status}")

    print("\nratio sequence value / n for the 2x2 identity:")
    for p in ratio_sequence(IDENTITY2, range(1, 6)):
        print(f"  n={p.n}: {p.value}/{p.n} = {p.ratio:.4f}")

    # budgets make partial progress durable: the first run stops early and
    # records a lower bound; the second run resumes and finishes
    with tempfile.TemporaryDirectory() as cache:
        small = SearchConfig(node_budget=50, cache_dir=cache)
        first = max_ones_avoiding(5, IDENTITY2, small)
        print(f"\nbudget 50 nodes: value>={first.value} status={first.status}")
        full = max_ones_avoiding(5, IDENTITY2, SearchConfig(cache_dir=cache))
        print(f"unbounded rerun: value={full.value} status={full.status}")
        kinds = [r.status for r in load_records(cache)]
        print(f"cache now holds {len(kinds)} records: {kinds}")


if __name__ == "__main__":
    main()
