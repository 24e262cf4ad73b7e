"""Walk through the pooling designs and the four decoders on small instances.

Run: python demos/01_designs_and_decoders.py
"""

from grouptest import (
    DesignMatrix,
    DesignSpec,
    ItemSet,
    comp,
    consistent_sets,
    dd,
    generate,
    optimal_bernoulli_p,
    optimal_column_weight,
    run_tests,
    scomp,
    w_scomp,
)

print("=" * 70)
print("1. The three pooling-matrix families (N=12 items, T=9 tests, k=2)")
print("=" * 70)

n_items, n_tests, k = 12, 9, 2
p = optimal_bernoulli_p(k)
weight = optimal_column_weight(n_tests, k)
print(f"optimal Bernoulli inclusion probability for k={k}: p = 1/(k+1) = {p:.4f}")
print(f"optimal tests-per-item for T={n_tests}, k={k}: L = floor((T/k) ln 2) = {weight}")

specs = [
    DesignSpec("bernoulli", n_items, n_tests, inclusion_prob=p, seed=7),
    DesignSpec("constant_column", n_items, n_tests, column_weight=weight, seed=7),
    DesignSpec("near_constant_column", n_items, n_tests, column_weight=weight, seed=7),
]
for spec in specs:
    matrix = generate(spec)
    weights = matrix.column_weights()
    print(f"\n{spec.design_kind}:")
    for t, row in enumerate(matrix.rows):
        print(f"  test {t}: {set(row) if row else '{}'}")
    print(f"  column weights: min={weights.min()} max={weights.max()} mean={weights.mean():.2f}")

print()
print("=" * 70)
print("2. Decoding a worked instance")
print("=" * 70)

# Pools {0,1}, {0,2}, {1,2,3}, {4}; true defectives {0, 1}.
matrix = DesignMatrix([[0, 1], [0, 2], [1, 2, 3], [4]], n_items=5)
truth = ItemSet((0, 1), universe_size=5)
outcomes = run_tests(matrix, truth)
print(f"pools: {[set(r) for r in matrix.rows]}")
print(f"true defectives: {set(truth.members)}")
print(f"outcomes Y: {tuple(int(b) for b in outcomes.bits)}   (test 3 = pool {{4}} is negative)")

result = comp(matrix, outcomes)
print(f"\nCOMP: anything seen in a negative test is ruled out.")
print(f"  ruled out (DND): {set(result.definite_non_defectives.members)}")
print(f"  estimate = remaining potential defectives: {set(result.estimate.members)}")
print(f"  -> contains the truth but carries false positives 2 and 3")

result = dd(matrix, outcomes)
print(f"\nDD: certify items that alone can explain some positive test.")
print(f"  estimate: {set(result.estimate.members) or '{}'} "
      f"(every positive pool still holds >= 2 candidates, nothing certified)")

result = scomp(matrix, outcomes)
print(f"\nSCOMP: greedily cover unexplained positive tests by raw pool counts.")
for step in result.trace:
    print(f"  picked item {step.item} (score {step.score:g}), "
          f"{step.unexplained_after} unexplained test(s) left")
print(f"  estimate: {set(result.estimate.members)}")

result = w_scomp(matrix, outcomes, alpha=1.0)
print(f"\nW-SCOMP (alpha=1): each unexplained test counts 1/w_t, so being in")
print(f"two 2-candidate pools beats being in one 3-candidate pool.")
for step in result.trace:
    print(f"  picked item {step.item} (score {step.score:.4f}), "
          f"{step.unexplained_after} unexplained test(s) left")
print(f"  estimate: {set(result.estimate.members)}  -> exact recovery")

print()
print("=" * 70)
print("3. What could any decoder have answered? (feasible-set oracle)")
print("=" * 70)
feasible = consistent_sets(matrix, outcomes, n_defectives=2)
print(f"size-2 sets consistent with Y: {[set(s.members) for s in feasible]}")
print("The outcomes do not identify the truth uniquely; W-SCOMP's weighting")
print("picked the right one here, but no decoder could be certain.")

print()
print("=" * 70)
print("4. An identifiable instance")
print("=" * 70)
matrix = DesignMatrix([[0], [1, 2], [2, 3]], n_items=4)
truth = ItemSet((0, 2), universe_size=4)
outcomes = run_tests(matrix, truth)
feasible = consistent_sets(matrix, outcomes, n_defectives=2)
print(f"pools {[set(r) for r in matrix.rows]}, truth {set(truth.members)}, "
      f"Y = {tuple(int(b) for b in outcomes.bits)}")
print(f"feasible sets: {[set(s.members) for s in feasible]}  -> unique")
print(f"DD certifies {set(dd(matrix, outcomes).estimate.members)} from the singleton pool;")
print(f"the greedy stage finishes the job: "
      f"SCOMP = {set(scomp(matrix, outcomes).estimate.members)}, "
      f"W-SCOMP = {set(w_scomp(matrix, outcomes).estimate.members)}")
