"""Independent oracles the main implementations are checked against.

Every function here deliberately takes a different route than the
package code: joint-histogram entropies instead of linearized sums,
edge-list fixpoints instead of adjacency traversal, permutation
enumeration instead of closed-form tie handling, and exhaustive
stratification instead of matching.
"""

import itertools
import math
from collections import Counter


def entropy_oracle(samples, base: float = 2.0) -> float:
    n = len(samples)
    return -sum((c / n) * math.log(c / n, base)
                for c in Counter(samples).values())


def joint_entropy_oracle(*columns, base: float = 2.0) -> float:
    return entropy_oracle(list(zip(*columns)), base)


def mi_oracle(x, y, base: float = 2.0) -> float:
    return (entropy_oracle(x, base) + entropy_oracle(y, base)
            - joint_entropy_oracle(x, y, base=base))


def cmi_oracle(x, y, z, base: float = 2.0) -> float:
    return (joint_entropy_oracle(x, z, base=base)
            + joint_entropy_oracle(y, z, base=base)
            - entropy_oracle(z, base)
            - joint_entropy_oracle(x, y, z, base=base))


def reachable_oracle(edges, root) -> set:
    """Transitive closure from root by edge-list fixpoint iteration."""
    closure = {root}
    changed = True
    while changed:
        changed = False
        for src, dst, _kind in edges:
            if src in closure and dst not in closure:
                closure.add(dst)
                changed = True
    return closure


def exam_walk_oracle(tie_groups, faulty) -> tuple[int, int]:
    """(best, worst) statements examined until the first faulty one,
    by enumerating every within-group permutation."""
    faulty = set(faulty)
    counts = []
    for arrangement in itertools.product(
            *[itertools.permutations(group) for group in tie_groups]):
        flat = [s for group in arrangement for s in group]
        for pos, statement in enumerate(flat, start=1):
            if statement in faulty:
                counts.append(pos)
                break
    return min(counts), max(counts)


def permutation_count(tie_groups) -> int:
    total = 1
    for group in tie_groups:
        total *= math.factorial(len(group))
    return total


def stratified_rd_oracle(treatment, outcomes, strata) -> float:
    """Exact stratified risk difference, strata weighted by size.
    Strata missing a group contribute nothing (their units are
    unmatchable)."""
    units = list(range(len(treatment)))
    by_stratum = {}
    for i in units:
        by_stratum.setdefault(strata[i], []).append(i)
    total = 0.0
    weight = 0
    for members in by_stratum.values():
        treated = [outcomes[i] for i in members if treatment[i]]
        control = [outcomes[i] for i in members if not treatment[i]]
        if not treated or not control:
            continue
        rd = (sum(treated) / len(treated)) - (sum(control) / len(control))
        total += len(members) * rd
        weight += len(members)
    return total / weight if weight else 0.0


def grid_search_logistic(treatment, confounder, ridge,
                         rounds: int = 6) -> tuple[float, float]:
    """Coarse-to-fine 2D grid maximizer of the penalized likelihood for
    a single-confounder model. Slow on purpose."""
    import numpy as np

    from faultchain.causal import penalized_log_likelihood

    y = np.asarray(treatment, dtype=float)
    x = np.asarray(confounder, dtype=float).reshape(-1, 1)
    center = (0.0, 0.0)
    span = 20.0
    for _ in range(rounds):
        b0s = [center[0] + span * (i / 10 - 1.0) for i in range(21)]
        b1s = [center[1] + span * (i / 10 - 1.0) for i in range(21)]
        best = None
        for b0 in b0s:
            for b1 in b1s:
                ll = penalized_log_likelihood((b0, b1), y, x, ridge)
                if best is None or ll > best[0]:
                    best = (ll, b0, b1)
        center = (best[1], best[2])
        span = span / 10 * 2  # keep a 2-cell margin around the new center
    return center
