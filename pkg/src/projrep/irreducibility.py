"""Irreducibility analysis of the graded module generated from degree zero.

The raising chains p^c applied to the degree-zero slice either fill every
graded piece (irreducible case) or first miss a summand at a computable
degree.  Both sides are implemented: the closed-form product coefficient q_c
attached to each tensor summand, and a brute-force oracle that builds the
actual maximal vectors and measures ranks.  When the module is reducible the
two-step composition series and the residual quotient data are reported.
"""

from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass
from fractions import Fraction

from .action import (
    GradedElement,
    graded_basis,
    graded_dimension,
    monomials_of_degree,
    operator_matrix,
    pseudo_translation_op,
    scaling_op,
)
from .errors import ConsistencyViolationError, MultiplicityAnomalyError
from .glmodules import (
    dominant_gaps,
    format_rational,
    pieri_index_set,
    weight_add,
    weyl_dimension,
)
from .linalg import Matrix, hstack, kernel_basis, rank

__all__ = [
    "CriterionWitness",
    "JordanHolderReport",
    "criterion",
    "criterion_equivalence_check",
    "first_rank_deficiency",
    "jordan_holder",
    "maximal_vector",
    "phi_image",
    "q_coefficient",
    "q_coefficient_bruteforce",
    "residual_summands",
    "tensor_action_map",
    "up_submodule_matrix",
    "up_submodule_rank",
]


# -- closed form ---------------------------------------------------------------


def q_coefficient(mu, c):
    """prod_{s=1..n} prod_{i=1..c_s} (mu_s + |mu| - s + i); empty products are 1."""
    n = len(mu)
    c = tuple(int(x) for x in c)
    if c not in pieri_index_set(mu, sum(c)):
        raise ValueError(f"{c} is not an admissible shift for {mu}")
    tot = sum(mu)
    q = Fraction(1)
    for s in range(n):
        base = mu[s] + tot - (s + 1)
        for i in range(1, c[s] + 1):
            q *= base + i
    return q


def _is_nonpositive_integer(x):
    f = Fraction(x)
    return f.denominator == 1 and f.numerator <= 0


@dataclass(frozen=True)
class CriterionWitness:
    """Verdict of the closed-form irreducibility test with its failing pairs.

    Failing pairs are (i, s) with i 1-based: the degree-s obstruction at
    coordinate i (eligible only when i == 1 or the (i-1)-th dominant gap is
    at least s).  first_failure_degree is the least failing s.
    """

    verdict: str
    failing_pairs: tuple
    first_failure_degree: object

    @property
    def reducible(self):
        return self.verdict == "reducible"

    def to_json(self):
        return {
            "verdict": self.verdict,
            "failing_pairs": [list(p) for p in self.failing_pairs],
            "first_failure_degree": self.first_failure_degree,
        }


def criterion(mu):
    """Decide irreducibility from the weight alone.

    For i = 1 the obstruction exists iff mu_1 + |mu| is a nonpositive integer;
    for i >= 2 the candidate s = i - mu_i - |mu| must be an integer within
    the (i-1)-th dominant gap.
    """
    n = len(mu)
    gaps = dominant_gaps(mu)
    tot = sum(mu)
    failing = []
    t1 = Fraction(mu[0] + tot)
    if t1.denominator == 1 and t1.numerator <= 0:
        failing.append((1, 1 - int(t1)))
    for i in range(2, n + 1):
        s = Fraction(i - mu[i - 1] - tot)
        if s.denominator == 1 and 1 <= s.numerator <= gaps[i - 2]:
            failing.append((i, int(s)))
    failing.sort(key=lambda p: (p[1], p[0]))
    if failing:
        return CriterionWitness("reducible", tuple(failing), failing[0][1])
    return CriterionWitness("irreducible", (), None)


def _in_integer_range(x, lo, hi):
    f = Fraction(x)
    return f.denominator == 1 and lo <= f.numerator <= hi


def criterion_equivalence_check(mu):
    """Evaluate the two equivalent closed forms of the criterion independently.

    One form bounds mu_1 + |mu| away from the nonpositive integers and one
    integer window, plus a window per middle coordinate; the other quantifies
    over all degrees s with eligibility per coordinate.  Returns True iff the
    verdicts agree.
    """
    n = len(mu)
    tot = sum(mu)
    t1 = mu[0] + tot
    ok = not _is_nonpositive_integer(t1)
    if n >= 2:
        gap1 = int(mu[0] - mu[1])
        ok = ok and not _in_integer_range(t1, 2, 1 + gap1)
    for i in range(2, n):  # 1-based middle coordinates 2..n-1
        gap = int(mu[i - 1] - mu[i])
        ok = ok and not _in_integer_range(mu[i - 1] + tot - i, 1, gap)
    return ok == (not criterion(mu).reducible)


def residual_summands(mu, j):
    """Admissible shifts at degree j whose closed-form coefficient vanishes."""
    return tuple(c for c in pieri_index_set(mu, j) if q_coefficient(mu, c) == 0)


# -- brute force ---------------------------------------------------------------

_cache_lock = threading.Lock()
_caches = weakref.WeakKeyDictionary()


def _cache_for(V):
    with _cache_lock:
        cache = _caches.get(V)
        if cache is None:
            cache = _caches[V] = {}
        return cache


def _p_chain_vector(V, c, q):
    """Sparse coordinates of p^c applied to the degree-zero basis vector q,
    expressed in the degree-|c| basis.  Outermost factor has the lowest index."""
    cache = _cache_for(V)
    key = ("pvec", c, q)
    with _cache_lock:
        hit = cache.get(key)
    if hit is not None:
        return hit
    if sum(c) == 0:
        zero = graded_basis(V, 0)
        vec = {zero.index[(c, q)]: 1}
    else:
        i = next(t for t, x in enumerate(c) if x)
        prev = c[:i] + (c[i] - 1,) + c[i + 1:]
        sub = _p_chain_vector(V, prev, q)
        pm = operator_matrix(pseudo_translation_op(V.n, i), V, sum(c) - 1)
        vec = pm.apply(sub)
    with _cache_lock:
        cache[key] = vec
    return vec


def up_submodule_matrix(V, k):
    """The degree-k chain matrix: columns are all ordered p-products applied
    to the degree-zero basis, in lexicographic chain order."""
    gb = graded_basis(V, k)
    cols = []
    labels = []
    for c in monomials_of_degree(V.n, k):
        for q in range(V.dim):
            cols.append(_p_chain_vector(V, c, q))
            labels.append((c, q))
    return Matrix.from_cols(cols, gb.dim, col_labels=labels)


def _label_weight(V, mono, q):
    return weight_add(V.basis_weights[q], mono)


def up_submodule_rank(V, k):
    """Dimension of the degree-k piece of the span of all p-chains.

    Equal to the rank of the chain matrix; computed blockwise per weight
    (each chain column is a weight vector), which is exact and much faster
    than eliminating the full matrix.
    """
    if k == 0:
        return V.dim
    gb = graded_basis(V, k)
    row_groups = {}
    for pos, (mono, q) in enumerate(gb.labels):
        row_groups.setdefault(_label_weight(V, mono, q), {})[pos] = None
    for w, rows in row_groups.items():
        row_groups[w] = {pos: t for t, pos in enumerate(rows)}
    blocks = {}
    for c in monomials_of_degree(V.n, k):
        for q in range(V.dim):
            vec = _p_chain_vector(V, c, q)
            if not vec:
                continue
            w = _label_weight(V, c, q)
            remap = row_groups[w]
            blocks.setdefault(w, []).append({remap[pos]: v for pos, v in vec.items()})
    total = 0
    for w, cols in blocks.items():
        nrows = len(row_groups[w])
        total += rank(Matrix.from_cols(cols, nrows))
    return total


def maximal_vector(V, c):
    """The maximal vector of the degree-|c| summand with shifted weight mu+c,
    normalized so the coefficient of x^c tensor (highest basis vector) is 1."""
    mu = V.highest_weight
    j = sum(c)
    if tuple(c) not in pieri_index_set(mu, j):
        raise ValueError(f"{c} is not an admissible shift for {mu}")
    gb = graded_basis(V, j)
    target = weight_add(mu, c)
    support = [pos for pos, (mono, q) in enumerate(gb.labels)
               if _label_weight(V, mono, q) == target]
    if not support:
        raise MultiplicityAnomalyError(f"empty weight space for {target}")
    raisers = [
        operator_matrix(scaling_op(V.n, a, b), V, j)
        for a in range(V.n)
        for b in range(a + 1, V.n)
    ]
    ent = {}
    off = 0
    for op in raisers:
        cm = op.colmap()
        for t, pos in enumerate(support):
            for r, v in cm.get(pos, {}).items():
                ent[(off + r, t)] = v
        off += op.rows
    kern = kernel_basis(Matrix(off, len(support), ent))
    if len(kern) != 1:
        raise MultiplicityAnomalyError(
            f"maximal vector space for shift {tuple(c)} has dimension {len(kern)}"
        )
    coords = {}
    for t, v in enumerate(kern[0]):
        if v != 0:
            coords[gb.labels[support[t]]] = v
    xi = GradedElement(j, coords)
    lead = xi.coords.get((tuple(c), V.highest_index), 0)
    if lead == 0:
        raise ConsistencyViolationError(
            "maximal vector lacks the distinguished leading coordinate"
        )
    if lead != 1:
        inv = Fraction(1) / lead
        xi = GradedElement(j, {lab: v * inv for lab, v in xi.coords.items()})
    return xi


def phi_image(V, element):
    """Replace every x^l tensor v_q by the chain vector p^l(1 tensor v_q)."""
    j = element.degree
    gb = graded_basis(V, j)
    acc = {}
    for (mono, q), val in element.coords.items():
        for pos, v in _p_chain_vector(V, mono, q).items():
            s = acc.get(pos, 0) + val * v
            if s == 0:
                acc.pop(pos, None)
            else:
                acc[pos] = s
    return gb.from_vector(acc)


def q_coefficient_bruteforce(V, c):
    """Scale factor picked up by the maximal vector under the chain map.

    Independent oracle for q_coefficient: builds the actual maximal vector,
    pushes it through the chain substitution, and reads off the ratio
    (verifying exact proportionality along the way).
    """
    c = tuple(int(x) for x in c)
    xi = maximal_vector(V, c)
    hat = phi_image(V, xi)
    q = hat.coords.get((c, V.highest_index), 0)
    scaled = GradedElement(xi.degree, {lab: q * v for lab, v in xi.coords.items()})
    if scaled != hat:
        raise ConsistencyViolationError(
            f"chain image of the maximal vector for {c} is not proportional to it"
        )
    return Fraction(q)


# -- criterion vs brute force, composition series -------------------------------


def first_rank_deficiency(V, k_max):
    """Least degree j <= k_max with a rank deficit, or None if all are full."""
    for j in range(k_max + 1):
        if up_submodule_rank(V, j) < graded_dimension(V, j):
            return j
    return None


def tensor_action_map(V, j):
    """Matrix of the degree-raising intertwiner: column block i holds the
    action of the i-th pseudo-translation on the degree-j basis."""
    return hstack([
        operator_matrix(pseudo_translation_op(V.n, i), V, j)
        for i in range(V.n)
    ])


@dataclass(frozen=True)
class JordanHolderReport:
    """Two-step composition series data for a reducible module.

    k is the last fully-generated degree (from the closed-form witness);
    corollary_k is the same number recomputed from the minimal-coordinate
    formula, with corollary_consistent recording their agreement.  The
    residual summand at degree k+1 is (k+1) * eps_r with the reported
    1-based r; the quotient carries the central character of mu + (k+1)eps_r.
    """

    k: int
    i0: int
    corollary_k: object
    corollary_consistent: bool
    residual_index: int
    residual_weight: tuple
    submodule_dims_by_degree: tuple
    quotient_character: tuple
    finite_dim_flag: bool
    finite_dim_highest_labels: object
    finite_dim_total: object

    def to_json(self):
        return {
            "k": self.k,
            "i0": self.i0,
            "corollary_k": self.corollary_k,
            "corollary_consistent": self.corollary_consistent,
            "residual_index": self.residual_index,
            "residual_weight": [format_rational(x) for x in self.residual_weight],
            "submodule_dims_by_degree": list(self.submodule_dims_by_degree),
            "quotient_character": [format_rational(x) for x in self.quotient_character],
            "finite_dim_flag": self.finite_dim_flag,
            "finite_dim_highest_labels": (
                list(self.finite_dim_highest_labels)
                if self.finite_dim_highest_labels is not None
                else None
            ),
            "finite_dim_total": self.finite_dim_total,
        }


def _corollary_threshold(mu):
    """(i0, k) from the minimal-coordinate formula, or (None, None)."""
    tot = sum(mu)
    for i in range(1, len(mu) + 1):
        if _is_nonpositive_integer(mu[i - 1] + tot - i + 1):
            return i, int(-(mu[i - 1]) - tot + i - 1)
    return None, None


def _sl_labels_to_partition(labels):
    n1 = len(labels) + 1
    return tuple(sum(labels[j:]) for j in range(n1 - 1)) + (0,)


def jordan_holder(V, degree_cap=None):
    """Verify the composition series of a reducible module by brute force.

    Checks, degree by degree, that the chain span fills everything through
    degree k and first falls short at k+1 with a single missing summand of
    the predicted shape; closed-form/brute-force disagreements raise
    ConsistencyViolationError instead of being reconciled.
    """
    mu = V.highest_weight
    wit = criterion(mu)
    if not wit.reducible:
        raise ValueError("module is irreducible; no composition series to report")
    k = wit.first_failure_degree - 1
    i0, cor_k = _corollary_threshold(mu)
    cap = degree_cap if degree_cap is not None else max(4, k + 2)

    dims = []
    for j in range(cap + 1):
        r = up_submodule_rank(V, j)
        dims.append(r)
        full = graded_dimension(V, j)
        expected = full - sum(
            weyl_dimension(weight_add(mu, c)) for c in residual_summands(mu, j)
        )
        if r != expected:
            raise ConsistencyViolationError(
                f"degree {j}: chain rank {r} != decomposition prediction {expected}"
            )
        if j <= k and r != full:
            raise ConsistencyViolationError(
                f"degree {j} <= {k} should be full but rank is {r} of {full}"
            )
        if j == k + 1 and r >= full:
            raise ConsistencyViolationError(
                f"degree {k + 1} should be deficient but rank is full ({r})"
            )

    res = residual_summands(mu, k + 1)
    if len(res) != 1:
        raise ConsistencyViolationError(
            f"expected a single residual summand at degree {k + 1}, got {res}"
        )
    c = res[0]
    nz = [t for t, x in enumerate(c) if x]
    if len(nz) != 1 or c[nz[0]] != k + 1:
        raise ConsistencyViolationError(
            f"residual summand {c} is not concentrated on one coordinate"
        )
    r_index = nz[0] + 1
    residual_weight = weight_add(mu, c)

    finite = i0 == 1
    labels = None
    total = None
    if finite:
        gaps = dominant_gaps(mu)
        labels = (k,) + tuple(gaps)
        total = weyl_dimension(_sl_labels_to_partition(labels))

    return JordanHolderReport(
        k=k,
        i0=i0,
        corollary_k=cor_k,
        corollary_consistent=cor_k == k,
        residual_index=r_index,
        residual_weight=residual_weight,
        submodule_dims_by_degree=tuple(dims),
        quotient_character=residual_weight,
        finite_dim_flag=finite,
        finite_dim_highest_labels=labels,
        finite_dim_total=total,
    )
