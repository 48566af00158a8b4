"""Invariant suites over the standard module sweep.

Each check_* function returns (ok, detail); run_selfcheck drives them over
the sweep of small modules and collects one record per (module, check).
The random spot checks (derivative/chain identity, intertwiner on random
vectors) draw from a seeded generator; everything else is exhaustive, so the
verdict cannot depend on the seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .action import (
    chevalley_generators,
    derivative_op,
    graded_basis,
    graded_dimension,
    operator_matrix,
    pseudo_translation_op,
    scaling_op,
    spanning_operators,
    triangle_delta,
    verify_bracket_consistency,
)
from .charident import (
    adjoint_matrices,
    check_characteristic_identity,
    predicted_adjoint_roots,
    predicted_sigma2_roots,
    sigma2_tilde,
    tensor_projector,
)
from .errors import ConsistencyViolationError
from .glmodules import (
    cached_module,
    dominant_gaps,
    pieri_index_set,
    validate_module,
    weight_add,
    weight_from_labels,
    weyl_dimension,
)
from .irreducibility import (
    criterion,
    criterion_equivalence_check,
    first_rank_deficiency,
    jordan_holder,
    q_coefficient,
    q_coefficient_bruteforce,
    up_submodule_matrix,
    up_submodule_rank,
)
from .linalg import Matrix, hstack, kernel_basis, rank

__all__ = [
    "CheckRecord",
    "run_selfcheck",
    "standard_sweep",
    "eligible_indices",
]

DEFAULT_B_VALUES = (
    Fraction(-2), Fraction(-1), Fraction(0), Fraction(1), Fraction(2),
    Fraction(1, 2), Fraction(-3, 2),
)


def standard_sweep(n_max=2, max_label=2, b_values=DEFAULT_B_VALUES):
    """All (n, dynkin, b) with n <= n_max and labels up to max_label."""
    import itertools

    for n in range(1, n_max + 1):
        for dynkin in itertools.product(range(max_label + 1), repeat=n - 1):
            for b in b_values:
                yield n, dynkin, Fraction(b)


def eligible_indices(mu, s):
    """{1} plus every later coordinate whose preceding gap is at least s."""
    gaps = dominant_gaps(mu)
    return {1} | {i for i in range(2, len(mu) + 1) if gaps[i - 2] >= s}


# -- individual checks -----------------------------------------------------------


def check_module_invariants(V):
    validate_module(V)
    return True, "all generator invariants hold"


def check_labels_roundtrip(V):
    mu = weight_from_labels(V.labels)
    gaps = tuple(dominant_gaps(mu))
    ok = gaps == V.labels.dynkin and sum(mu) == V.labels.b
    return ok, f"gaps {gaps}, trace {sum(mu)}"


def check_pieri_dimensions(V, k_max=4):
    mu = V.highest_weight
    n = V.n
    for k in range(k_max + 1):
        lhs = sum(weyl_dimension(weight_add(mu, c)) for c in pieri_index_set(mu, k))
        rhs = weyl_dimension(mu) * math.comb(k + n - 1, n - 1)
        if lhs != rhs:
            return False, f"k={k}: {lhs} != {rhs}"
    return True, f"identity holds through k={k_max}"


def check_bracket_consistency(V, k_max=4):
    ok = verify_bracket_consistency(V.n, V, k_max)
    return ok, f"all spanning pairs through degree {k_max}"


def check_chevalley_relations(V, k_max=2, gens=None):
    """Defining sl(n+1) triple relations as exact operator identities."""
    n = V.n
    g = gens if gens is not None else chevalley_generators(n)

    def mat(op, k, shift):
        return operator_matrix(op, V, k, shift=shift if op.is_zero() else None)

    for k in range(k_max + 1):
        for i in range(n):
            se = g.e[i].degree_shift()
            sf = g.f[i].degree_shift()
            he = (
                mat(g.h[i], k + se, 0) @ mat(g.e[i], k, None)
                - mat(g.e[i], k, None) @ mat(g.h[i], k, 0)
            )
            if he != mat(g.e[i], k, None).scale(2):
                return False, f"[h_{i+1}, e_{i+1}] != 2e at degree {k}"
            hf = (
                mat(g.h[i], k + sf, 0) @ mat(g.f[i], k, None)
                - mat(g.f[i], k, None) @ mat(g.h[i], k, 0)
            )
            if hf != mat(g.f[i], k, None).scale(-2):
                return False, f"[h_{i+1}, f_{i+1}] != -2f at degree {k}"
            for j in range(n):
                ef = (
                    mat(g.e[i], k + g.f[j].degree_shift(), None) @ mat(g.f[j], k, None)
                    - mat(g.f[j], k + g.e[i].degree_shift(), None) @ mat(g.e[i], k, None)
                )
                want = (
                    mat(g.h[i], k, 0)
                    if i == j
                    else Matrix.zeros(ef.rows, ef.cols)
                )
                if ef != want:
                    return False, f"[e_{i+1}, f_{j+1}] wrong at degree {k}"
    return True, f"triple relations hold through degree {k_max}"


def check_sigma2_identity(V):
    mu = V.highest_weight
    roots = predicted_sigma2_roots(mu)
    report = check_characteristic_identity(sigma2_tilde(V), roots)
    if not report.residual_is_zero:
        return False, "nonzero residual"
    if sum(report.multiplicities) != V.n * V.dim:
        return False, f"multiplicities {report.multiplicities} do not fill the space"
    i1 = eligible_indices(mu, 1)
    bad = [i + 1 for i, m in enumerate(report.multiplicities) if m and (i + 1) not in i1]
    if bad:
        return False, f"roots at positions {bad} realized outside the eligible set"
    return True, f"roots {[str(r) for r in roots]} mult {report.multiplicities}"


def check_adjoint_identities(V):
    mu = V.highest_weight
    d, dt = predicted_adjoint_roots(mu)
    m, mt = adjoint_matrices(V)
    rep = check_characteristic_identity(m, d)
    rep_t = check_characteristic_identity(mt, dt)
    ok = rep.residual_is_zero and rep_t.residual_is_zero
    ok = ok and sum(rep.multiplicities) == V.n * V.dim
    ok = ok and sum(rep_t.multiplicities) == V.n * V.dim
    return ok, f"mult {rep.multiplicities} / {rep_t.multiplicities}"


def _dual_summand_admissible(mu, r):
    # mu - eps_r keeps integer dominant gaps iff the gap below r absorbs it
    n = len(mu)
    if r < n and mu[r - 1] - mu[r] < 1:
        return False
    return True


def check_projector_suite(V):
    n = V.n
    mu = V.highest_weight
    d = n * V.dim
    for dual in (False, True):
        total = Matrix.zeros(d, d)
        projectors = []
        for r in range(1, n + 1):
            p = tensor_projector(V, r, dual)
            if p @ p != p:
                return False, f"P_{r} (dual={dual}) not idempotent"
            if dual:
                predicted = (
                    weyl_dimension(weight_add(mu, tuple(-(t == r - 1) for t in range(n))))
                    if _dual_summand_admissible(mu, r)
                    else 0
                )
            else:
                shift = tuple(int(t == r - 1) for t in range(n))
                predicted = (
                    weyl_dimension(weight_add(mu, shift))
                    if shift in pieri_index_set(mu, 1)
                    else 0
                )
            if rank(p) != predicted:
                return False, f"rank P_{r} (dual={dual}) = {rank(p)} != {predicted}"
            projectors.append(p)
            total = total + p
        if total != Matrix.identity(d):
            return False, f"projectors (dual={dual}) do not resolve the identity"
        for a in range(len(projectors)):
            for b in range(a + 1, len(projectors)):
                if not (projectors[a] @ projectors[b]).is_zero():
                    return False, f"P_{a+1} P_{b+1} != 0 (dual={dual})"
    return True, "idempotence, orthogonality, resolution, ranks"


def _tensor_equivariance_generators(V, dual):
    """Matrices of the diagonal action on (dual) vector rep tensor V."""
    n = V.n
    idv = Matrix.identity(V.dim)
    idn = Matrix.identity(n)
    from .linalg import kron

    gens = []
    for i in range(n):
        for j in range(n):
            if dual:
                first = Matrix(n, n, {(j, i): -1})
            else:
                first = Matrix(n, n, {(i, j): 1})
            gens.append(kron(first, idv) + kron(idn, V.e(i, j)))
    return gens


def check_projector_equivariance(V):
    for dual in (False, True):
        gens = _tensor_equivariance_generators(V, dual)
        for r in range(1, V.n + 1):
            p = tensor_projector(V, r, dual)
            for g in gens:
                if p @ g != g @ p:
                    return False, f"P_{r} (dual={dual}) does not commute with the action"
    return True, "projectors commute with the diagonal action"


def check_q_equivalence(V, c_max=3):
    mu = V.highest_weight
    for j in range(c_max + 1):
        for c in pieri_index_set(mu, j):
            closed = q_coefficient(mu, c)
            brute = q_coefficient_bruteforce(V, c)
            if closed != brute:
                return False, f"c={c}: closed {closed} != brute {brute}"
    return True, f"all shifts through |c|={c_max}"


def check_criterion_vs_bruteforce(V, k_max=4):
    wit = criterion(V.highest_weight)
    deficient = first_rank_deficiency(V, k_max)
    if wit.reducible:
        expected = wit.first_failure_degree if wit.first_failure_degree <= k_max else None
        ok = deficient == expected
        return ok, f"first deficiency {deficient}, witness {wit.first_failure_degree}"
    return deficient is None, f"irreducible but deficiency at {deficient}"


def check_criterion_equivalence(V):
    ok = criterion_equivalence_check(V.highest_weight)
    return ok, "both closed forms agree"


def check_jordan_holder(V):
    wit = criterion(V.highest_weight)
    if not wit.reducible:
        return True, "irreducible; nothing to verify"
    report = jordan_holder(V)  # raises ConsistencyViolationError on defect
    if not report.corollary_consistent:
        return False, f"threshold mismatch: witness {report.k}, corollary {report.corollary_k}"
    if report.finite_dim_flag:
        gaps = dominant_gaps(V.highest_weight)
        horizon = report.k + sum(gaps) + 2
        total = 0
        j = 0
        while j <= horizon:
            r = up_submodule_rank(V, j)
            total += r
            if r == 0:
                break
            j += 1
        else:
            return False, "graded ranks did not terminate"
        if total != report.finite_dim_total:
            return False, f"graded total {total} != predicted {report.finite_dim_total}"
    return True, f"series verified (k={report.k}, r={report.residual_index})"


def check_derivative_surjectivity(V, k_max=3):
    for k in range(1, k_max + 1):
        mats = [operator_matrix(derivative_op(V.n, l), V, k) for l in range(V.n)]
        low = graded_dimension(V, k - 1)
        for l, m in enumerate(mats):
            if rank(m) != low:
                return False, f"d_{l+1} not surjective from degree {k}"
        stacked = Matrix(
            sum(m.rows for m in mats), mats[0].cols,
            {
                (off * low + r, c): v
                for off, m in enumerate(mats)
                for (r, c), v in m.entries.items()
            },
        )
        if rank(stacked) != graded_dimension(V, k):
            return False, f"joint derivative kernel nonzero at degree {k}"
    return True, f"derivatives surjective with trivial joint kernel through {k_max}"


def check_cartan_diagonal(V, k_max=3):
    n = V.n
    euler = scaling_op(n, 0, 0)
    for l in range(1, n):
        euler = euler + scaling_op(n, l, l)
    for k in range(k_max + 1):
        m = operator_matrix(euler, V, k)
        if m != Matrix.identity(m.rows).scale(k + V.b):
            return False, f"euler field not (k+b)*Id at degree {k}"
        for i in range(n):
            mi = operator_matrix(scaling_op(n, i, i), V, k)
            gb = graded_basis(V, k)
            expected = Matrix(
                gb.dim, gb.dim,
                {
                    (t, t): mono[i] + V.basis_weights[q][i]
                    for t, (mono, q) in enumerate(gb.labels)
                },
            )
            if mi != expected:
                return False, f"x_{i+1} d_{i+1} eigenvalues wrong at degree {k}"
    return True, f"diagonal action matches through degree {k_max}"


def _random_chain(rng, n, k):
    return tuple(rng.randint(0, n - 1) for _ in range(k))


def check_derivative_chain_identity(V, rng, cases=6, k_max=3, delta=triangle_delta):
    """Peeling a derivative through a chain of raisings, against the closed rule.

    `delta` is injectable so a mutated bookkeeping operator can be probed.
    """
    n = V.n
    zero = graded_basis(V, 0)
    for _ in range(cases):
        k = rng.randint(1, k_max)
        chain = sorted(_random_chain(rng, n, k))
        i = rng.randint(0, n - 1)
        q = rng.randint(0, V.dim - 1)
        vec = {zero.index[((0,) * n, q)]: 1}
        cur = dict(vec)
        for t, idx in enumerate(reversed(chain)):
            cur = operator_matrix(pseudo_translation_op(n, idx), V, t).apply(cur)
        lhs = operator_matrix(derivative_op(n, i), V, k).apply(cur)
        rhs = {}
        for s in range(k):
            rest = chain[:s] + chain[s + 1:]
            start = delta(i, chain[s], k, V, degree=0).apply(vec)
            curs = start
            for t, idx in enumerate(reversed(rest)):
                curs = operator_matrix(pseudo_translation_op(n, idx), V, t).apply(curs)
            for pos, v in curs.items():
                acc = rhs.get(pos, 0) + v
                if acc == 0:
                    rhs.pop(pos, None)
                else:
                    rhs[pos] = acc
        if lhs != rhs:
            return False, f"chain {chain}, derivative {i+1}, vector {q}"
    return True, f"{cases} random chains agree"


def check_intertwiner(V, j_max=2):
    """Degree-raising map commutes with the scaling action, as full matrices."""
    from .linalg import kron

    n = V.n
    idn = Matrix.identity(n)
    for j in range(j_max + 1):
        tj = hstack([
            operator_matrix(pseudo_translation_op(n, i), V, j) for i in range(n)
        ])
        dim_j = graded_dimension(V, j)
        for s in range(n):
            for t in range(n):
                op_j = operator_matrix(scaling_op(n, s, t), V, j)
                op_j1 = operator_matrix(scaling_op(n, s, t), V, j + 1)
                diag = kron(Matrix(n, n, {(s, t): 1}), Matrix.identity(dim_j)) + kron(
                    idn, op_j
                )
                if tj @ diag != op_j1 @ tj:
                    return False, f"intertwiner fails for x_{s+1}d_{t+1} at degree {j}"
    return True, f"exact intertwining through degree {j_max}"


def check_derivative_escape(V):
    """Below-threshold derivatives of the residual complement leave the chain span."""
    wit = criterion(V.highest_weight)
    if not wit.reducible:
        return True, "irreducible; nothing to verify"
    k = wit.first_failure_degree - 1
    j = k + 2
    mj = up_submodule_matrix(V, j)
    residual = kernel_basis(mj)
    if not residual:
        return False, f"no residual complement at degree {j}"
    low = up_submodule_matrix(V, j - 1)
    base_rank = rank(low)
    gb = graded_basis(V, j)
    for l in range(V.n):
        dmat = operator_matrix(derivative_op(V.n, l), V, j)
        cols = []
        for vec in residual:
            sparse = {t: v for t, v in enumerate(vec) if v != 0}
            cols.append(dmat.apply(sparse))
        stacked = hstack([low, Matrix.from_cols(cols, dmat.rows)])
        if rank(stacked) <= base_rank:
            return False, f"d_{l+1} image of the residual stays inside the span"
    return True, f"all derivatives escape at degree {j}"


def check_submodule_invariance(V, j_max=2):
    """The chain span is stable under every spanning operator."""
    mats = {j: up_submodule_matrix(V, j) for j in range(j_max + 2)}
    ranks = {j: rank(m) for j, m in mats.items()}
    for j in range(j_max + 1):
        for name, op in spanning_operators(V.n):
            shift = op.degree_shift()
            tgt = j + shift
            if tgt < 0:
                continue
            om = operator_matrix(op, V, j)
            image = om @ mats[j]
            stacked = hstack([mats[tgt], image])
            if rank(stacked) != ranks[tgt]:
                return False, f"{name} pushes the degree-{j} span outside degree {tgt}"
    return True, f"span stable under the spanning set through degree {j_max}"


# -- sweep driver -----------------------------------------------------------------


@dataclass(frozen=True)
class CheckRecord:
    point: tuple
    check: str
    ok: bool
    detail: str


def run_selfcheck(n_max=2, degree_cap=4, seed=0, dim_cap=5000, max_label=2,
                  b_values=DEFAULT_B_VALUES, progress=None):
    """Run every suite over the sweep; returns a list of CheckRecord."""
    rng = random.Random(seed)
    records = []
    for n, dynkin, b in standard_sweep(n_max, max_label, b_values):
        point = (n, dynkin, b)
        V = cached_module(n, dynkin, b, dim_cap)
        checks = [
            ("module-invariants", lambda: check_module_invariants(V)),
            ("labels-roundtrip", lambda: check_labels_roundtrip(V)),
            ("pieri-dimensions", lambda: check_pieri_dimensions(V, degree_cap)),
            ("bracket-consistency", lambda: check_bracket_consistency(V, degree_cap)),
            ("chevalley-relations", lambda: check_chevalley_relations(V, min(degree_cap, 2))),
            ("characteristic-identity", lambda: check_sigma2_identity(V)),
            ("adjoint-identities", lambda: check_adjoint_identities(V)),
            ("projector-suite", lambda: check_projector_suite(V)),
            ("projector-equivariance", lambda: check_projector_equivariance(V)),
            ("q-closed-form-vs-oracle", lambda: check_q_equivalence(V, 3)),
            ("criterion-vs-bruteforce", lambda: check_criterion_vs_bruteforce(V, degree_cap)),
            ("criterion-equivalence", lambda: check_criterion_equivalence(V)),
            ("jordan-holder", lambda: check_jordan_holder(V)),
            ("derivative-surjectivity", lambda: check_derivative_surjectivity(V, min(degree_cap, 3))),
            ("cartan-diagonal", lambda: check_cartan_diagonal(V, min(degree_cap, 3))),
            ("derivative-chain-identity", lambda: check_derivative_chain_identity(V, rng)),
            ("intertwiner", lambda: check_intertwiner(V, 2)),
            ("derivative-escape", lambda: check_derivative_escape(V)),
            ("submodule-invariance", lambda: check_submodule_invariance(V, 2)),
        ]
        for name, fn in checks:
            try:
                ok, detail = fn()
            except ConsistencyViolationError as exc:
                ok, detail = False, f"consistency violation: {exc}"
            records.append(CheckRecord(point, name, ok, detail))
            if progress is not None:
                progress(records[-1])
    return records
