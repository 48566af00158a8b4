"""Finite-dimensional irreducible gl(n)-modules with explicit generator matrices.

A module is labelled by nonnegative Dynkin labels (a_1, ..., a_{n-1}) for the
traceless part plus a rational central scalar b for the identity matrix.
Construction realizes each fundamental module as an exterior power of the
vector representation, tensors the required copies together, takes the cyclic
span of the top vector under the simple lowering operators, and restricts all
E_{i,j} to that span; the Cartan diagonal is then shifted so the identity acts
by b.  Weights are plain n-tuples (Fractions or ints), index i holding the
E_{i,i} eigenvalue.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConsistencyViolationError, DimensionCapError
from .linalg import EchelonSpan, Matrix, format_rational, kernel_basis, kron, parse_rational

__all__ = [
    "DominantLabels",
    "GlModule",
    "build_irreducible",
    "dominant_gaps",
    "highest_weight_vectors",
    "module_from_json",
    "module_to_json",
    "pieri_index_set",
    "tensor_generator",
    "tensor_weights",
    "validate_module",
    "weight_add",
    "weight_from_labels",
    "weight_indicator_projector",
    "weight_of_vector",
    "weyl_dimension",
]

DEFAULT_DIM_CAP = 5000


@dataclass(frozen=True)
class DominantLabels:
    """Dynkin labels of the traceless part plus the central scalar b."""

    n: int
    dynkin: tuple
    b: Fraction

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        dyn = tuple(int(a) for a in self.dynkin)
        if len(dyn) != self.n - 1:
            raise ValueError(f"expected {self.n - 1} Dynkin labels, got {len(dyn)}")
        if any(a < 0 for a in dyn):
            raise ValueError("Dynkin labels must be nonnegative")
        object.__setattr__(self, "dynkin", dyn)
        object.__setattr__(self, "b", Fraction(self.b))


def weight_add(mu, c):
    return tuple(m + x for m, x in zip(mu, c))


def dominant_gaps(mu):
    """Consecutive differences of a dominant weight, as nonnegative ints."""
    gaps = []
    for i in range(len(mu) - 1):
        d = mu[i] - mu[i + 1]
        if d != int(d) or d < 0:
            raise ValueError(f"weight {mu} is not dominant: gap {i} is {d}")
        gaps.append(int(d))
    return gaps


def weight_from_labels(labels):
    """Highest weight of the module: mu_j = sum_{i>=j} a_i + (b - sum i*a_i)/n."""
    n = labels.n
    a = labels.dynkin
    shift = Fraction(labels.b - sum((i + 1) * ai for i, ai in enumerate(a)), n)
    return tuple(sum(a[j:]) + shift for j in range(n - 1)) + (shift,)


def weight_of_vector(labels, lowering_counts):
    """Weight reached from the top by k_i applications of each simple lowering.

    `lowering_counts` is the (n-1)-tuple (k_1, ..., k_{n-1}); the result is
    the highest weight minus sum k_i * (eps_i - eps_{i+1}).
    """
    n = labels.n
    k = tuple(int(x) for x in lowering_counts)
    if len(k) != n - 1:
        raise ValueError(f"expected {n - 1} lowering counts")
    if any(x < 0 for x in k):
        raise ValueError("lowering counts must be nonnegative")
    a = labels.dynkin
    shift = Fraction(labels.b - sum((i + 1) * ai for i, ai in enumerate(a)), n)
    if n == 1:
        return (shift,)
    nu = [Fraction(0)] * n
    nu[0] = sum(a) + shift - k[0]
    nu[n - 1] = shift + k[n - 2]
    for j in range(1, n - 1):
        nu[j] = sum(a[j:]) + shift + k[j - 1] - k[j]
    return tuple(nu)


def weyl_dimension(mu):
    """prod_{i<j} (mu_i - mu_j + j - i)/(j - i); requires integer dominant gaps."""
    dominant_gaps(mu)
    n = len(mu)
    num = 1
    den = 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= int(mu[i] - mu[j]) + j - i
            den *= j - i
    assert num % den == 0
    return num // den


def pieri_index_set(mu, j):
    """All c in N^n with |c| = j and c_{s+1} <= mu_s - mu_{s+1}.

    These index the summands mu + c of the tensor product of the module with
    the degree-j symmetric power of the vector representation.  Returned in
    descending lexicographic order (c_1 largest first); c_1 is unconstrained.
    """
    n = len(mu)
    gaps = dominant_gaps(mu)
    out = []

    def rec_capped(pos, remaining, prefix):
        if pos == n:
            if remaining == 0:
                out.append(prefix)
            return
        cap = remaining if pos == 0 else min(remaining, gaps[pos - 1])
        for v in range(cap, -1, -1):
            rec_capped(pos + 1, remaining - v, prefix + (v,))

    rec_capped(0, int(j), ())
    return tuple(out)


class GlModule:
    """Concrete gl(n)-module: weights per basis vector and all E_{i,j} matrices.

    ``action[i][j]`` is the matrix of E_{i+1,j+1} (0-based storage of the
    1-based generators).  Instances are immutable after construction.
    """

    def __init__(self, labels, basis_weights, action, highest_index=0):
        self.labels = labels
        self.n = labels.n
        self.dim = len(basis_weights)
        self.basis_weights = tuple(tuple(w) for w in basis_weights)
        self.action = tuple(tuple(row) for row in action)
        self.highest_index = highest_index

    @property
    def b(self):
        return self.labels.b

    @property
    def highest_weight(self):
        return self.basis_weights[self.highest_index]

    def e(self, i, j):
        """Matrix of E_{i+1,j+1} (arguments 0-based)."""
        return self.action[i][j]

    def __repr__(self):
        return (
            f"GlModule(n={self.n}, dynkin={self.labels.dynkin}, "
            f"b={self.labels.b}, dim={self.dim})"
        )


# -- construction -------------------------------------------------------------


def _wedge_basis(n, d):
    return list(itertools.combinations(range(n), d))


def _wedge_apply(n, i, j, subset):
    """E_{i,j} on a wedge basis element; returns (target_subset, sign) or None."""
    if j not in subset:
        return None
    if i == j:
        return subset, 1
    if i in subset:
        return None
    lst = [i if s == j else s for s in subset]
    lo, hi = min(i, j), max(i, j)
    crossings = sum(1 for s in subset if lo < s < hi and s != j)
    target = tuple(sorted(lst))
    return target, (-1) ** crossings


def build_irreducible(labels, dim_cap=DEFAULT_DIM_CAP):
    """Construct the irreducible module for the given labels.

    Refuses construction when the Weyl dimension exceeds `dim_cap`.
    """
    n = labels.n
    mu = weight_from_labels(labels)
    target_dim = weyl_dimension(mu)
    if target_dim > dim_cap:
        raise DimensionCapError(
            f"module dimension {target_dim} exceeds cap {dim_cap}"
        )

    # a_i copies of the i-th exterior power of the vector representation
    fund = [i + 1 for i, ai in enumerate(labels.dynkin) for _ in range(ai)]
    wedge = {d: _wedge_basis(n, d) for d in set(fund)}

    def key_weight(key):
        w = [0] * n
        for f, d in enumerate(fund):
            for s in wedge[d][key[f]]:
                w[s] += 1
        return tuple(w)

    def tensor_apply(i, j, vec):
        out = {}
        for key, val in vec.items():
            for f, d in enumerate(fund):
                hit = _wedge_apply(n, i, j, wedge[d][key[f]])
                if hit is None:
                    continue
                tgt, sign = hit
                nk = key[:f] + (wedge[d].index(tgt),) + key[f + 1:]
                s = out.get(nk, 0) + sign * val
                if s == 0:
                    out.pop(nk, None)
                else:
                    out[nk] = s
        return out

    top_key = tuple(wedge[d].index(tuple(range(d))) for d in fund)
    top = {top_key: 1}

    # cyclic span of the top vector under the simple lowerings, weight by weight
    flat = {}

    def flatten(vec):
        out = {}
        for key, val in vec.items():
            idx = flat.get(key)
            if idx is None:
                idx = flat[key] = len(flat)
            out[idx] = val
        return out

    spans = {}
    basis_by_weight = {}
    queue = [(top, key_weight(top_key))]
    spans[key_weight(top_key)] = EchelonSpan()
    spans[key_weight(top_key)].insert(flatten(top))
    basis_by_weight[key_weight(top_key)] = [top]
    while queue:
        vec, w = queue.pop(0)
        for j in range(n - 1):
            img = tensor_apply(j + 1, j, vec)
            if not img:
                continue
            tw = tuple(w[t] + (1 if t == j + 1 else 0) - (1 if t == j else 0) for t in range(n))
            span = spans.get(tw)
            if span is None:
                span = spans[tw] = EchelonSpan()
                basis_by_weight[tw] = []
            if span.insert(flatten(img)) is not None:
                basis_by_weight[tw].append(img)
                queue.append((img, tw))

    weights_sorted = sorted(basis_by_weight, reverse=True)
    order = []
    for w in weights_sorted:
        for local, vec in enumerate(basis_by_weight[w]):
            order.append((w, local, vec))
    dim = len(order)
    if dim != target_dim:
        raise ConsistencyViolationError(
            f"lowering closure produced dimension {dim}, Weyl formula says {target_dim}"
        )
    index_of = {}
    pos = 0
    for w in weights_sorted:
        for local in range(len(basis_by_weight[w])):
            index_of[(w, local)] = pos
            pos += 1

    shift = Fraction(labels.b - sum(fund), n)
    basis_weights = [tuple(x + shift for x in w) for (w, _, _) in order]

    action = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            ent = {}
            for col, (w, _, vec) in enumerate(order):
                if i == j:
                    ev = w[i] + shift
                    if ev != 0:
                        ent[(col, col)] = ev
                    continue
                img = tensor_apply(i, j, vec)
                if not img:
                    continue
                tw = tuple(w[t] + (1 if t == i else 0) - (1 if t == j else 0) for t in range(n))
                span = spans.get(tw)
                coords = span.coords(flatten(img)) if span is not None else None
                if coords is None:
                    raise ConsistencyViolationError(
                        "generator image left the lowering-closure span"
                    )
                for local, cval in enumerate(coords):
                    if cval != 0:
                        ent[(index_of[(tw, local)], col)] = cval
            action[i][j] = Matrix(dim, dim, ent)

    mod = GlModule(labels, basis_weights, action, highest_index=0)
    assert mod.highest_weight == mu
    return mod


# -- invariants ----------------------------------------------------------------


def validate_module(V):
    """Check every structural invariant; raises ConsistencyViolationError."""
    n, d = V.n, V.dim

    def fail(msg):
        raise ConsistencyViolationError(f"{V!r}: {msg}")

    idm = Matrix.identity(d)
    for i in range(n):
        expected = Matrix(d, d, {(t, t): V.basis_weights[t][i] for t in range(d)})
        if V.e(i, i) != expected:
            fail(f"E_{i+1},{i+1} is not diagonal with the recorded weights")
    total = Matrix.zeros(d, d)
    for i in range(n):
        total = total + V.e(i, i)
    if total != idm.scale(V.b):
        fail("sum of Cartan generators is not b * Id")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    lhs = V.e(i, j) @ V.e(k, l) - V.e(k, l) @ V.e(i, j)
                    rhs = Matrix.zeros(d, d)
                    if k == j:
                        rhs = rhs + V.e(i, l)
                    if i == l:
                        rhs = rhs - V.e(k, j)
                    if lhs != rhs:
                        fail(f"commutation fails on E_{i+1},{j+1}, E_{k+1},{l+1}")
    for i in range(n):
        for j in range(i + 1, n):
            if V.e(i, j).column(V.highest_index):
                fail(f"highest vector not annihilated by E_{i+1},{j+1}")
    if V.dim != weyl_dimension(V.highest_weight):
        fail("dimension does not match the Weyl formula")
    return True


# -- maximal vectors -----------------------------------------------------------


def highest_weight_vectors(space_dim, raising_ops, weight_projector):
    """Basis of {v : E.v = 0 for all raising ops E} inside im(weight_projector).

    Returns dense tuples, each scaled so its first nonzero entry is 1; the
    empty list is a valid result.
    """
    for op in raising_ops:
        if op.rows != space_dim or op.cols != space_dim:
            raise ValueError("raising operator has wrong shape")
    if weight_projector.rows != space_dim or weight_projector.cols != space_dim:
        raise ValueError("weight projector has wrong shape")
    span = EchelonSpan()
    base = []
    for j in range(space_dim):
        col = weight_projector.column(j)
        if col and span.insert(col) is not None:
            base.append(col)
    if not base:
        return []
    if not raising_ops:
        coeff_kernel = [
            tuple(Fraction(1) if t == s else Fraction(0) for t in range(len(base)))
            for s in range(len(base))
        ]
    else:
        ent = {}
        off = 0
        for op in raising_ops:
            for c, vec in enumerate(base):
                img = op.apply(vec)
                for r, v in img.items():
                    ent[(off + r, c)] = v
            off += space_dim
        coeff_kernel = kernel_basis(Matrix(off, len(base), ent))
    out = []
    for coeffs in coeff_kernel:
        acc = {}
        for x, vec in zip(coeffs, base):
            if x == 0:
                continue
            for r, v in vec.items():
                s = acc.get(r, 0) + x * v
                if s == 0:
                    acc.pop(r, None)
                else:
                    acc[r] = s
        dense = [Fraction(0)] * space_dim
        for r, v in acc.items():
            dense[r] = Fraction(v)
        lead = next((v for v in dense if v != 0), None)
        if lead is None:
            continue
        out.append(tuple(v / lead for v in dense))
    return out


# -- tensor products (diagonal action) ----------------------------------------


def tensor_generator(V, W, i, j):
    """E_{i+1,j+1} acting on V tensor W (V-index major in the flat ordering)."""
    return kron(V.e(i, j), Matrix.identity(W.dim)) + kron(
        Matrix.identity(V.dim), W.e(i, j)
    )


def tensor_weights(V, W):
    return [
        weight_add(wv, ww)
        for wv in V.basis_weights
        for ww in W.basis_weights
    ]


def weight_indicator_projector(weights, target):
    """Diagonal 0/1 projector onto the positions carrying `target`."""
    d = len(weights)
    return Matrix(d, d, {(t, t): 1 for t, w in enumerate(weights) if tuple(w) == tuple(target)})


# -- serialization -------------------------------------------------------------


def module_to_json(V):
    entries = []
    for i in range(V.n):
        for j in range(V.n):
            for (r, c), v in sorted(V.e(i, j).entries.items()):
                f = Fraction(v)
                entries.append([i, j, r, c, f.numerator, f.denominator])
    return {
        "n": V.n,
        "dynkin": list(V.labels.dynkin),
        "b": format_rational(V.b),
        "dim": V.dim,
        "highest_index": V.highest_index,
        "weights": [[format_rational(x) for x in w] for w in V.basis_weights],
        "action": entries,
    }


def module_from_json(doc):
    labels = DominantLabels(doc["n"], tuple(doc["dynkin"]), parse_rational(doc["b"]))
    n, d = doc["n"], doc["dim"]
    weights = [tuple(parse_rational(x) for x in w) for w in doc["weights"]]
    grids = [[{} for _ in range(n)] for _ in range(n)]
    for i, j, r, c, num, den in doc["action"]:
        grids[i][j][(r, c)] = Fraction(num, den)
    action = [[Matrix(d, d, grids[i][j]) for j in range(n)] for i in range(n)]
    return GlModule(labels, weights, action, highest_index=doc["highest_index"])


# -- cache of constructed modules (sweep helper) --------------------------------

_module_cache = {}
_module_cache_lock = threading.Lock()


def cached_module(n, dynkin, b, dim_cap=DEFAULT_DIM_CAP):
    """Memoized build_irreducible; modules are immutable so sharing is safe."""
    key = (n, tuple(dynkin), Fraction(b), dim_cap)
    with _module_cache_lock:
        mod = _module_cache.get(key)
    if mod is None:
        mod = build_irreducible(DominantLabels(n, tuple(dynkin), Fraction(b)), dim_cap)
        with _module_cache_lock:
            _module_cache[key] = mod
    return mod
