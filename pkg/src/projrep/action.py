"""Polynomial vector fields acting on graded tensor spaces.

The Lie algebra spanned by the derivatives, the scalings x_i d_j, and the
pseudo-translations p_i = x_i * sum_j x_j d_j is a copy of sl(n+1) inside the
polynomial vector fields.  Twisting by a gl(n)-module V turns the polynomial
space tensor V into a representation of that copy; every operator here is
realized as an exact sparse matrix per graded degree.

Degrees: derivatives lower by one, scalings preserve, pseudo-translations
raise by one.  Monomials are exponent tuples, ordered descending
lexicographically within a degree (x_1 before x_2, so the pure x_1 power
comes first); inside one monomial the module basis index runs in order.
"""

from __future__ import annotations

import math
import threading
import weakref
from dataclasses import dataclass
from fractions import Fraction

from .errors import UnsupportedOperatorError
from .linalg import Matrix

__all__ = [
    "ChevalleySet",
    "GradedBasis",
    "GradedElement",
    "WittElement",
    "act",
    "chevalley_generators",
    "derivative_op",
    "graded_basis",
    "graded_dimension",
    "monomials_of_degree",
    "operator_matrix",
    "operator_matrix_json",
    "projective_components",
    "pseudo_translation_op",
    "scaling_op",
    "spanning_operators",
    "triangle_delta",
    "verify_bracket_consistency",
]


def _norm(v):
    if isinstance(v, float):
        raise TypeError(f"inexact scalar {v!r}; use int or Fraction")
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


# -- symbolic vector fields ----------------------------------------------------


class WittElement:
    """A polynomial vector field sum_i f_i d_i, stored as {(monomial, i): coeff}.

    Immutable and hashable; usable as a cache key.
    """

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n, terms=None):
        self.n = n
        clean = {}
        if terms:
            for (mono, i), v in terms.items():
                v = _norm(v)
                if v == 0:
                    continue
                if len(mono) != n or not (0 <= i < n):
                    raise ValueError("malformed vector-field term")
                clean[(tuple(mono), i)] = v
        self.terms = clean
        self._hash = None

    def is_zero(self):
        return not self.terms

    def degree_shift(self):
        """Uniform degree shift |monomial| - 1, or None for 0 / mixed elements."""
        shifts = {sum(m) - 1 for (m, _) in self.terms}
        if len(shifts) == 1:
            return shifts.pop()
        return None

    def __add__(self, other):
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        terms = dict(self.terms)
        for k, v in other.terms.items():
            s = terms.get(k, 0) + v
            if s == 0:
                terms.pop(k, None)
            else:
                terms[k] = s
        return WittElement(self.n, terms)

    def __neg__(self):
        return WittElement(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        if scalar == 0:
            return WittElement(self.n)
        return WittElement(self.n, {k: v * scalar for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, WittElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, tuple(sorted(self.terms.items()))))
        return self._hash

    def bracket(self, other):
        """Lie bracket of vector fields: coefficients cross-differentiate."""
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        n = self.n
        a = _by_direction(self)
        b = _by_direction(other)
        out = {}
        for i in range(n):
            acc = {}
            for j in range(n):
                if j in a and i in b:
                    _poly_acc(acc, _poly_mul(a[j], _poly_diff(b[i], j)), 1)
                if j in b and i in a:
                    _poly_acc(acc, _poly_mul(b[j], _poly_diff(a[i], j)), -1)
            for mono, v in acc.items():
                if v != 0:
                    out[(mono, i)] = v
        return WittElement(n, out)

    def __repr__(self):
        if not self.terms:
            return "WittElement(0)"
        bits = []
        for (mono, i), v in sorted(self.terms.items()):
            m = "*".join(f"x{t+1}^{e}" if e > 1 else f"x{t+1}" for t, e in enumerate(mono) if e)
            bits.append(f"{v}*{m or '1'}*d{i+1}")
        return "WittElement(" + " + ".join(bits) + ")"


def _by_direction(op):
    polys = {}
    for (mono, i), v in op.terms.items():
        polys.setdefault(i, {})[mono] = v
    return polys


def _poly_mul(p, q):
    out = {}
    for ma, va in p.items():
        for mb, vb in q.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            s = out.get(m, 0) + va * vb
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
    return out


def _poly_diff(p, j):
    out = {}
    for mono, v in p.items():
        if mono[j]:
            m = mono[:j] + (mono[j] - 1,) + mono[j + 1:]
            out[m] = out.get(m, 0) + v * mono[j]
    return out


def _poly_acc(acc, p, sign):
    for m, v in p.items():
        s = acc.get(m, 0) + sign * v
        if s == 0:
            acc.pop(m, None)
        else:
            acc[m] = s


def _unit(n, i):
    return tuple(1 if t == i else 0 for t in range(n))


def derivative_op(n, i):
    """d_{x_{i+1}} (argument 0-based)."""
    return WittElement(n, {((0,) * n, i): 1})


def scaling_op(n, i, j):
    """x_{i+1} d_{x_{j+1}} (arguments 0-based)."""
    return WittElement(n, {(_unit(n, i), j): 1})


def pseudo_translation_op(n, i):
    """p_{i+1} = x_{i+1} * sum_j x_j d_j (argument 0-based)."""
    terms = {}
    ei = _unit(n, i)
    for j in range(n):
        mono = tuple(a + b for a, b in zip(ei, _unit(n, j)))
        terms[(mono, j)] = terms.get((mono, j), 0) + 1
    return WittElement(n, terms)


def spanning_operators(n):
    """The full spanning set: scalings, derivatives, pseudo-translations."""
    ops = []
    for i in range(n):
        for j in range(n):
            ops.append((f"x{i+1}d{j+1}", scaling_op(n, i, j)))
    for i in range(n):
        ops.append((f"d{i+1}", derivative_op(n, i)))
    for i in range(n):
        ops.append((f"p{i+1}", pseudo_translation_op(n, i)))
    return ops


@dataclass(frozen=True)
class ChevalleySet:
    """Chevalley generators of the embedded sl(n+1)."""

    e: tuple
    f: tuple
    h: tuple


def chevalley_generators(n):
    """h_i, e_i, f_i for i < n from the scalings; the last triple uses p and d."""
    if n < 1:
        raise ValueError("n must be >= 1")
    e, f, h = [], [], []
    for i in range(n - 1):
        h.append(scaling_op(n, i, i) - scaling_op(n, i + 1, i + 1))
        e.append(scaling_op(n, i, i + 1))
        f.append(scaling_op(n, i + 1, i))
    hn = scaling_op(n, n - 1, n - 1)
    for l in range(n):
        hn = hn + scaling_op(n, l, l)
    h.append(hn)
    e.append(pseudo_translation_op(n, n - 1))
    f.append(-1 * derivative_op(n, n - 1))
    return ChevalleySet(tuple(e), tuple(f), tuple(h))


# -- decomposition into the projective span -------------------------------------


def projective_components(op):
    """Split op into derivative, scaling and pseudo-translation coefficients.

    Returns (deriv, gl, pseudo) keyed by 0-based indices.  Raises
    UnsupportedOperatorError when op is not a combination of the spanning set
    (the reconstruction from the extracted coefficients must reproduce op
    exactly).
    """
    n = op.n
    deriv, gl, pseudo = {}, {}, {}
    for (mono, d), v in op.terms.items():
        deg = sum(mono)
        if deg == 0:
            deriv[d] = deriv.get(d, 0) + v
        elif deg == 1:
            a = mono.index(1)
            gl[(a, d)] = gl.get((a, d), 0) + v
        elif deg == 2:
            # the x_i^2 d_i term appears in p_i alone, with coefficient 1
            if mono[d] == 2 and all(mono[t] == 0 for t in range(n) if t != d):
                pseudo[d] = pseudo.get(d, 0) + v
        else:
            raise UnsupportedOperatorError(f"term of degree {deg} in {op!r}")
    rebuilt = WittElement(n)
    for i, v in deriv.items():
        rebuilt = rebuilt + v * derivative_op(n, i)
    for (i, j), v in gl.items():
        rebuilt = rebuilt + v * scaling_op(n, i, j)
    for i, v in pseudo.items():
        rebuilt = rebuilt + v * pseudo_translation_op(n, i)
    if rebuilt != op:
        raise UnsupportedOperatorError(f"{op!r} is outside the projective span")
    return deriv, gl, pseudo


# -- graded elements and bases ---------------------------------------------------


class GradedElement:
    """Element of the degree-k graded piece: {(exponent tuple, basis index): coeff}."""

    __slots__ = ("degree", "coords")

    def __init__(self, degree, coords=None):
        self.degree = degree
        clean = {}
        if coords:
            for (mono, j), v in coords.items():
                v = _norm(v)
                if v == 0:
                    continue
                if sum(mono) != degree:
                    raise ValueError(
                        f"monomial {mono} has degree {sum(mono)}, element is graded of degree {degree}"
                    )
                clean[(tuple(mono), j)] = v
        self.coords = clean

    def is_zero(self):
        return not self.coords

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.degree == other.degree and self.coords == other.coords

    def __repr__(self):
        return f"GradedElement(degree={self.degree}, nnz={len(self.coords)})"


def monomials_of_degree(n, k):
    """Exponent tuples of total degree k, descending lexicographic order."""
    if k < 0:
        return []
    out = []

    def rec(pos, rem, prefix):
        if pos == n - 1:
            out.append(prefix + (rem,))
            return
        for v in range(rem, -1, -1):
            rec(pos + 1, rem - v, prefix + (v,))

    if n == 0:
        return [()] if k == 0 else []
    rec(0, k, ())
    return out


def graded_dimension(V, k):
    if k < 0:
        return 0
    return math.comb(k + V.n - 1, V.n - 1) * V.dim


class GradedBasis:
    """Ordered basis of one graded piece, with label-to-index lookup."""

    __slots__ = ("degree", "labels", "index")

    def __init__(self, V, degree):
        self.degree = degree
        labels = []
        if degree >= 0:
            for mono in monomials_of_degree(V.n, degree):
                for j in range(V.dim):
                    labels.append((mono, j))
        self.labels = tuple(labels)
        self.index = {lab: t for t, lab in enumerate(labels)}

    @property
    def dim(self):
        return len(self.labels)

    def to_vector(self, element):
        """Sparse {position: value} coordinates of a GradedElement."""
        if element.degree != self.degree and not element.is_zero():
            raise ValueError("degree mismatch")
        return {self.index[lab]: v for lab, v in element.coords.items()}

    def from_vector(self, vec):
        return GradedElement(self.degree, {self.labels[t]: v for t, v in vec.items()})


# -- the action ------------------------------------------------------------------


def _shift_mono(mono, up=None, down=None):
    m = list(mono)
    if up is not None:
        m[up] += 1
    if down is not None:
        m[down] -= 1
    return tuple(m)


def _apply_scaling(i, j, coeff, coords, V, out):
    """x_{i+1} d_{x_{j+1}} on f tensor v: differentiate-and-shift plus E_{i,j}."""
    for (mono, t), val in coords.items():
        c = coeff * val
        if mono[j]:
            m = _shift_mono(mono, up=i, down=j)
            key = (m, t)
            s = out.get(key, 0) + c * mono[j]
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        for r, a in V.e(i, j).column(t).items():
            key = (mono, r)
            s = out.get(key, 0) + c * a
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s


def _apply_derivative(i, coeff, coords, out):
    """d_{x_{i+1}} on f tensor v: plain polynomial derivative."""
    for (mono, t), val in coords.items():
        if mono[i]:
            key = (_shift_mono(mono, down=i), t)
            s = out.get(key, 0) + coeff * val * mono[i]
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s


def _apply_pseudo(i, coeff, coords, V, out):
    """p_{i+1} on f tensor v: degree-raising polynomial part, central part,
    and the summed E_{i,j} twist."""
    n = V.n
    b = V.b
    for (mono, t), val in coords.items():
        c = coeff * val
        w = c * (sum(mono) + b)
        if w != 0:
            key = (_shift_mono(mono, up=i), t)
            s = out.get(key, 0) + w
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        for j in range(n):
            col = V.e(i, j).column(t)
            if not col:
                continue
            m = _shift_mono(mono, up=j)
            for r, a in col.items():
                key = (m, r)
                s = out.get(key, 0) + c * a
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s


def act(op, element, V):
    """Apply a projective-span operator to a graded element.

    The operator must have a uniform degree shift (all spanning elements and
    their brackets do); the result lives in degree k+shift.
    """
    if op.n != V.n:
        raise ValueError("dimension mismatch between operator and module")
    deriv, gl, pseudo = projective_components(op)
    shifts = set()
    if deriv:
        shifts.add(-1)
    if gl:
        shifts.add(0)
    if pseudo:
        shifts.add(1)
    if len(shifts) > 1:
        raise UnsupportedOperatorError(
            "operator mixes degree shifts; apply its graded components separately"
        )
    shift = shifts.pop() if shifts else 0
    out = {}
    for i, coeff in deriv.items():
        _apply_derivative(i, coeff, element.coords, out)
    for (i, j), coeff in gl.items():
        _apply_scaling(i, j, coeff, element.coords, V, out)
    for i, coeff in pseudo.items():
        _apply_pseudo(i, coeff, element.coords, V, out)
    return GradedElement(element.degree + shift, out)


# -- per-degree matrices (cached) -------------------------------------------------

_cache_lock = threading.Lock()
_caches = weakref.WeakKeyDictionary()


def _cache_for(V):
    with _cache_lock:
        cache = _caches.get(V)
        if cache is None:
            cache = _caches[V] = {"basis": {}, "matrix": {}}
        return cache


def graded_basis(V, k):
    """Ordered basis of the degree-k piece (monomial descending-lex, then index)."""
    cache = _cache_for(V)
    with _cache_lock:
        gb = cache["basis"].get(k)
    if gb is None:
        gb = GradedBasis(V, k)
        with _cache_lock:
            cache["basis"][k] = gb
    return gb


def operator_matrix(op, V, k, shift=None):
    """Exact matrix of `op` from the degree-k basis to the shifted target basis.

    `shift` is only consulted for the zero operator, whose target degree is
    otherwise undetermined.
    """
    cache = _cache_for(V)
    key = (op, k, shift)
    with _cache_lock:
        m = cache["matrix"].get(key)
    if m is not None:
        return m
    if op.is_zero():
        if shift is None:
            raise ValueError("zero operator needs an explicit degree shift")
        op_shift = shift
    else:
        op_shift = op.degree_shift()
        if op_shift is None:
            raise UnsupportedOperatorError("operator mixes degree shifts")
        if shift is not None and shift != op_shift:
            raise ValueError("declared shift contradicts the operator")
    src = graded_basis(V, k)
    dst = graded_basis(V, k + op_shift)
    ent = {}
    if not op.is_zero():
        for c, lab in enumerate(src.labels):
            img = act(op, GradedElement(k, {lab: 1}), V)
            for tlab, v in img.coords.items():
                ent[(dst.index[tlab], c)] = v
    m = Matrix(dst.dim, src.dim, ent, row_labels=dst.labels, col_labels=src.labels)
    with _cache_lock:
        cache["matrix"][key] = m
    return m


def operator_matrix_json(op, V, k, shift=None):
    """Sparse-triplet document for external inspection of one operator matrix."""
    from .linalg import format_rational

    m = operator_matrix(op, V, k, shift=shift)
    return {
        "degree": k,
        "rows": m.rows,
        "cols": m.cols,
        "entries": [
            [r, c, format_rational(v)] for (r, c), v in sorted(m.entries.items())
        ],
    }


def triangle_delta(i, j, k, V, degree=0):
    """Matrix of the degree-preserving bookkeeping operator on a graded piece.

    For i != j this is x_{j+1} d_{x_{i+1}}; on the diagonal it is the Euler
    field plus x_{i+1} d_{x_{i+1}} plus the constant k-1, where k counts the
    raising factors being peeled off (arguments 0-based).
    """
    n = V.n
    if i != j:
        return operator_matrix(scaling_op(n, j, i), V, degree)
    op = scaling_op(n, i, i)
    for l in range(n):
        op = op + scaling_op(n, l, l)
    m = operator_matrix(op, V, degree)
    if k != 1:
        m = m + Matrix.identity(m.rows).scale(k - 1)
    return m


def verify_bracket_consistency(n, V, k_max):
    """Check that symbolic brackets match matrix commutators on all pieces.

    For every unordered pair from the spanning set and every degree up to
    k_max the matrix of the symbolic bracket must equal the commutator of the
    operator matrices, exactly.
    """
    ops = spanning_operators(n)
    for a in range(len(ops)):
        name_u, u = ops[a]
        du = u.degree_shift()
        for b_ in range(a + 1, len(ops)):
            name_w, w = ops[b_]
            dw = w.degree_shift()
            bracket = u.bracket(w)
            for k in range(k_max + 1):
                lhs = operator_matrix(bracket, V, k, shift=du + dw)
                rhs = (
                    operator_matrix(u, V, k + dw) @ operator_matrix(w, V, k)
                    - operator_matrix(w, V, k + du) @ operator_matrix(u, V, k)
                )
                if lhs != rhs:
                    return False
    return True
