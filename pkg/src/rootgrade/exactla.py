"""Exact sparse linear algebra over cyclotomic scalars.

Vectors are sparse dicts (index → nonzero Scalar); matrices are row-major
tuples of such dicts.  Echelon forms use the first nonzero row in column
order as pivot, so every canonical form is reproducible across runs.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import AmbientMismatch, NonCommuting, NotSquare
from .numfield import Scalar, from_rational, one, zero

SVec = dict[int, Scalar]


# -- sparse vector helpers ----------------------------------------------------

def svec(entries: Iterable[tuple[int, Scalar]]) -> SVec:
    return {i: v for i, v in entries if v}

def svec_add(a: SVec, b: SVec) -> SVec:
    out = dict(a)
    for i, v in b.items():
        w = out.get(i)
        s = v if w is None else w + v
        if s:
            out[i] = s
        else:
            out.pop(i, None)
    return out

def svec_scale(a: SVec, f: Scalar) -> SVec:
    if not f:
        return {}
    return {i: f * v for i, v in a.items()}

def svec_sub_scaled(a: SVec, f: Scalar, b: SVec) -> SVec:
    """a − f·b in one pass."""
    if not f:
        return dict(a)
    out = dict(a)
    for i, v in b.items():
        w = out.get(i)
        s = -(f * v) if w is None else w - f * v
        if s:
            out[i] = s
        else:
            out.pop(i, None)
    return out

def svec_dot(a: SVec, b: SVec, order: int) -> Scalar:
    if len(b) < len(a):
        a, b = b, a
    total = zero(order)
    for i, v in a.items():
        w = b.get(i)
        if w is not None:
            total = total + v * w
    return total

def svec_dense(a: SVec, n: int, order: int) -> list[Scalar]:
    z = zero(order)
    out = [z] * n
    for i, v in a.items():
        out[i] = v
    return out

def svec_from_dense(row: Sequence, order: int) -> SVec:
    out: SVec = {}
    for i, v in enumerate(row):
        s = v if isinstance(v, Scalar) else from_rational(order, Fraction(v))
        if s:
            out[i] = s
    return out


class Matrix:
    """Sparse exact matrix; stored entries are never zero."""

    __slots__ = ("rows", "cols", "data", "order")

    def __init__(self, rows: int, cols: int, data: Sequence[SVec], order: int):
        assert len(data) == rows
        self.rows = rows
        self.cols = cols
        # strip explicitly stored zeros: elimination relies on sparsity = support
        self.data = tuple(
            dict(r) if all(r.values()) else {k: v for k, v in r.items() if v}
            for r in data
        )
        self.order = order

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence], order: int) -> "Matrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls(rows, cols, [svec_from_dense(r, order) for r in dense], order)

    @classmethod
    def identity(cls, n: int, order: int) -> "Matrix":
        e = one(order)
        return cls(n, n, [{i: e} for i in range(n)], order)

    @classmethod
    def zero(cls, rows: int, cols: int, order: int) -> "Matrix":
        return cls(rows, cols, [{} for _ in range(rows)], order)

    def entry(self, i: int, j: int) -> Scalar:
        return self.data[i].get(j, zero(self.order))

    def is_zero(self) -> bool:
        return all(not r for r in self.data)

    def apply(self, v: SVec) -> SVec:
        """Matrix·vector with the vector as a sparse column."""
        out: SVec = {}
        for i, row in enumerate(self.data):
            s = svec_dot(row, v, self.order)
            if s:
                out[i] = s
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        assert self.cols == other.rows
        data: list[SVec] = []
        for row in self.data:
            acc: SVec = {}
            for k, f in row.items():
                brow = other.data[k]
                for j, v in brow.items():
                    w = acc.get(j)
                    s = f * v if w is None else w + f * v
                    if s:
                        acc[j] = s
                    else:
                        acc.pop(j, None)
            data.append(acc)
        return Matrix(self.rows, other.cols, data, self.order)

    def __add__(self, other: "Matrix") -> "Matrix":
        assert (self.rows, self.cols) == (other.rows, other.cols)
        return Matrix(
            self.rows, self.cols,
            [svec_add(a, b) for a, b in zip(self.data, other.data)], self.order,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(from_rational(self.order, -1))

    def scale(self, f: Scalar) -> "Matrix":
        return Matrix(self.rows, self.cols, [svec_scale(r, f) for r in self.data], self.order)

    def transpose(self) -> "Matrix":
        data: list[SVec] = [{} for _ in range(self.cols)]
        for i, row in enumerate(self.data):
            for j, v in row.items():
                data[j][i] = v
        return Matrix(self.cols, self.rows, data, self.order)

    def trace(self) -> Scalar:
        total = zero(self.order)
        for i, row in enumerate(self.data):
            v = row.get(i)
            if v is not None:
                total = total + v
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            (self.rows, self.cols, self.order) == (other.rows, other.cols, other.order)
            and self.data == other.data
        )

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols}, {sum(len(r) for r in self.data)} nnz)"


# -- echelon forms -------------------------------------------------------------

def _rref_rows(vectors: Sequence[SVec], cols: int) -> tuple[list[SVec], list[int]]:
    work = [dict(r) for r in vectors if r]
    pivots: list[int] = []
    r = 0
    for col in range(cols):
        sel = None
        for i in range(r, len(work)):
            if col in work[i]:
                sel = i
                break
        if sel is None:
            continue
        work[r], work[sel] = work[sel], work[r]
        prow = work[r]
        pv = prow[col]
        if pv != 1:
            inv = pv.inverse()
            prow = {j: inv * v for j, v in prow.items()}
            work[r] = prow
        for i in range(len(work)):
            if i != r:
                f = work[i].get(col)
                if f is not None:
                    work[i] = svec_sub_scaled(work[i], f, prow)
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Unique reduced row-echelon form and its pivot columns."""
    rows, pivots = _rref_rows(m.data, m.cols)
    return Matrix(len(rows), m.cols, rows, m.order), pivots


class Subspace:
    """A subspace held by its canonical reduced row-echelon basis."""

    __slots__ = ("ambient", "order", "basis", "pivots")

    def __init__(self, ambient: int, order: int, basis: Sequence[SVec], pivots: Sequence[int]):
        self.ambient = ambient
        self.order = order
        self.basis = tuple(dict(r) for r in basis)
        self.pivots = tuple(pivots)

    @classmethod
    def from_vectors(cls, vectors: Sequence[SVec], ambient: int, order: int) -> "Subspace":
        rows, pivots = _rref_rows(vectors, ambient)
        return cls(ambient, order, rows, pivots)

    @classmethod
    def full(cls, ambient: int, order: int) -> "Subspace":
        e = one(order)
        return cls(ambient, order, [{i: e} for i in range(ambient)], range(ambient))

    @classmethod
    def zero(cls, ambient: int, order: int) -> "Subspace":
        return cls(ambient, order, [], [])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _check_ambient(self, other: "Subspace") -> None:
        if self.ambient != other.ambient:
            raise AmbientMismatch(
                f"subspaces of ambient dimensions {self.ambient} and {other.ambient}"
            )

    def reduce(self, v: SVec) -> SVec:
        """Remainder of v after elimination against the echelon basis."""
        out = dict(v)
        for p, row in zip(self.pivots, self.basis):
            f = out.get(p)
            if f is not None:
                out = svec_sub_scaled(out, f, row)
        return out

    def contains_vector(self, v: SVec) -> bool:
        return not self.reduce(v)

    def contains(self, other: "Subspace") -> bool:
        self._check_ambient(other)
        return all(self.contains_vector(row) for row in other.basis)

    def coords(self, v: SVec) -> list[Scalar]:
        """Coordinates of a member vector in the echelon basis (pivot read-off)."""
        cs = [v.get(p, zero(self.order)) for p in self.pivots]
        assert not self.reduce(v), "vector lies outside the subspace"
        return cs

    def from_coords(self, coeffs: Sequence[Scalar]) -> SVec:
        out: SVec = {}
        for c, row in zip(coeffs, self.basis):
            if c:
                out = svec_add(out, svec_scale(row, c))
        return out

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        return Subspace.from_vectors(list(self.basis) + list(other.basis), self.ambient, self.order)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        # coefficient pairs (a, b) with a·basis₁ = b·basis₂ form the kernel of
        # the stacked transposed bases; read off the first block.
        nu = self.dim
        rows_t: list[SVec] = [{} for _ in range(self.ambient)]
        for k, row in enumerate(self.basis):
            for i, v in row.items():
                rows_t[i][k] = v
        for k, row in enumerate(other.basis):
            for i, v in row.items():
                rows_t[i][nu + k] = -v
        ker = kernel(Matrix(self.ambient, nu + other.dim, rows_t, self.order))
        vectors = []
        for coeff in ker.basis:
            acc: SVec = {}
            for k, f in coeff.items():
                if k < nu:
                    acc = svec_add(acc, svec_scale(self.basis[k], f))
            vectors.append(acc)
        return Subspace.from_vectors(vectors, self.ambient, self.order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            (self.ambient, self.order, self.pivots) == (other.ambient, other.order, other.pivots)
            and self.basis == other.basis
        )

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of {self.ambient})"


def kernel(m: Matrix) -> Subspace:
    """{x : M·x = 0} with canonical echelon basis."""
    r, pivots = rref(m)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    e = one(m.order)
    vectors: list[SVec] = []
    for f in free:
        v: SVec = {f: e}
        for prow, p in zip(r.data, pivots):
            c = prow.get(f)
            if c is not None:
                v[p] = -c
        vectors.append(v)
    return Subspace.from_vectors(vectors, m.cols, m.order)


def solve(a: Matrix, b: SVec) -> Optional[list[Scalar]]:
    """One solution of A·x = b (dense list), or None when inconsistent."""
    aug_rows = []
    for i, row in enumerate(a.data):
        r = dict(row)
        v = b.get(i)
        if v:
            r[a.cols] = v
        aug_rows.append(r)
    rows, pivots = _rref_rows(aug_rows, a.cols + 1)
    if a.cols in pivots:
        return None
    x = [zero(a.order)] * a.cols
    for p, row in zip(pivots, rows):
        x[p] = row.get(a.cols, zero(a.order))
    return x


def invert(m: Matrix) -> Optional[Matrix]:
    """Inverse of a square matrix, or None when singular (mirrors solve)."""
    if m.rows != m.cols:
        raise NotSquare(f"cannot invert a {m.rows}x{m.cols} matrix")
    n = m.rows
    e = one(m.order)
    aug = []
    for i in range(n):
        row = dict(m.data[i])
        row[n + i] = e
        aug.append(row)
    rows, pivots = _rref_rows(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        return None
    inv_rows = [
        {j - n: v for j, v in row.items() if j >= n} for row in rows[:n]
    ]
    return Matrix(n, n, inv_rows, m.order)


# -- polynomials over Scalar (low→high coefficient lists) ---------------------

def poly_trim(p: list[Scalar]) -> list[Scalar]:
    while p and not p[-1]:
        p.pop()
    return p

def poly_mul(a: Sequence[Scalar], b: Sequence[Scalar], order: int) -> list[Scalar]:
    out = [zero(order)] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = out[i + j] + ai * bj
    return poly_trim(out)

def poly_divmod(a: Sequence[Scalar], b: Sequence[Scalar], order: int) -> tuple[list[Scalar], list[Scalar]]:
    a = list(a)
    poly_trim(a)
    db = len(b) - 1
    inv_lead = b[-1].inverse()
    q = [zero(order)] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        f = a[-1] * inv_lead
        pos = len(a) - 1 - db
        q[pos] = f
        for i in range(db + 1):
            a[pos + i] = a[pos + i] - f * b[i]
        poly_trim(a)
        if not any(a):
            a = []
    return poly_trim(q), a

def poly_gcd(a: Sequence[Scalar], b: Sequence[Scalar], order: int) -> list[Scalar]:
    ra, rb = poly_trim(list(a)), poly_trim(list(b))
    while rb:
        _, r = poly_divmod(ra, rb, order)
        ra, rb = rb, r
    if ra:
        inv = ra[-1].inverse()
        ra = [inv * c for c in ra]
    return ra

def poly_derivative(p: Sequence[Scalar], order: int) -> list[Scalar]:
    return poly_trim([k * c for k, c in enumerate(p)][1:])

def poly_is_squarefree(p: Sequence[Scalar], order: int) -> bool:
    d = poly_derivative(p, order)
    if not d:
        return len(poly_trim(list(p))) <= 1
    return len(poly_gcd(p, d, order)) == 1

def poly_eval(p: Sequence[Scalar], x: Scalar) -> Scalar:
    acc = zero(x.order)
    for c in reversed(list(p)):
        acc = acc * x + c
    return acc

def rational_roots(p: Sequence[Scalar]) -> Optional[list[Fraction]]:
    """All rational roots of p, or None if p has a non-rational coefficient.

    Uses the rational-root theorem on the denominator-cleared polynomial;
    multiplicities are not repeated in the result.
    """
    coeffs: list[Fraction] = []
    for c in p:
        if not c.is_rational():
            return None
        coeffs.append(c.as_rational())
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        return []
    roots: list[Fraction] = []
    low = 0
    while coeffs[low] == 0:
        low += 1
    if low:
        roots.append(Fraction(0))
        coeffs = coeffs[low:]
    from math import lcm

    den = lcm(*(c.denominator for c in coeffs)) if len(coeffs) > 1 else coeffs[0].denominator
    ints = [int(c * den) for c in coeffs]
    if len(ints) == 1:
        return roots
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(n: int) -> list[int]:
        out = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
        return sorted(set(out + [n // d for d in out]))

    for num in divisors(a0):
        for dq in divisors(an):
            for sign in (1, -1):
                cand = Fraction(sign * num, dq)
                if cand in roots:
                    continue
                acc = Fraction(0)
                for c in reversed(ints):
                    acc = acc * cand + c
                if acc == 0:
                    roots.append(cand)
    return sorted(roots)


# -- spectra -------------------------------------------------------------------

def minimal_polynomial(op: Matrix) -> list[Scalar]:
    """Monic minimal polynomial of a square matrix via iterated Krylov spans."""
    if op.rows != op.cols:
        raise NotSquare(f"minimal polynomial of a {op.rows}x{op.cols} matrix")
    n, order = op.rows, op.order
    if n == 0:
        return [one(order)]
    result = [one(order)]  # minimal polynomial found so far (starts as 1)
    covered = Subspace.zero(n, order)
    e1 = one(order)
    for start in range(n):
        seed: SVec = {start: e1}
        if covered.contains_vector(seed):
            continue
        # grow the Krylov chain of `seed` until linear dependence
        chain: list[SVec] = [seed]
        span_rows: list[SVec] = []
        span_pivots: list[int] = []
        v = seed
        while True:
            # reduce v against current echelon rows
            rem = dict(v)
            for p, row in zip(span_pivots, span_rows):
                f = rem.get(p)
                if f is not None:
                    rem = svec_sub_scaled(rem, f, row)
            if not rem:
                break
            p = min(rem)
            inv = rem[p].inverse()
            norm = {j: inv * w for j, w in rem.items()}
            # keep echelon property: eliminate p from existing rows
            for k in range(len(span_rows)):
                f = span_rows[k].get(p)
                if f is not None:
                    span_rows[k] = svec_sub_scaled(span_rows[k], f, norm)
            span_rows.append(norm)
            span_pivots.append(p)
            v = op.apply(v)
            chain.append(v)
        # the last chain vector is a combination of the previous ones:
        # solve chain[:-1]·c = chain[-1] for the annihilator of `seed`
        k = len(chain) - 1
        sys = Matrix(
            n, k,
            [{j: chain[j][i] for j in range(k) if i in chain[j]} for i in range(n)],
            order,
        )
        c = solve(sys, chain[-1])
        assert c is not None, "Krylov dependence must be solvable"
        ann = [-ci for ci in c] + [one(order)]  # monic: x^k − Σ cᵢ xⁱ
        # result = lcm(result, ann)
        g = poly_gcd(result, ann, order)
        q, r = poly_divmod(ann, g, order)
        assert not r
        result = poly_mul(result, q, order)
        covered = covered.sum(Subspace.from_vectors(chain[:-1], n, order))
        if covered.dim == n:
            break
    # postcondition: result(op) annihilates every seed vector
    return result


def eigen_decompose(
    op: Matrix, candidates: Sequence[Scalar]
) -> tuple[list[tuple[Scalar, Subspace]], bool]:
    """Eigenspaces over the supplied candidates; flag is True iff they exhaust."""
    if op.rows != op.cols:
        raise NotSquare(f"eigen decomposition of a {op.rows}x{op.cols} matrix")
    n, order = op.rows, op.order
    seen: set = set()
    spaces: list[tuple[Scalar, Subspace]] = []
    total = 0
    for lam_raw in candidates:
        lam = lam_raw if isinstance(lam_raw, Scalar) else from_rational(order, lam_raw)
        if lam in seen:
            continue
        seen.add(lam)
        shifted = op - Matrix.identity(n, order).scale(lam)
        ker = kernel(shifted)
        if ker.dim:
            spaces.append((lam, ker))
            total += ker.dim
    return spaces, total == n


def _restrict(op: Matrix, space: Subspace) -> Matrix:
    """Matrix of op on an invariant subspace, in the subspace's echelon basis."""
    cols = []
    for row in space.basis:
        img = op.apply(row)
        cols.append(space.coords(img))
    k, order = space.dim, op.order
    data: list[SVec] = [{} for _ in range(k)]
    for j, col in enumerate(cols):
        for i, v in enumerate(col):
            if v:
                data[i][j] = v
    return Matrix(k, k, data, order)


def simultaneous_eigenspaces(
    ops: Sequence[Matrix],
    candidates: Sequence[Sequence[Scalar]],
    *,
    dim: int | None = None,
    order: int | None = None,
) -> tuple[list[tuple[tuple[Scalar, ...], Subspace]], bool]:
    """Joint eigenspace refinement of commuting operators.

    Returns (blocks, complete); each block is (eigenvalue tuple, subspace).
    Incompleteness (candidates missing part of some spectrum) is reported in
    the flag, not raised.
    """
    if ops:
        dim = ops[0].rows
        order = ops[0].order
        for k, op in enumerate(ops):
            if op.rows != op.cols or op.rows != dim:
                raise NotSquare(f"operator {k} is {op.rows}x{op.cols}, expected {dim}x{dim}")
        for i in range(len(ops)):
            for j in range(i + 1, len(ops)):
                if ops[i] @ ops[j] != ops[j] @ ops[i]:
                    raise NonCommuting(f"operators {i} and {j} do not commute")
    else:
        assert dim is not None and order is not None, "empty operator list needs dim and order"
        return [((), Subspace.full(dim, order))], True
    blocks: list[tuple[tuple[Scalar, ...], Subspace]] = [((), Subspace.full(dim, order))]
    complete = True
    for op, cands in zip(ops, candidates):
        nxt: list[tuple[tuple[Scalar, ...], Subspace]] = []
        for label, space in blocks:
            sub = _restrict(op, space)
            eig, full = eigen_decompose(sub, cands)
            if not full:
                complete = False
            for lam, small in eig:
                vectors = [space.from_coords(svec_dense(row, space.dim, op.order))
                           for row in small.basis]
                nxt.append((label + (lam,), Subspace.from_vectors(vectors, dim, op.order)))
        blocks = nxt
    return blocks, complete
