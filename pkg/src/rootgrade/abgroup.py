"""Finitely generated abelian groups, Smith normal form, and universal groups.

Groups are kept in invariant form (free rank plus a divisibility chain of
torsion orders), so isomorphism is a tuple comparison.  Elements carry their
group and are normalized on construction; all values are immutable.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Hashable, Iterable, Sequence

from .errors import DomainMismatch

IntMatrix = list[list[int]]


def _identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    cols = len(b[0])
    out = [[0] * cols for _ in a]
    for i, arow in enumerate(a):
        orow = out[i]
        for k, av in enumerate(arow):
            if av:
                brow = b[k]
                for j in range(cols):
                    if brow[j]:
                        orow[j] += av * brow[j]
    return out


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """U, D, V with U·M·V = D, U and V unimodular, D a nonnegative divisibility chain.

    Pivot choice is the nonzero entry of least absolute value, ties broken by
    lowest (row, column), which pins down U and V deterministically.
    Postconditions (product identity, unimodularity, chain) are asserted on
    every call.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[int(x) for x in row] for row in m]
    u = _identity(rows)
    v = _identity(cols)
    det_u = 1
    det_v = 1

    def swap_rows(i: int, j: int) -> None:
        nonlocal det_u
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]
            det_u = -det_u

    def swap_cols(i: int, j: int) -> None:
        nonlocal det_v
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]
            det_v = -det_v

    def add_row(src: int, dst: int, f: int) -> None:
        if f:
            asrc, adst = a[src], a[dst]
            for j in range(cols):
                if asrc[j]:
                    adst[j] += f * asrc[j]
            usrc, udst = u[src], u[dst]
            for j in range(rows):
                if usrc[j]:
                    udst[j] += f * usrc[j]

    def add_col(src: int, dst: int, f: int) -> None:
        if f:
            for row in a:
                if row[src]:
                    row[dst] += f * row[src]
            for row in v:
                if row[src]:
                    row[dst] += f * row[src]

    def negate_row(i: int) -> None:
        nonlocal det_u
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        det_u = -det_u

    def combo_rows(i1: int, i2: int, p: int, q: int, r: int, s: int) -> None:
        # [row_i1; row_i2] ← [[p,q],[r,s]]·[row_i1; row_i2], with ps−qr = 1
        for mat in (a, u):
            r1, r2 = mat[i1], mat[i2]
            mat[i1] = [p * x + q * y for x, y in zip(r1, r2)]
            mat[i2] = [r * x + s * y for x, y in zip(r1, r2)]

    def combo_cols(j1: int, j2: int, p: int, q: int, r: int, s: int) -> None:
        # [col_j1, col_j2] ← [col_j1, col_j2]·[[p,r],[q,s]], with ps−qr = 1
        for mat in (a, v):
            for row in mat:
                x, y = row[j1], row[j2]
                row[j1] = p * x + q * y
                row[j2] = r * x + s * y

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # deterministic pivot: least |entry|, ties by lowest (row, column)
        pivot = None
        best = None
        for i in range(t, rows):
            arow = a[i]
            for j in range(t, cols):
                x = arow[j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        if a[t][t] < 0:
            negate_row(t)
        while True:
            # one-shot gcd elimination: the pivot drops straight to the gcd of
            # its column (then row), so no Euclidean swap oscillation occurs.
            changed = False
            for i in range(t + 1, rows):
                x = a[i][t]
                if x:
                    d = a[t][t]
                    if x % d == 0:
                        add_row(t, i, -(x // d))
                    else:
                        g, p, q = _egcd(d, x)
                        combo_rows(t, i, p, q, -(x // g), d // g)
                        changed = True
            for j in range(t + 1, cols):
                x = a[t][j]
                if x:
                    d = a[t][t]
                    if x % d == 0:
                        add_col(t, j, -(x // d))
                    else:
                        g, p, q = _egcd(d, x)
                        combo_cols(t, j, p, q, -(x // g), d // g)
                        changed = True
            if changed:
                continue
            # enforce the divisibility chain: pivot must divide the rest
            d = a[t][t]
            culprit = None
            for i in range(t + 1, rows):
                arow = a[i]
                for j in range(t + 1, cols):
                    if arow[j] % d:
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            add_row(culprit, t, 1)
        t += 1

    # postconditions: exact identity, unimodularity, nonnegative chain
    assert abs(det_u) == 1 and abs(det_v) == 1
    check = _mat_mul(_mat_mul(u, [list(row) for row in m]), v)
    assert check == a, "Smith reduction lost the product identity"
    diag = [a[i][i] for i in range(min(rows, cols))]
    for i in range(len(diag) - 1):
        assert diag[i] >= 0 and (diag[i + 1] % diag[i] == 0 if diag[i] else diag[i + 1] == 0)
    for i in range(rows):
        for j in range(cols):
            assert i == j or a[i][j] == 0

    return u, a, v


@dataclass(frozen=True)
class FgAbelianGroup:
    """ℤ^free_rank × ℤ_{d₁} × … × ℤ_{dₖ} with d₁ | d₂ | … and each dᵢ ≥ 2."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        assert self.free_rank >= 0
        for i, d in enumerate(self.torsion):
            assert d >= 2
            if i:
                assert d % self.torsion[i - 1] == 0

    @property
    def num_generators(self) -> int:
        return self.free_rank + len(self.torsion)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_isomorphic(self, other: "FgAbelianGroup") -> bool:
        return (self.free_rank, self.torsion) == (other.free_rank, other.torsion)

    def element(self, free: Iterable[int] = (), tor: Iterable[int] = ()) -> "GroupElem":
        return GroupElem(self, tuple(free), tuple(tor))

    def zero(self) -> "GroupElem":
        return self.element((0,) * self.free_rank, (0,) * len(self.torsion))

    def generators(self) -> "list[GroupElem]":
        """Free generators first, then one generator per torsion factor."""
        gens = []
        for i in range(self.free_rank):
            free = [0] * self.free_rank
            free[i] = 1
            gens.append(self.element(free, (0,) * len(self.torsion)))
        for i in range(len(self.torsion)):
            tor = [0] * len(self.torsion)
            tor[i] = 1
            gens.append(self.element((0,) * self.free_rank, tor))
        return gens

    def elements(self) -> "list[GroupElem]":
        """All elements, finite groups only (used on small torsion gradings)."""
        assert self.free_rank == 0, "cannot enumerate an infinite group"
        out = [self.zero()]
        for i, d in enumerate(self.torsion):
            nxt = []
            for e in out:
                for k in range(d):
                    tor = list(e.tor)
                    tor[i] = k
                    nxt.append(self.element((), tor))
            out = nxt
        return out

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        i = 0
        tor = self.torsion
        while i < len(tor):
            j = i
            while j < len(tor) and tor[j] == tor[i]:
                j += 1
            parts.append(f"Z{tor[i]}" + (f"^{j - i}" if j - i > 1 else ""))
            i = j
        return " x ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupElem:
    """An element of an FgAbelianGroup, torsion coordinates reduced mod dᵢ."""

    group: FgAbelianGroup
    free: tuple[int, ...]
    tor: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.free) != self.group.free_rank or len(self.tor) != len(self.group.torsion):
            raise DomainMismatch(
                f"coordinate shape ({len(self.free)}, {len(self.tor)}) does not fit {self.group}"
            )
        object.__setattr__(
            self, "tor", tuple(x % d for x, d in zip(self.tor, self.group.torsion))
        )

    def _check(self, other: "GroupElem") -> None:
        if self.group != other.group:
            raise DomainMismatch(f"elements of {self.group} and {other.group} combined")

    def __add__(self, other: "GroupElem") -> "GroupElem":
        self._check(other)
        return GroupElem(
            self.group,
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.tor, other.tor)),
        )

    def __neg__(self) -> "GroupElem":
        return GroupElem(self.group, tuple(-a for a in self.free), tuple(-a for a in self.tor))

    def __sub__(self, other: "GroupElem") -> "GroupElem":
        return self + (-other)

    def __mul__(self, n: int) -> "GroupElem":
        return GroupElem(self.group, tuple(n * a for a in self.free), tuple(n * a for a in self.tor))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.tor)

    def sort_key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (self.free, self.tor)

    def __str__(self) -> str:
        if not self.free:
            return str(self.tor if len(self.tor) != 1 else self.tor[0])
        if not self.tor:
            return str(self.free if len(self.free) != 1 else self.free[0])
        return f"{self.free}|{self.tor}"


def elem_add(a: GroupElem, b: GroupElem) -> GroupElem:
    return a + b


def elem_neg(a: GroupElem) -> GroupElem:
    return -a


def elem_is_zero(a: GroupElem) -> bool:
    return a.is_zero()


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by images of the canonical generators (one row each)."""

    domain: FgAbelianGroup
    codomain: FgAbelianGroup
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        assert len(self.matrix) == self.domain.num_generators
        n_cod = self.codomain.num_generators
        for row in self.matrix:
            assert len(row) == n_cod
        # torsion respected: dᵢ · (image of torsion generator i) must vanish
        r = self.domain.free_rank
        for i, d in enumerate(self.domain.torsion):
            row = self.matrix[r + i]
            img = self.codomain.element(
                tuple(d * x for x in row[: self.codomain.free_rank]),
                tuple(d * x for x in row[self.codomain.free_rank:]),
            )
            assert img.is_zero(), "homomorphism does not respect torsion"

    def __call__(self, g: GroupElem) -> GroupElem:
        if g.group != self.domain:
            raise DomainMismatch(f"element of {g.group} fed to hom on {self.domain}")
        coords = g.free + g.tor
        n_free = self.codomain.free_rank
        free = [0] * n_free
        tor = [0] * len(self.codomain.torsion)
        for c, row in zip(coords, self.matrix):
            if c:
                for j in range(n_free):
                    free[j] += c * row[j]
                for j in range(len(tor)):
                    tor[j] += c * row[n_free + j]
        return self.codomain.element(free, tor)


def hom_apply(h: GroupHom, g: GroupElem) -> GroupElem:
    return h(g)


def group_from_relations(
    num_generators: int, relations: Sequence[Sequence[int]]
) -> tuple[FgAbelianGroup, list[GroupElem]]:
    """ℤ^n modulo the row lattice of `relations`, plus the image of each generator.

    The quotient is put in invariant form through the Smith normal form of the
    relation matrix; generator images come from the accompanying change of
    coordinates on ℤ^n.
    """
    n = num_generators
    rels = [list(r) for r in relations]
    for r in rels:
        assert len(r) == n, "relation length must equal the generator count"
    if not rels:
        rels = [[0] * n] if n else []
    if n == 0:
        return FgAbelianGroup(0, ()), []
    _, d, v = smith_normal_form(rels)
    # In the new coordinates y = x·V the relation lattice is spanned by dᵢ·eᵢ.
    diag = [d[i][i] for i in range(min(len(d), n))]
    diag += [0] * (n - len(diag))
    tor_idx = [i for i, di in enumerate(diag) if di >= 2]
    free_idx = [i for i, di in enumerate(diag) if di == 0]
    group = FgAbelianGroup(len(free_idx), tuple(diag[i] for i in tor_idx))
    images = []
    for g in range(n):
        y = [v[g][i] for i in range(n)]
        images.append(
            group.element([y[i] for i in free_idx], [y[i] for i in tor_idx])
        )
    return group, images


def direct_product(
    a: FgAbelianGroup, b: FgAbelianGroup
) -> tuple[FgAbelianGroup, GroupHom, GroupHom]:
    """a × b in invariant form, together with the two canonical inclusions.

    The product of two invariant-form groups is usually not in invariant
    form itself (ℤ₂ × ℤ₃ ≅ ℤ₆), so the result is renormalized and elements
    must travel through the returned inclusion homomorphisms.
    """
    n = a.num_generators + b.num_generators
    rels = []
    for i, d in enumerate(a.torsion):
        row = [0] * n
        row[a.free_rank + i] = d
        rels.append(row)
    off = a.num_generators
    for i, d in enumerate(b.torsion):
        row = [0] * n
        row[off + b.free_rank + i] = d
        rels.append(row)
    group, images = group_from_relations(n, rels)

    def inclusion(src: FgAbelianGroup, imgs: list[GroupElem]) -> GroupHom:
        return GroupHom(src, group, tuple(img.free + img.tor for img in imgs))

    return group, inclusion(a, images[:off]), inclusion(b, images[off:])


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a·x + b·y = g = gcd(a, b), g ≥ 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class _SparseLattice:
    """Online echelon basis of an integer row lattice (rows as sparse dicts).

    Feeding rows one at a time keeps universal-group presentations with many
    thousands of witness relations tractable: only a compact basis reaches the
    Smith normal form.  Every replacement step is unimodular on the span, so
    the lattice is preserved exactly.
    """

    def __init__(self, width: int):
        self.width = width
        self.pivots: dict[int, dict[int, int]] = {}

    def insert(self, row: dict[int, int]) -> None:
        row = {j: x for j, x in row.items() if x}
        while row:
            c = min(row)
            pivot = self.pivots.get(c)
            if pivot is None:
                if row[c] < 0:
                    row = {j: -x for j, x in row.items()}
                self.pivots[c] = row
                return
            g, x, y = _egcd(pivot[c], row[c])
            pc, rc = pivot[c] // g, row[c] // g
            new_pivot: dict[int, int] = {}
            new_row: dict[int, int] = {}
            for j in set(pivot) | set(row):
                pj = pivot.get(j, 0)
                rj = row.get(j, 0)
                np_ = x * pj + y * rj
                nr = -rc * pj + pc * rj
                if np_:
                    new_pivot[j] = np_
                if nr:
                    new_row[j] = nr
            self.pivots[c] = new_pivot
            row = new_row

    def basis_rows(self) -> list[list[int]]:
        rows = []
        for c in sorted(self.pivots):
            sparse = self.pivots[c]
            rows.append([sparse.get(j, 0) for j in range(self.width)])
        return rows


def universal_group(
    support: Sequence[Hashable], witnesses: Sequence[tuple[Hashable, Hashable, Hashable]]
) -> tuple[FgAbelianGroup, dict[Hashable, GroupElem]]:
    """Group presented on one generator per support label, one relation per witness.

    A witness (s₁, s₂, s₃) records a nonzero product from degree s₁ times
    degree s₂ landing in degree s₃ and contributes the relation s₁+s₂−s₃.
    """
    labels = list(support)
    index = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    lattice = _SparseLattice(n)
    for s1, s2, s3 in witnesses:
        row: dict[int, int] = {}
        for lab, c in ((s1, 1), (s2, 1), (s3, -1)):
            i = index[lab]
            row[i] = row.get(i, 0) + c
        lattice.insert(row)
    group, images = group_from_relations(n, lattice.basis_rows())
    return group, {lab: images[i] for lab, i in index.items()}


def torsion_free_quotient(g: FgAbelianGroup) -> tuple[FgAbelianGroup, GroupHom]:
    """ℤ^r together with the projection that kills the torsion coordinates."""
    free = FgAbelianGroup(g.free_rank, ())
    rows = []
    for i in range(g.free_rank):
        row = [0] * g.free_rank
        row[i] = 1
        rows.append(tuple(row))
    for _ in g.torsion:
        rows.append((0,) * g.free_rank)
    return free, GroupHom(g, free, tuple(rows))


def integer_kernel_basis(m: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of {x ∈ ℤⁿ : M·x = 0} for an integer matrix M (rows × n)."""
    rows = len(m)
    n = len(m[0]) if rows else 0
    if rows == 0:
        return [list(r) for r in _identity(n)]
    _, d, v = smith_normal_form(m)
    rank = sum(1 for i in range(min(rows, n)) if d[i][i])
    return [[v[i][j] for i in range(n)] for j in range(rank, n)]
