"""Exact sparse linear algebra over Z and over prime fields.

Z-side lattices use Hermite normal form with arbitrary-precision ints;
mod-p work is done natively over F_p (int rows, explicit modular inverse),
never by reducing a rational computation.

Sparse vectors are dicts column -> nonzero value.  The triplet text format
for matrices is one header line ``nrows ncols modulus`` (modulus ``Z`` or a
prime) followed by ``row col value`` lines sorted by (row, col).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

Vec = dict[int, int]


def _to_vec(v) -> Vec:
    if isinstance(v, dict):
        return {c: x for c, x in v.items() if x}
    return {c: x for c, x in enumerate(v) if x}


def vec_add_scaled(v: Vec, w: Vec, c: int) -> None:
    """v += c*w in place, dropping zeros."""
    if c == 0:
        return
    for col, x in w.items():
        new = v.get(col, 0) + c * x
        if new:
            v[col] = new
        else:
            v.pop(col, None)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) = x*a + y*b, g >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


# ---------------------------------------------------------------------------
# matrices

@dataclass
class SparseIntMatrix:
    nrows: int
    ncols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "SparseIntMatrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        ent = {(r, c): int(v) for r, row in enumerate(rows)
               for c, v in enumerate(row) if v}
        return cls(nr, nc, ent)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row(self, r: int) -> Vec:
        return {c: v for (rr, c), v in self.entries.items() if rr == r}


@dataclass
class SparsePrimeMatrix:
    nrows: int
    ncols: int
    p: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], p: int) -> "SparsePrimeMatrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        ent = {}
        for r, row in enumerate(rows):
            for c, v in enumerate(row):
                v = int(v) % p
                if v:
                    ent[(r, c)] = v
        return cls(nr, nc, p, ent)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for (r, c), v in self.entries.items():
            out[r, c] = v % self.p
        return out


def write_triplet_text(m: SparseIntMatrix | SparsePrimeMatrix, path) -> None:
    modulus = "Z" if isinstance(m, SparseIntMatrix) else str(m.p)
    lines = [f"{m.nrows} {m.ncols} {modulus}"]
    for (r, c) in sorted(m.entries):
        lines.append(f"{r} {c} {m.entries[(r, c)]}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_triplet_text(path) -> SparseIntMatrix | SparsePrimeMatrix:
    lines = Path(path).read_text().splitlines()
    nr, nc, modulus = lines[0].split()
    entries: dict[tuple[int, int], int] = {}
    for line in lines[1:]:
        if not line.strip():
            continue
        r, c, v = line.split()
        entries[(int(r), int(c))] = int(v)
    if modulus == "Z":
        return SparseIntMatrix(int(nr), int(nc), entries)
    return SparsePrimeMatrix(int(nr), int(nc), int(modulus), entries)


# ---------------------------------------------------------------------------
# Hermite normal form lattices

class IncrementalHNF:
    """Row lattice accumulated one generator at a time.

    Pivot rows are kept by leading column; gcd combinations keep pivots as
    small as possible.  ``add`` reports whether the lattice actually grew,
    which is what spanning loops key their worklists on.
    """

    def __init__(self, ambient_dim: int):
        self.ambient_dim = ambient_dim
        self.pivots: dict[int, Vec] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, v) -> bool:
        v = _to_vec(v)
        changed = False
        while v:
            c = min(v)
            if c not in self.pivots:
                if v[c] < 0:
                    v = {col: -x for col, x in v.items()}
                self.pivots[c] = v
                return True
            row = self.pivots[c]
            a, b = row[c], v[c]
            if b % a == 0:
                vec_add_scaled(v, row, -(b // a))
                continue
            g, x, y = _xgcd(a, b)
            new_row: Vec = {}
            vec_add_scaled(new_row, row, x)
            vec_add_scaled(new_row, v, y)
            # v loses its leading entry; the pivot shrinks to the gcd
            v2: Vec = {}
            vec_add_scaled(v2, v, a // g)
            vec_add_scaled(v2, row, -(b // g))
            self.pivots[c] = new_row
            v = v2
            changed = True
        return changed

    def reduce(self, v) -> Vec:
        """Residue of v after subtracting integer multiples of pivot rows."""
        v = _to_vec(v)
        out: Vec = {}
        while v:
            c = min(v)
            row = self.pivots.get(c)
            if row is None:
                out[c] = v.pop(c)
                continue
            q = v[c] // row[c]
            vec_add_scaled(v, row, -q)
            if v.get(c):
                out[c] = v.pop(c)
        return out

    def contains(self, v) -> bool:
        v = _to_vec(v)
        while v:
            c = min(v)
            row = self.pivots.get(c)
            if row is None or v[c] % row[c] != 0:
                return False
            vec_add_scaled(v, row, -(v[c] // row[c]))
        return True

    def finalize(self) -> "LatticeBasis":
        cols = sorted(self.pivots)
        rows = [dict(self.pivots[c]) for c in cols]
        # normalize: positive pivots, entries above a pivot reduced mod pivot
        for k, c in enumerate(cols):
            if rows[k][c] < 0:
                rows[k] = {col: -x for col, x in rows[k].items()}
        for k, c in enumerate(cols):
            piv = rows[k][c]
            for j in range(k):
                q = rows[j].get(c, 0) // piv
                if q:
                    vec_add_scaled(rows[j], rows[k], -q)
        return LatticeBasis(self.ambient_dim, rows, tuple(cols))


@dataclass
class LatticeBasis:
    """HNF basis of a sublattice of Z^ambient_dim (rows sorted by pivot)."""

    ambient_dim: int
    rows: list[Vec]
    pivot_cols: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.rows)

    def solve(self, v) -> list[int] | None:
        """Integer coordinates of v in this basis, or None if outside."""
        v = _to_vec(v)
        coords = []
        for row, c in zip(self.rows, self.pivot_cols):
            a = v.get(c, 0)
            q, r = divmod(a, row[c])
            if r:
                return None
            coords.append(q)
            vec_add_scaled(v, row, -q)
        return coords if not v else None

    def contains(self, v) -> bool:
        return self.solve(v) is not None


def hnf_lattice_basis(gens: Iterable, ambient_dim: int) -> LatticeBasis:
    h = IncrementalHNF(ambient_dim)
    for g in gens:
        h.add(g)
    return h.finalize()


# ---------------------------------------------------------------------------
# prime fields

def _inv_mod(x: int, p: int) -> int:
    return pow(int(x), -1, p)


class DenseEchelonModP:
    """Incremental reduced row echelon form over F_p on int64 numpy rows.

    Rows are kept fully reduced (unit pivots, zeros above and below), so the
    coordinates of a member vector can be read off at the pivot columns.
    """

    def __init__(self, p: int, width: int):
        self.p = p
        self.width = width
        self._rows = np.zeros((8, width), dtype=np.int64)
        self._n = 0
        self._pivot_of_col: dict[int, int] = {}
        self.pivot_cols: list[int] = []

    @property
    def rank(self) -> int:
        return self._n

    def basis_matrix(self) -> np.ndarray:
        return self._rows[:self._n]

    def _reduce(self, vec: np.ndarray) -> np.ndarray:
        """Subtract the components along every pivot row, not just the leading
        one, so stored rows stay mutually reduced and residues are canonical."""
        vec = np.asarray(vec, dtype=np.int64) % self.p
        if self._n:
            coeffs = vec[self.pivot_cols]
            if np.any(coeffs):
                vec = (vec - coeffs @ self._rows[:self._n]) % self.p
        return vec

    def add_row(self, vec: np.ndarray) -> bool:
        vec = self._reduce(vec)
        nz = np.nonzero(vec)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        vec = (vec * _inv_mod(vec[c], self.p)) % self.p
        if self._n == self._rows.shape[0]:
            grown = np.zeros((2 * self._n, self.width), dtype=np.int64)
            grown[:self._n] = self._rows[:self._n]
            self._rows = grown
        # eliminate the new pivot column from the existing rows
        if self._n:
            col = self._rows[:self._n, c].copy()
            hit = np.nonzero(col)[0]
            if hit.size:
                self._rows[hit] = (self._rows[hit]
                                   - np.outer(col[hit], vec)) % self.p
        self._rows[self._n] = vec
        self._pivot_of_col[c] = self._n
        self.pivot_cols.append(c)
        self._n += 1
        return True

    def residue(self, vec: np.ndarray) -> np.ndarray:
        return self._reduce(vec)

    def contains(self, vec: np.ndarray) -> bool:
        return not np.any(self._reduce(vec))

    def coords(self, vec: np.ndarray) -> np.ndarray | None:
        """Coordinates w.r.t. the insertion-ordered basis rows, or None."""
        vec = np.asarray(vec, dtype=np.int64) % self.p
        c = vec[self.pivot_cols] if self._n else np.zeros(0, dtype=np.int64)
        resid = (vec - c @ self._rows[:self._n]) % self.p
        if np.any(resid):
            return None
        return c


def rank_mod_p(mat: SparsePrimeMatrix) -> int:
    ech = DenseEchelonModP(mat.p, mat.ncols)
    for row in mat.to_dense():
        ech.add_row(row)
    return ech.rank


def subspace_membership_mod_p(basis, vector, p: int) -> bool:
    basis = list(basis)
    vector = np.asarray(vector, dtype=np.int64)
    ech = DenseEchelonModP(p, vector.shape[0])
    for row in basis:
        ech.add_row(np.asarray(row, dtype=np.int64))
    return ech.contains(vector)


def subspace_intersection_mod_p(u_basis, w_basis, p: int) -> list[list[int]]:
    """Basis of the intersection of two row spans over F_p (Zassenhaus).

    Rows [u | u] for u in U and [w | 0] for w in W are echelonized; rows with
    vanishing left half carry the intersection in their right half.
    """
    u_basis = [list(map(int, r)) for r in u_basis]
    w_basis = [list(map(int, r)) for r in w_basis]
    if not u_basis or not w_basis:
        return []
    dim = len(u_basis[0])
    ech = DenseEchelonModP(p, 2 * dim)
    for u in u_basis:
        ech.add_row(np.array(u + u, dtype=np.int64))
    for w in w_basis:
        ech.add_row(np.array(w + [0] * dim, dtype=np.int64))
    rows = ech.basis_matrix()
    right = [row[dim:] for row in rows if not np.any(row[:dim])]
    out = DenseEchelonModP(p, dim)
    for r in right:
        out.add_row(r)
    return [list(map(int, row)) for row in out.basis_matrix()]
