"""Square matrices over a finite field, packed codes, and small code spaces."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .ffield import FieldSpec


class MatrixParseError(ValueError):
    pass


@dataclass(frozen=True)
class Matrix:
    """Immutable n x n matrix; entries are row-major element codes."""

    n: int
    field: FieldSpec
    entries: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("matrix dimension must be >= 1")
        if len(self.entries) != self.n * self.n:
            raise ValueError(f"expected {self.n * self.n} entries, got {len(self.entries)}")
        q = self.field.q
        for x in self.entries:
            if not 0 <= x < q:
                raise ValueError(f"entry {x} is not an element of {self.field}")

    @classmethod
    def from_rows(cls, rows, field):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        return cls(n, field, tuple(int(x) for r in rows for x in r))

    def rows(self):
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.n + j]

    def __matmul__(self, other):
        return mat_mul(self, other)

    def is_zero(self):
        return not any(self.entries)

    def __str__(self):
        return format_matrix(self)


def zero(n, field):
    return Matrix(n, field, (0,) * (n * n))


def identity(n, field):
    return Matrix(n, field, tuple(int(i == j) for i in range(n) for j in range(n)))


def _check_pair(M, N):
    if M.n != N.n:
        raise ValueError(f"shape mismatch: {M.n}x{M.n} vs {N.n}x{N.n}")
    if M.field is not N.field and M.field != N.field:
        raise ValueError(f"field mismatch: {M.field} vs {N.field}")


def mat_mul(M, N):
    _check_pair(M, N)
    n, f = M.n, M.field
    a, b = M.entries, N.entries
    if f.e == 1:
        p = f.p
        out = tuple(
            sum(a[i * n + k] * b[k * n + j] for k in range(n)) % p
            for i in range(n) for j in range(n)
        )
    else:
        out = []
        for i in range(n):
            for j in range(n):
                s = 0
                for k in range(n):
                    s = f.add(s, f.mul(a[i * n + k], b[k * n + j]))
                out.append(s)
        out = tuple(out)
    return Matrix(n, f, out)


def mat_pow(M, k):
    R = identity(M.n, M.field)
    while k:
        if k & 1:
            R = mat_mul(R, M)
        M = mat_mul(M, M)
        k >>= 1
    return R


def _eliminate(M):
    """Row-reduce a copy of M; pivot is the first nonzero entry in the column.

    Returns (rows, det, rank).
    """
    n, f = M.n, M.field
    rows = M.rows()
    det = 1
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, n) if rows[r][col]), None)
        if piv is None:
            det = 0
            continue
        if piv != rank:
            rows[rank], rows[piv] = rows[piv], rows[rank]
            det = f.neg(det)
        pv = rows[rank][col]
        det = f.mul(det, pv)
        inv = f.inv(pv)
        for r in range(rank + 1, n):
            c = rows[r][col]
            if c:
                factor = f.mul(c, inv)
                rows[r] = [f.sub(x, f.mul(factor, y)) for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rows, det, rank


def mat_det(M):
    return _eliminate(M)[1]


def mat_rank(M):
    return _eliminate(M)[2]


def is_invertible(M):
    return mat_det(M) != 0


def mat_inv(M):
    """Gauss-Jordan inverse; raises ValueError for singular M."""
    n, f = M.n, M.field
    aug = [row + [int(i == j) for j in range(n)] for i, row in enumerate(M.rows())]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = f.inv(aug[col][col])
        aug[col] = [f.mul(inv, x) for x in aug[col]]
        for r in range(n):
            c = aug[r][col]
            if r != col and c:
                aug[r] = [f.sub(x, f.mul(c, y)) for x, y in zip(aug[r], aug[col])]
    return Matrix(n, f, tuple(x for row in aug for x in row[n:]))


def conjugate(M, P):
    """P^-1 M P."""
    return mat_mul(mat_mul(mat_inv(P), M), P)


def scale(M, lam):
    f = M.field
    lam = int(lam)
    f.check(lam)
    return Matrix(M.n, f, tuple(f.mul(lam, x) for x in M.entries))


def encode(M):
    """Sum of entries[i] * q**i over the row-major index i."""
    q = M.field.q
    code = 0
    for x in reversed(M.entries):
        code = code * q + x
    return code


def decode(code, n, field):
    q = field.q
    if not 0 <= code < q ** (n * n):
        raise ValueError(f"matrix code {code} out of range for {n}x{n} over {field}")
    out = []
    for _ in range(n * n):
        code, r = divmod(code, q)
        out.append(r)
    return Matrix(n, field, tuple(out))


def block_embed(M, n2):
    """M in the top-left block of an n2 x n2 zero matrix."""
    if n2 < M.n:
        raise ValueError(f"cannot embed {M.n}x{M.n} into {n2}x{n2}")
    n = M.n
    out = [0] * (n2 * n2)
    for i in range(n):
        for j in range(n):
            out[i * n2 + j] = M.entries[i * n + j]
    return Matrix(n2, M.field, tuple(out))


def parse_matrix(text, field, n=None):
    """Parse the literal form ``1,0;0,0`` (rows by ';', entries by ',')."""
    rows = []
    pos = 0
    for r, row_text in enumerate(text.split(";")):
        row = []
        for c, tok in enumerate(row_text.split(",")):
            where = f"row {r + 1}, column {c + 1} (offset {pos})"
            pos += len(tok) + 1
            tok_s = tok.strip()
            try:
                v = int(tok_s)
            except ValueError:
                raise MatrixParseError(f"bad entry {tok_s!r} at {where} in {text!r}") from None
            if not 0 <= v < field.q:
                raise MatrixParseError(f"entry {v} at {where} is not an element of {field}")
            row.append(v)
        rows.append(row)
    size = len(rows)
    for r, row in enumerate(rows):
        if len(row) != size:
            raise MatrixParseError(f"row {r + 1} of {text!r} has {len(row)} entries, expected {size}")
    if n is not None and size != n:
        raise MatrixParseError(f"{text!r} is {size}x{size}, expected {n}x{n}")
    return Matrix.from_rows(rows, field)


def format_matrix(M):
    return ";".join(",".join(str(x) for x in row) for row in M.rows())


def all_matrices(n, field):
    S = field.q ** (n * n)
    return (decode(c, n, field) for c in range(S))


# -- dense code spaces --------------------------------------------------------

MAX_TABLE_STATES = 4096


class CodeSpace:
    """All of Mat_n(GF(q)) as codes 0..S-1 with a full multiplication table.

    Only for S = q^(n^2) <= MAX_TABLE_STATES. Code 0 is the zero matrix.
    """

    def __init__(self, n, field):
        S = field.q ** (n * n)
        if S > MAX_TABLE_STATES:
            raise ValueError(f"{n}x{n} over {field} has {S} matrices; table limit is {MAX_TABLE_STATES}")
        self.n = n
        self.field = field
        self.size = S
        self.entries = self._entry_array()
        self.table = self._mult_table()
        self.identity = encode(identity(n, field))

    def _entry_array(self):
        q, nn = self.field.q, self.n * self.n
        codes = np.arange(self.size, dtype=np.int64)
        out = np.empty((self.size, nn), dtype=np.int64)
        for i in range(nn):
            out[:, i] = codes % q
            codes //= q
        return out

    def _mult_table(self):
        n, f, S = self.n, self.field, self.size
        q = f.q
        E = self.entries.reshape(S, n, n)
        weights = q ** np.arange(n * n, dtype=np.int64)
        table = np.empty((S, S), dtype=np.int32)
        if f.e == 1:
            for a in range(S):
                prod = np.einsum("ik,bkj->bij", E[a], E) % q
                table[a] = prod.reshape(S, -1) @ weights
        else:
            mul = np.array([[f.mul(x, y) for y in range(q)] for x in range(q)], dtype=np.int64)
            add = np.array([[f.add(x, y) for y in range(q)] for x in range(q)], dtype=np.int64)
            for a in range(S):
                acc = np.zeros((S, n, n), dtype=np.int64)
                for k in range(n):
                    term = mul[E[a][:, k][None, :, None], E[:, k, :][:, None, :]]
                    acc = add[acc, term]
                table[a] = acc.reshape(S, -1) @ weights
        return table

    def decode(self, code):
        return Matrix(self.n, self.field, tuple(int(x) for x in self.entries[code]))

    def encode(self, M):
        if M.n != self.n or M.field != self.field:
            raise ValueError("matrix does not belong to this code space")
        return encode(M)

    def mul(self, a, b):
        return int(self.table[a, b])

    @cached_property
    def det(self):
        return np.array([mat_det(self.decode(c)) for c in range(self.size)], dtype=np.int64)

    @cached_property
    def singular(self):
        return (self.det == 0).astype(np.uint8)

    @cached_property
    def invertible_codes(self):
        return [int(c) for c in np.flatnonzero(self.det != 0)]

    @cached_property
    def scalar_images(self):
        """scalar_images[i, c] = code of lam_i * M_c for lam_i = 1..q-1."""
        f = self.field
        rows = []
        for lam in f.nonzero():
            lut = np.array([f.mul(lam, x) for x in range(f.q)], dtype=np.int64)
            rows.append(lut[self.entries] @ (f.q ** np.arange(self.n * self.n, dtype=np.int64)))
        return np.array(rows, dtype=np.int64)

    @cached_property
    def class_min(self):
        """Least code among the nonzero scalar multiples of each matrix."""
        return self.scalar_images.min(axis=0)

    @cached_property
    def inverse_of(self):
        inv = {}
        I = self.identity
        for g in self.invertible_codes:
            row = self.table[g]
            inv[g] = int(np.flatnonzero(row == I)[0])
        return inv

    @cached_property
    def conjugation_perms(self):
        """Distinct code permutations c -> P^-1 M_c P, P ranging over GL in code order."""
        seen = {}
        T = self.table
        for P in self.invertible_codes:
            Pi = self.inverse_of[P]
            perm = T[T[Pi, :], P]
            key = perm.tobytes()
            if key not in seen:
                seen[key] = perm.astype(np.int32)
        return np.array(list(seen.values()), dtype=np.int32)


_SPACES = {}


def code_space(n, field):
    key = (n, field)
    sp = _SPACES.get(key)
    if sp is None:
        sp = _SPACES[key] = CodeSpace(n, field)
    return sp
