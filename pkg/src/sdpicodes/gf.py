"""Finite fields GF(p^ell) and exact linear algebra over them.

Elements are integers in ``[0, k)``: the element ``sum_j c_j x^j`` (with
``0 <= c_j < p``) is encoded as ``sum_j c_j p^j``. Arithmetic is table
driven; every operation accepts numpy integer arrays and broadcasts.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NoModulusInTable, NotPrime

MAX_ORDER = 2**16
FULL_TABLE_ORDER = 256

# Irreducible moduli, coefficients listed from x^0 up to the monic leading term.
MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 10): (1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1),
    (2, 11): (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 12): (1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1),
    (2, 13): (1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 14): (1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (2, 15): (1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 16): (1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 2, 1, 0, 2, 0, 1),
    (3, 7): (1, 0, 2, 0, 0, 0, 0, 1),
    (3, 8): (2, 2, 2, 0, 1, 2, 0, 0, 1),
    (3, 9): (1, 1, 2, 2, 0, 0, 0, 0, 0, 1),
    (3, 10): (2, 1, 0, 0, 2, 2, 2, 0, 0, 0, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (5, 5): (3, 4, 0, 0, 0, 1),
    (5, 6): (2, 0, 1, 4, 1, 0, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (7, 4): (3, 4, 5, 0, 1),
    (7, 5): (4, 1, 0, 0, 0, 1),
    (11, 2): (2, 7, 1),
    (11, 3): (9, 2, 0, 1),
    (11, 4): (2, 10, 8, 0, 1),
    (13, 2): (2, 12, 1),
    (13, 3): (11, 2, 0, 1),
    (13, 4): (2, 12, 3, 0, 1),
    (17, 2): (3, 16, 1),
    (17, 3): (14, 1, 0, 1),
    (19, 2): (2, 18, 1),
    (19, 3): (17, 4, 0, 1),
    (23, 2): (5, 21, 1),
    (23, 3): (18, 2, 0, 1),
    (29, 2): (2, 24, 1),
    (29, 3): (1, 2, 0, 1),
    (31, 2): (3, 29, 1),
    (31, 3): (1, 3, 0, 1),
    (37, 2): (2, 33, 1),
    (37, 3): (1, 5, 0, 1),
    (41, 2): (6, 38, 1),
    (43, 2): (3, 42, 1),
    (47, 2): (5, 45, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def _prime_factors(n: int):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomials over GF(p), coefficient lists low -> high ------------------

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    a = _poly_trim(a)
    m = _poly_trim(m)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _poly_trim(a)
    return a


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def is_irreducible(modulus, p: int) -> bool:
    """Trial division by every monic polynomial of degree ``1 .. deg/2``."""
    m = _poly_trim(modulus)
    deg = len(m) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(m, list(low) + [1], p):
                return False
    return True


class Field:
    """GF(p^ell) backed by precomputed lookup tables."""

    def __init__(self, p: int, ell: int, modulus=None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if ell < 1:
            raise InputError(f"ell must be >= 1, got {ell}")
        k = p**ell
        if k > MAX_ORDER:
            raise InputError(f"field order {k} exceeds {MAX_ORDER}")
        if ell == 1:
            modulus = (0, 1)
        elif modulus is None:
            if (p, ell) not in MODULI:
                raise NoModulusInTable(f"no built-in modulus for GF({p}^{ell})")
            modulus = MODULI[(p, ell)]
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != ell + 1 or modulus[-1] != 1:
            raise InputError("modulus must be monic of degree ell")
        if ell > 1 and not is_irreducible(modulus, p):
            raise InputError(f"modulus {modulus} is reducible over GF({p})")
        self.p, self.ell, self.k, self.modulus = p, ell, k, modulus
        self._pw = p ** np.arange(ell, dtype=np.int64)
        self.digits = (np.arange(k, dtype=np.int64)[:, None] // self._pw) % p
        self._build_tables()

    def __repr__(self):
        return f"Field(p={self.p}, ell={self.ell})"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.ell, self.modulus) == (
            other.p, other.ell, other.modulus)

    def __hash__(self):
        return hash((self.p, self.ell, self.modulus))

    # scalar helpers used while building tables
    def _enc(self, coeffs) -> int:
        return int(sum(int(c) * self.p**j for j, c in enumerate(coeffs)))

    def _scalar_mul(self, a: int, b: int) -> int:
        if self.ell == 1:
            return a * b % self.p
        prod = _poly_mul(list(self.digits[a]), list(self.digits[b]), self.p)
        return self._enc(_poly_mod(prod, self.modulus, self.p))

    def _scalar_pow(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self._scalar_mul(out, a)
            a = self._scalar_mul(a, a)
            e >>= 1
        return out

    def _is_generator(self, g: int) -> bool:
        return all(self._scalar_pow(g, (self.k - 1) // r) != 1
                   for r in _prime_factors(self.k - 1))

    def _powers_of_x(self):
        """Powers of ``x`` by shift-and-reduce; ``None`` if ``x`` is not primitive."""
        p, ell, m = self.p, self.ell, self.modulus
        state = [1] + [0] * (ell - 1)
        out = np.empty(self.k - 1, dtype=np.int64)
        for i in range(self.k - 1):
            out[i] = self._enc(state)
            if i and out[i] == 1:
                return None
            lead = state[-1]
            state = [0] + state[:-1]
            if lead:
                state = [(s - lead * c) % p for s, c in zip(state, m[:ell])]
        return out

    def _build_tables(self):
        k = self.k
        exp = self._powers_of_x() if self.ell > 1 else None
        if exp is None:
            g = next(g for g in range(2 if k > 2 else 1, k) if self._is_generator(g))
            exp = np.empty(k - 1, dtype=np.int64)
            acc = 1
            for i in range(k - 1):
                exp[i] = acc
                acc = self._scalar_mul(acc, g)
        log = np.full(k, -1, dtype=np.int64)
        log[exp] = np.arange(k - 1)
        self._exp = np.concatenate([exp, exp])
        self._log = log
        self.neg_table = (-self.digits % self.p) @ self._pw
        inv = np.zeros(k, dtype=np.int64)
        inv[1:] = self._exp[(-(log[1:])) % (k - 1)]
        self.inv_table = inv
        self.add_table = self.mul_table = None
        if k <= FULL_TABLE_ORDER:
            a = np.arange(k)
            self.add_table = self._add_digits(a[:, None], a[None, :])
            self.mul_table = self._mul_log(a[:, None], a[None, :])
        # absolute trace a + a^p + ... + a^(p^(ell-1)), landing in GF(p)
        tr = np.zeros(k, dtype=np.int64)
        cur = np.arange(k, dtype=np.int64)
        for _ in range(self.ell):
            tr = self._add_digits(tr, cur)
            cur = self._pow_log(cur, self.p)
        self.trace_table = tr

    def _add_digits(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        if self.p == 2:
            return a ^ b
        return ((self.digits[a] + self.digits[b]) % self.p) @ self._pw

    def _mul_log(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        zero = (a == 0) | (b == 0)
        out = self._exp[self._log[np.where(zero, 1, a)] + self._log[np.where(zero, 1, b)]]
        return np.where(zero, 0, out)

    def _pow_log(self, a, e: int):
        a = np.asarray(a)
        zero = a == 0
        out = self._exp[(self._log[np.where(zero, 1, a)] * e) % (self.k - 1)]
        return np.where(zero, 0, out)

    # public vectorized arithmetic
    def add(self, a, b):
        if self.add_table is not None:
            return self.add_table[a, b]
        return self._add_digits(a, b)

    def neg(self, a):
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add(a, self.neg_table[b])

    def mul(self, a, b):
        if self.mul_table is not None:
            return self.mul_table[a, b]
        return self._mul_log(a, b)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("0 has no inverse")
        return self.inv_table[a]

    def trace(self, a):
        return self.trace_table[a]

    def matmul(self, A, B):
        """Matrix product of element arrays over the field."""
        A, B = np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64)
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for t in range(A.shape[1]):
            out = self.add(out, self.mul(A[:, t, None], B[None, t, :]))
        return out


@functools.lru_cache(maxsize=None)
def make_field(p: int, ell: int = 1) -> Field:
    return Field(int(p), int(ell))


@dataclass(frozen=True, eq=False)
class Matrix:
    field: Field
    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.int64, ndmin=2)
        if e.size == 0:
            e = e.reshape(0, e.shape[-1] if e.ndim == 2 else 0)
        if np.any(e < 0) or np.any(e >= self.field.k):
            raise InputError(f"matrix entries must lie in [0, {self.field.k})")
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and np.array_equal(self.entries, other.entries))

    def columns(self, idx) -> "Matrix":
        return Matrix(self.field, self.entries[:, list(idx)])


def _rref(field: Field, A):
    A = np.array(A, dtype=np.int64)
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        j = r + nz[0]
        if j != r:
            A[[r, j]] = A[[j, r]]
        A[r] = field.mul(field.inv(A[r, c]), A[r])
        factors = A[:, c].copy()
        factors[r] = 0
        if factors.any():
            A = field.sub(A, field.mul(factors[:, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def rref_rank(m: Matrix):
    """Reduced row echelon form and rank."""
    A, pivots = _rref(m.field, m.entries)
    return Matrix(m.field, A), len(pivots)


def rank(m: Matrix) -> int:
    return len(_rref(m.field, m.entries)[1])


def null_space(m: Matrix) -> Matrix:
    """Basis (as rows) of ``{x : m x^T = 0}``."""
    f = m.field
    A, pivots = _rref(f, m.entries)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = np.zeros((len(free), m.cols), dtype=np.int64)
    for b, c in enumerate(free):
        basis[b, c] = 1
        for i, pc in enumerate(pivots):
            basis[b, pc] = f.neg(A[i, c])
    return Matrix(f, basis)


def read_matrix(path) -> Matrix:
    """Read ``p ell rows cols`` followed by ``rows`` lines of element codes."""
    with open(path) as fh:
        return parse_matrix(fh.read())


def parse_matrix(text: str) -> Matrix:
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or len(lines[0]) != 4:
        raise InputError("matrix header must be 'p ell rows cols'")
    p, ell, rows, cols = (int(t) for t in lines[0])
    body = lines[1:]
    if len(body) != rows or any(len(r) != cols for r in body):
        raise InputError(f"expected {rows} rows of {cols} entries")
    entries = np.array([[int(t) for t in r] for r in body], dtype=np.int64).reshape(rows, cols)
    return Matrix(make_field(p, ell), entries)


def format_matrix(m: Matrix) -> str:
    head = f"{m.field.p} {m.field.ell} {m.rows} {m.cols}"
    body = [" ".join(str(int(v)) for v in row) for row in m.entries]
    return "\n".join([head, *body]) + "\n"
