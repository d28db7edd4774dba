"""Fibonacci residues, rank of apparition, and the idempotent/Fibonacci pair.

With A = [[1,0],[0,0]] and B = [[1,1],[1,0]] over GF(p), A B^k A is
F_{k+1} times the matrix unit E11. If alpha(p) is the least index with
F_alpha = 0 mod p, the shortest zero product of {A, B} is A B^(alpha-1) A,
of length alpha + 1.
"""

from dataclasses import dataclass

from .ffield import make_field
from .matspace import Matrix, identity, mat_mul
from .ntheory import factorize, is_prime, next_prime

MAX_N = 92
_MOD_LIMIT = 1 << 64


def fib_mod(k, m):
    """(F_k mod m, F_{k+1} mod m) by fast doubling."""
    if not 2 <= m < _MOD_LIMIT:
        raise ValueError(f"modulus {m} outside [2, 2^64)")
    if k < 0:
        raise ValueError("index must be >= 0")
    a, b = 0, 1  # F_0, F_1
    for bit in bin(k)[2:]:
        # F_2j = F_j (2 F_{j+1} - F_j), F_{2j+1} = F_j^2 + F_{j+1}^2
        c = a * ((2 * b - a) % m) % m
        d = (a * a + b * b) % m
        if bit == "1":
            a, b = d, (c + d) % m
        else:
            a, b = c, d
    return a, b


def fibonacci(k):
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def legendre5(p):
    """(5|p) for an odd prime p != 5, via Euler's criterion."""
    r = pow(5, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def rank_of_apparition_scan(p, limit=None):
    """Least alpha >= 1 with F_alpha = 0 mod p, by walking the sequence."""
    a, b = 1 % p, 1 % p  # F_1, F_2
    alpha = 1
    limit = limit or 2 * p + 2
    while a:
        a, b = b, (a + b) % p
        alpha += 1
        if alpha > limit:
            raise RuntimeError(f"no zero below index {limit}")
    return alpha


def rank_of_apparition(p):
    """Least alpha >= 1 with p | F_alpha.

    alpha divides p - (5|p) for p not in {2, 5}; the divisor is walked down
    one prime factor at a time while F stays 0 mod p.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        return 3
    if p == 5:
        return 5
    d = p - legendre5(p)
    for r in factorize(d):
        while d % r == 0 and fib_mod(d // r, p)[0] == 0:
            d //= r
    return d


def apparition_certificate(p, alpha):
    """True iff alpha is exactly the rank of apparition of p.

    Zeros of F mod p are precisely the multiples of the rank, so alpha is
    minimal iff F_alpha = 0 and F_(alpha/r) != 0 for every prime r | alpha.
    """
    if fib_mod(alpha, p)[0] != 0:
        return False
    return all(fib_mod(alpha // r, p)[0] != 0 for r in factorize(alpha))


def fibonacci_pair(field):
    A = Matrix.from_rows([[1, 0], [0, 0]], field)
    B = Matrix.from_rows([[1, 1], [1, 0]], field)
    return A, B


@dataclass(frozen=True)
class CxBundle:
    N: int
    p: int
    field: object
    A: Matrix
    B: Matrix
    k: int

    @property
    def alpha(self):
        return self.k + 1

    @property
    def shortest_length(self):
        return self.k + 2

    @property
    def generators(self):
        return [self.A, self.B]

    def to_dict(self):
        return {
            "N": self.N,
            "p": self.p,
            "q": self.p,
            "e": 1,
            "n": 2,
            "k": self.k,
            "alpha": self.alpha,
            "shortest_length": self.shortest_length,
            "generators": [self.A.rows(), self.B.rows()],
        }


def construct_counterexample(N):
    """Prime p >= F_{N+1} and the pair {A, B} over GF(p) with shortest zero length > N.

    p is the smallest such prime. Supported for 1 <= N <= 92 so F_{N+1}
    and p stay below 2^64.
    """
    if not 1 <= N <= MAX_N:
        raise ValueError(f"N must be in [1, {MAX_N}], got {N}")
    p = next_prime(fibonacci(N + 1))
    if p >= _MOD_LIMIT:  # pragma: no cover
        raise ValueError(f"prime {p} exceeds 64 bits")
    F = make_field(p)
    A, B = fibonacci_pair(F)
    return CxBundle(N, p, F, A, B, rank_of_apparition(p) - 1)


def first_identity_failure(p, K):
    """First k <= K where B^k (1,0)^T = (F_{k+1}, F_k)^T or A B^k A = F_{k+1} E11 fails."""
    F = make_field(p)
    A, B = fibonacci_pair(F)
    Bk = identity(2, F)
    for k in range(K + 1):
        fk, fk1 = fib_mod(k, p)
        # first column of B^k is B^k (1,0)^T
        col = (Bk[0, 0], Bk[1, 0])
        if col != (fk1, fk):
            return k
        ABA = mat_mul(mat_mul(A, Bk), A)
        if ABA.entries != (fk1, 0, 0, 0):
            return k
        Bk = mat_mul(Bk, B)
    return None


def verify_identity(p, K):
    return first_identity_failure(p, K) is None
