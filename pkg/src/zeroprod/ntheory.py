"""Integer helpers: deterministic primality, prime search, factorization."""

# First twelve primes; as Miller-Rabin bases they decide every n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = _MR_BASES

_TRIAL_LIMIT = 1 << 16


def is_prime(m):
    """Deterministic Miller-Rabin, exact for all 64-bit inputs."""
    if m < 2:
        return False
    for sp in _SMALL_PRIMES:
        if m % sp == 0:
            return m == sp
    d = m - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def next_prime(m):
    """Least prime >= m."""
    if m <= 2:
        return 2
    c = m if m % 2 else m + 1
    while not is_prime(c):
        c += 2
    return c


def factorize(m):
    """Prime factorization of m >= 1 as a sorted dict {prime: exponent}.

    Trial division up to 2^16, then the cofactor is either prime (checked with
    `is_prime`) or handed to sympy's factorint.
    """
    if m < 1:
        raise ValueError(f"cannot factor {m}")
    out = {}
    d = 2
    while d * d <= m and d < _TRIAL_LIMIT:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
        else:
            from sympy import factorint

            for r, k in factorint(m).items():
                out[int(r)] = out.get(int(r), 0) + k
    return dict(sorted(out.items()))


def prime_power(q):
    """Return (p, e) with q = p**e, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    f = factorize(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    ((p, e),) = f.items()
    return p, e
