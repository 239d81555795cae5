"""Fixed-width kernels for the exhaustive sweeps.

All kernels work on int64 and assume moduli below ``KERNEL_LIMIT`` = 2**31 so
that every product of two residues fits in 63 bits.  The big-integer code in
the other modules is the reference; these kernels are cross-checked against
it in the test suite.
"""

import numpy as np

from ._accel import optional_njit

KERNEL_LIMIT = 1 << 31


@optional_njit(cache=True)
def gcd_i64(a, b):
    a = abs(a)
    b = abs(b)
    while b:
        a, b = b, a % b
    return a


@optional_njit(cache=True)
def jacobi_i64(a, n):
    a = a % n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            r = n % 8
            if r == 3 or r == 5:
                result = -result
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a, n = n % a, a
    if n == 1:
        return result
    return 0


@optional_njit(cache=True)
def _half(x, n):
    if x & 1:
        x += n
    return x >> 1


@optional_njit(cache=True)
def strong_lucas_i64(n, P, Q, D):
    """Strong Lucas condition for base (P, Q) with P*P - 4Q = D mod n.

    Caller guarantees n odd, gcd(n, 2QD) = 1 and 3 <= n < 2**31.
    """
    eps = jacobi_i64(D, n)
    m = n - eps
    kappa = 0
    while m % 2 == 0:
        m //= 2
        kappa += 1
    P = P % n
    Q = Q % n
    Dm = D % n
    # ladder over the bits of the odd part m, starting from U_1, V_1, Q^1
    nbits = 0
    tmp = m
    while tmp:
        nbits += 1
        tmp >>= 1
    U = 1
    V = P
    Qk = Q
    for i in range(nbits - 2, -1, -1):
        U = U * V % n
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if (m >> i) & 1:
            U, V = _half((P * U + V) % n, n), _half((Dm * U + P * V) % n, n)
            Qk = Qk * Q % n
    if U == 0:
        return True
    for _ in range(kappa):
        if V == 0:
            return True
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
    return False


@optional_njit(cache=True)
def brute_force_sl_i64(n, D):
    """Count P in [0, n) whose base (P, (P^2 - D)/4) is admissible and passes."""
    inv4 = ((n + 1) // 2) * ((n + 1) // 2) % n
    Dm = D % n
    count = 0
    for P in range(n):
        Q = (P * P - Dm) % n * inv4 % n
        if gcd_i64(Q, n) != 1:
            continue
        if strong_lucas_i64(n, P, Q, D):
            count += 1
    return count


@optional_njit(cache=True)
def spf_table(limit):
    """Smallest-prime-factor table for 0..limit (entries 0, 1 are 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            if i * i <= limit:
                for j in range(i * i, limit + 1, i):
                    if spf[j] == 0:
                        spf[j] = i
    return spf


@optional_njit(cache=True)
def census_row(n, D, spf):
    """Exact census quantities for one odd n >= 3 from the SPF table.

    Returns (sl, phi_d, eps_n, admissible, square_roots, big_omega, omega);
    sl, phi_d, admissible are 0 when gcd(n, 2D) > 1.
    """
    ps = np.empty(32, dtype=np.int64)
    rs = np.empty(32, dtype=np.int64)
    s = 0
    m = n
    while m > 1:
        p = spf[m]
        r = 0
        while m % p == 0:
            m //= p
            r += 1
        ps[s] = p
        rs[s] = r
        s += 1
    big_omega = 0
    for i in range(s):
        big_omega += rs[i]
    eps_n = 1
    phi = 1
    admissible = 1
    roots = 1
    k1 = 64
    ks = np.empty(s, dtype=np.int64)
    qs = np.empty(s, dtype=np.int64)
    for i in range(s):
        p = ps[i]
        e = jacobi_i64(D, p)
        if e == 0:
            return 0, 0, 0, 0, 0, big_omega, s
        if rs[i] % 2 == 1:
            eps_n *= e
        a = p - e
        pk = 1
        for _ in range(rs[i] - 1):
            pk *= p
        phi *= pk * a
        admissible *= pk * (p - 1 - e)
        roots *= 1 + e
        k = 0
        while a % 2 == 0:
            a //= 2
            k += 1
        ks[i] = k
        qs[i] = a
        if k < k1:
            k1 = k
    m = n - eps_n
    while m % 2 == 0:
        m //= 2
    prod_g = 1
    prod_g1 = 1
    for i in range(s):
        g = gcd_i64(m, qs[i])
        prod_g *= g
        prod_g1 *= g - 1
    geo = 0
    term = 1
    for _ in range(k1):
        geo += term
        term <<= s
    sl = prod_g1 + geo * prod_g
    return sl, phi, eps_n, admissible, roots, big_omega, s


@optional_njit(cache=True)
def census_range(lo, hi, D, spf):
    """census_row for every odd n in [lo, hi); columns as parallel arrays."""
    if lo % 2 == 0:
        lo += 1
    count = max(0, (hi - lo + 1) // 2)
    out = np.zeros((count, 8), dtype=np.int64)
    for idx in range(count):
        n = lo + 2 * idx
        sl, phi, eps_n, adm, roots, big_omega, omega = census_row(n, D, spf)
        out[idx, 0] = n
        out[idx, 1] = sl
        out[idx, 2] = phi
        out[idx, 3] = eps_n
        out[idx, 4] = adm
        out[idx, 5] = roots
        out[idx, 6] = big_omega
        out[idx, 7] = omega
    return out


@optional_njit(cache=True)
def count_primes_segmented(limit, segment):
    """pi(limit) by an odd-only segmented sieve; independent of sieve_primes."""
    if limit < 2:
        return 0
    r = 1
    while (r + 1) * (r + 1) <= limit:
        r += 1
    small = np.ones(r + 1, dtype=np.bool_)
    base = np.empty(r + 1, dtype=np.int64)
    nb = 0
    for i in range(2, r + 1):
        if small[i]:
            base[nb] = i
            nb += 1
            for j in range(i * i, r + 1, i):
                small[j] = False
    total = 1  # the prime 2
    mark = np.empty(segment, dtype=np.bool_)
    low = 3
    while low <= limit:
        high = min(low + 2 * segment, limit + 1)
        width = (high - low + 1) // 2
        mark[:width] = True
        for bi in range(1, nb):
            p = base[bi]
            if p * p >= high:
                break
            start = max(p * p, ((low + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            for j in range((start - low) // 2, width, p):
                mark[j] = False
        for j in range(width):
            if mark[j]:
                total += 1
        low += 2 * segment
    return total


CENSUS_COLUMNS = ("n", "sl", "phi_d", "eps_n", "admissible", "square_roots", "big_omega", "omega")
