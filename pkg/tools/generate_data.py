"""Offline generator for the shipped expansion files.

The degree-2 Hermitian Eisenstein series H_k (k = 4, 6, 8, 10, 12) are
written from the Maass-lift coefficient formula

    A(0) = 1,
    A(T) = sum_{d | e(T)} d^(k-1) * alpha_k(4 det(T) / d^2),

with e(T) = gcd(n, m, a1, a2) for T = [[n, r], [conj(r), m]],
r = (a1 + a2 i)/2, and

    alpha_k(0) = -2k / B_k,
    alpha_k(N) = alpha_k(0) * (-2(k-1) / B_{k-1,chi}) * s_k(N),
    s_k(N)     = sum_{d | N} (chi(d) - chi(N/d)) d^(k-2), halved when N = 3 mod 4,

where chi is the character of Q(i) and B_{w,chi} = -w E_{w-1} / 2 with
E_j the Euler numbers.  The index-1 Hermitian Jacobi Eisenstein series
E_{k,1} (k = 4, 6, 8) are the first Fourier-Jacobi coefficients of H_k
divided by alpha_k(0), so c(n, r) = alpha_k(D) / alpha_k(0) with
D = 4n - a1^2 - a2^2.  The weight-10 cusp form is built from eta^18:
c(n, r) = +a(j) if a1 is odd, -a(j) if a2 is odd, where D = 4j + 3 and
eta(tau)^18 = sum_j a(j) q^(j + 3/4).

Run from the repository root:  python tools/generate_data.py [out_dir]
"""

import gzip
import sys
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from pathlib import Path

HJF_TRUNC = 120
HMF_TRACE = 24
QEXP_TRUNC = 120


def chi4(d):
    if d % 2 == 0:
        return 0
    return 1 if d % 4 == 1 else -1


@lru_cache(maxsize=None)
def euler_number(n):
    # E_n via sum_{j} C(n, j) E_j = 0 over even j (secant numbers)
    if n % 2:
        return 0
    if n == 0:
        return 1
    from math import comb
    return -sum(comb(n, j) * euler_number(j) for j in range(0, n, 2))


@lru_cache(maxsize=None)
def bernoulli(n):
    from math import comb
    if n == 0:
        return Fraction(1)
    return -sum(comb(n + 1, j) * bernoulli(j) for j in range(n)) / (n + 1)


def bernoulli_chi(w):
    return Fraction(-w * euler_number(w - 1), 2)


def divisors(n):
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


@lru_cache(maxsize=None)
def alpha(k, N):
    a0 = Fraction(-2 * k) / bernoulli(k)
    if N == 0:
        return a0
    s = sum((chi4(d) - chi4(N // d)) * d ** (k - 2) for d in divisors(N))
    s = Fraction(s, 2) if N % 4 == 3 else Fraction(s)
    return a0 * Fraction(-2 * (k - 1)) / bernoulli_chi(k - 1) * s


def hermitian_eisenstein(k, t0):
    out = {}
    for n in range(t0 + 1):
        for m in range(t0 + 1 - n):
            R = isqrt(4 * n * m)
            for a1 in range(-R, R + 1):
                for a2 in range(-R, R + 1):
                    D = 4 * n * m - a1 * a1 - a2 * a2
                    if D < 0:
                        continue
                    if n == m == a1 == a2 == 0:
                        out[(n, a1, a2, m)] = Fraction(1)
                        continue
                    e = gcd(gcd(n, m), gcd(a1, a2))
                    v = sum(Fraction(d) ** (k - 1) * alpha(k, D // (d * d)) for d in divisors(e))
                    if v:
                        out[(n, a1, a2, m)] = v
    return out


def jacobi_eisenstein(k, N0):
    out = {}
    a0 = alpha(k, 0)
    for n in range(N0 + 1):
        R = isqrt(4 * n)
        for a1 in range(-R, R + 1):
            for a2 in range(-R, R + 1):
                D = 4 * n - a1 * a1 - a2 * a2
                if D >= 0:
                    v = alpha(k, D) / a0
                    if v:
                        out[(n, a1, a2)] = v
    return out


def eta_power(e, N):
    c = [0] * (N + 1)
    c[0] = 1
    for n in range(1, N + 1):
        for _ in range(e):
            for j in range(N, n - 1, -1):
                c[j] -= c[j - n]
    return c


def cusp_weight10(N0):
    a = eta_power(18, N0 + 1)
    out = {}
    for n in range(N0 + 1):
        R = isqrt(4 * n)
        for a1 in range(-R, R + 1):
            for a2 in range(-R, R + 1):
                D = 4 * n - a1 * a1 - a2 * a2
                if D < 0 or D % 4 != 3:
                    continue
                v = a[(D - 3) // 4] * (1 if a1 % 2 else -1)
                if v:
                    out[(n, a1, a2)] = Fraction(v)
    return out


def eisenstein_q(k, N):
    c = Fraction(-2 * k) / bernoulli(k)
    out = {0: Fraction(1)}
    for n in range(1, N + 1):
        out[n] = c * sum(d ** (k - 1) for d in divisors(n))
    return out


def write(path, headers, rows):
    lines = [f"!{k} {v}" for k, v in headers]
    for key in sorted(rows):
        v = rows[key]
        if v:
            lines.append(" ".join(str(x) for x in key) + f" {v.numerator} {v.denominator}")
    data = ("\n".join(lines) + "\n").encode()
    with gzip.GzipFile(path, "wb", mtime=0) as fh:
        fh.write(data)


def main(out):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    for k in (2, 4, 6):
        write(out / f"e{k}.qexp.gz",
              [("kind", "qexp"), ("weight", k), ("trunc", QEXP_TRUNC), ("quasi", int(k == 2))],
              {(n,): v for n, v in eisenstein_q(k, QEXP_TRUNC).items()})
    for k, parity in ((4, "+"), (6, "-"), (8, "+")):
        write(out / f"phi{k}.hjf.gz",
              [("kind", "hjf"), ("weight", k), ("index", 1), ("parity", parity), ("trunc", HJF_TRUNC)],
              jacobi_eisenstein(k, HJF_TRUNC))
    write(out / "phi10.hjf.gz",
          [("kind", "hjf"), ("weight", 10), ("index", 1), ("parity", "+"), ("trunc", HJF_TRUNC)],
          cusp_weight10(HJF_TRUNC))
    for k in (4, 6, 8, 10, 12):
        write(out / f"h{k}.hmf.gz",
              [("kind", "hmf"), ("weight", k), ("trunc_trace", HMF_TRACE)],
              hermitian_eisenstein(k, HMF_TRACE))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/hermod/data")
