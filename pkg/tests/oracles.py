"""Independent reference computations used by the tests.

Nothing here imports the package's arithmetic: finite fields go through
sympy polynomials, cyclotomic numbers through sympy remainders modulo the
cyclotomic polynomial, and Walsh values through explicit double sums.
"""

from __future__ import annotations

import cmath
import itertools

import numpy as np
from sympy import GF, Poly, cyclotomic_poly, symbols

X = symbols("X")


# -- finite fields ----------------------------------------------------------------------


def code_to_poly(code: int, p: int, m: int) -> Poly:
    coeffs = [(code // p**i) % p for i in range(m)]  # low degree first
    return Poly(list(reversed(coeffs)), X, domain=GF(p))


def poly_to_code(poly: Poly, p: int, m: int) -> int:
    coeffs = [int(c) % p for c in poly.all_coeffs()][::-1]
    return sum(c * p**i for i, c in enumerate(coeffs))


def field_mul(a: int, b: int, p: int, modulus) -> int:
    m = len(modulus) - 1
    mod = Poly(list(modulus), X, domain=GF(p))
    return poly_to_code((code_to_poly(a, p, m) * code_to_poly(b, p, m)).rem(mod), p, m)


def field_pow(a: int, e: int, p: int, modulus) -> int:
    out = 1
    for _ in range(e):
        out = field_mul(out, a, p, modulus)
    return out


def field_trace(a: int, p: int, modulus) -> int:
    """Sum of the conjugates a^(p^i), which lands in the prime field."""
    m = len(modulus) - 1
    acc = Poly(0, X, domain=GF(p))
    cur = a
    for _ in range(m):
        acc = acc + code_to_poly(cur, p, m)
        cur = field_pow(cur, p, p, modulus)
    val = poly_to_code(acc, p, m)
    assert val < p, "trace must lie in the prime field"
    return val


# -- cyclotomic numbers -----------------------------------------------------------------


def reduce_counts(counts, p: int, k: int) -> tuple[int, ...]:
    """sum_j counts[j] zeta^j reduced modulo the p^k-th cyclotomic polynomial."""
    q = p**k
    phi = p ** (k - 1) * (p - 1)
    poly = Poly(list(reversed([int(c) for c in counts])), X)
    rem = poly.rem(Poly(cyclotomic_poly(q, X), X))
    coeffs = [int(c) for c in rem.all_coeffs()][::-1]
    return tuple(coeffs + [0] * (phi - len(coeffs)))


def to_complex(coeffs, p: int, k: int) -> complex:
    z = cmath.exp(2j * cmath.pi / p**k)
    return sum(int(c) * z**j for j, c in enumerate(coeffs))


# -- Walsh sums ---------------------------------------------------------------------------


def all_points(p: int, n: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(p), repeat=n))


def walsh_counts(table, p: int, k: int, n: int, a) -> list[int]:
    """Exponent counts of W(a) = sum_x zeta^(f(x) - p^(k-1) a.x), dot product on F_p^n."""
    q = p**k
    counts = [0] * q
    for idx, x in enumerate(all_points(p, n)):
        e = (int(table[idx]) - p ** (k - 1) * sum(ai * xi for ai, xi in zip(a, x))) % q
        counts[e] += 1
    return counts


def walsh_exact(table, p: int, k: int, n: int) -> list[tuple[int, ...]]:
    return [reduce_counts(walsh_counts(table, p, k, n, a), p, k) for a in all_points(p, n)]


def walsh_complex(table, p: int, k: int, n: int) -> np.ndarray:
    """Floating point spectrum as a matrix product (only for rounding-based sign checks)."""
    pts = np.array(all_points(p, n))
    ip = (pts @ pts.T) % p
    zk = np.exp(2j * np.pi * np.asarray(table) / p**k)
    return (np.exp(-2j * np.pi * ip / p) * zk[None, :]).sum(axis=1)


def unit_label(w: complex, magnitude: float) -> str:
    """Label of w / magnitude, which must be one of +1, +i, -1, -i."""
    u = w / magnitude
    best = min(((abs(u - v), lab) for v, lab in ((1, "+1"), (1j, "+i"), (-1, "-1"), (-1j, "-i"))))
    assert best[0] < 1e-6, f"{u} is not a fourth root of unity"
    return best[1]


def mu_of_quadratic_at_zero(table, p: int, n: int) -> str:
    """mu label of W(0) for a p-ary bent function whose f*(0) = 0."""
    w = walsh_complex(table, p, 1, n)[0]
    return unit_label(w, p ** (n / 2))


# -- plain-Python plateau check ---------------------------------------------------------


def plateau_order(table, p: int, k: int, n: int) -> int | None:
    """s with |W|^2 in {0, p^(n+s)}, using float magnitudes rounded to integers."""
    vals = walsh_complex(table, p, k, n)
    mags = np.rint(np.abs(vals) ** 2).astype(np.int64)
    nz = sorted(set(mags[mags > 0].tolist()))
    if len(nz) != 1:
        return None
    e, v = 0, nz[0]
    while v % p == 0:
        v //= p
        e += 1
    return e - n if v == 1 else None


# -- trace forms ----------------------------------------------------------------------------


def trace_gram(p: int, modulus) -> np.ndarray:
    """Gram matrix of (a, b) -> Tr(ab) on coordinate vectors (highest power first)."""
    m = len(modulus) - 1
    basis = [p ** (m - 1 - j) for j in range(m)]
    return np.array([[field_trace(field_mul(a, b, p, modulus), p, modulus) for b in basis] for a in basis])


def block_gram(*blocks) -> np.ndarray:
    """Block diagonal Gram matrix; an int block stands for the identity of that size."""
    mats = [np.eye(b, dtype=np.int64) if isinstance(b, int) else np.asarray(b) for b in blocks]
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=np.int64)
    i = 0
    for m in mats:
        out[i : i + m.shape[0], i : i + m.shape[0]] = m
        i += m.shape[0]
    return out


def walsh_complex_gram(table, p: int, k: int, gram) -> np.ndarray:
    """Float spectrum for the inner product x B y^T."""
    n = gram.shape[0]
    pts = np.array(all_points(p, n))
    ip = (pts @ gram @ pts.T) % p
    zk = np.exp(2j * np.pi * np.asarray(table) / p**k)
    return (np.exp(-2j * np.pi * ip / p) * zk[None, :]).sum(axis=1)


def check_bent_dual(table, dual, p: int, k: int, gram, mu_power: int | None = 0) -> bool:
    """W(a) = p^(n/2) * i^mu * zeta^(dual(a)) at every a (float check)."""
    n = gram.shape[0]
    W = walsh_complex_gram(table, p, k, gram)
    unit = 1j ** mu_power if mu_power is not None else 1
    want = unit * p ** (n / 2) * np.exp(2j * np.pi * np.asarray(dual) / p**k)
    return bool(np.allclose(W, want, atol=1e-6))
