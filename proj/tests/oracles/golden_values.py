"""Independent oracles for the frozen constants used in the C++ tests.

Run with `python3 tests/oracles/golden_values.py`; every printed value is
pasted into the corresponding test as a literal. Rational parts are evaluated
with fractions.Fraction, zeta and series with mpmath at 30 digits.
"""
from fractions import Fraction as F
from itertools import product

import math

import mpmath as mp
import numpy as np
from scipy import integrate

mp.mp.dps = 30


def splitmix_first(seed):
    mask = (1 << 64) - 1
    z = (seed + 0x9E3779B97F4A7C15) & mask
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
    return z ^ (z >> 31)


def chain_exact(p, V, r):
    """Constant chain with integer p, r so the rational part is exact."""
    p, V, r = F(p), F(V), F(r)
    cp = (p - 1) ** int(p)
    B = 2 ** int(p) * (1 + V)
    b = 2 ** int(p) * (B + (1 + B) ** int(p))
    return cp, B, b


def martingale_constants(b, p, r):
    b, p, r = mp.mpf(b), mp.mpf(p), mp.mpf(r)
    cp = (p - 1) ** p
    cprime = cp * b * (1 + 1 / cp) ** p
    Cprime = max(mp.mpf(1), cprime)
    c2 = cp * b * (4 ** p + 4 ** (p - r) * r / (p - r))
    c3 = 3 ** r * 4 ** p * b * (cp * b + p / (p - r) + 3 ** r)
    c4 = Cprime * c3 * mp.zeta(p / 2)
    K = 2 ** (p / 2) * c2 * Cprime + c4
    return dict(cp=cp, cprime=cprime, Cprime=Cprime, c2=c2, c3=c3, c4=c4, K=K)


def q(x):
    return mp.mpf(x.numerator) / x.denominator


def main():
    print("splitmix mix(0 + golden) =", hex(splitmix_first(0)))

    cp, B, b = chain_exact(3, 1, 1)
    print("p=3 V=1 r=1: c_p =", cp, " B =", B, " b =", b)
    cprime = cp * b * (1 + F(1) / cp) ** 3
    print("  c' =", cprime, "=", float(cprime))
    c2 = cp * b * (4 ** 3 + F(4 ** 2) * F(1, 2))
    c3 = 3 * 4 ** 3 * b * (cp * b + F(3, 2) + 3)
    print("  c_2 =", c2, " c_3 =", c3)
    c4 = q(cprime) * q(c3) * mp.zeta(1.5)
    K = mp.sqrt(8) * q(c2) * q(cprime) + c4
    c_final = K * mp.zeta(2)
    print("  c4 =", mp.nstr(c4, 20), " K =", mp.nstr(K, 20))
    print("  c(3,1,1,0,1) =", mp.nstr(c_final, 20))
    print("  theorem1_bound(a=2,J=5,p=3,V=8,r=1) =", mp.nstr(5 + 2 * c_final, 20))
    print("  corollary2(p=3,V=1,x0=2) =", mp.nstr(c_final + 2, 20))

    mc = martingale_constants(1, 3, 1)
    print("theorem4_constant(b=1,p=3,r=1) =", mp.nstr(mc["K"], 20))
    mc = martingale_constants(1, 3, 2.5)
    print("theorem4_constant(b=1,p=3,r=2.5) =", mp.nstr(mc["K"], 20))

    v = mp.mpf("0.5")
    print("recentered(0.5, 2.5) =", mp.nstr(2 ** mp.mpf(2.5) * (v + (1 + v) ** mp.mpf(2.5)), 20))

    # Tail series, p=5, a=1, J=0, V=1, V'=2^5 (1 + 2^5) = 1056.
    # sum_{l>=0} f(l) is an exact float fsum of the first L terms plus the
    # Euler-Maclaurin remainder int_L^inf f + f(L)/2 - f'(L)/12 in mpmath;
    # mpmath.nsum extrapolation is unreliable for these algebraic tails.
    p, a, J, V = 5.0, 1.0, 0.0, 1.0
    Vp = 2 ** p * (V + (1 + V) ** p)
    cp = (p - 1) ** p
    shift = J + V ** (1 / p)

    def series(alpha, beta, d, L=10 ** 6):
        ls = np.arange(L, dtype=np.float64)
        head = math.fsum((ls + 1) ** alpha * (d + a * ls) ** -beta)
        f = lambda x: (x + 1) ** alpha * (mp.mpf(d) + a * x) ** -beta
        Lm = mp.mpf(L)
        rem = mp.quad(f, [Lm, 10 * Lm, 100 * Lm, mp.inf]) + f(Lm) / 2 - mp.diff(f, Lm) / 12
        return mp.mpf(head) + rem

    print("V' =", Vp)
    tail50 = cp * Vp * series(p / 2, p, 50.0 - shift)
    print("p4_tail_probability(t=50) =", mp.nstr(tail50, 20))

    # With d = 1 the termwise-integrated series is cp V' zeta(3/2) / 4.
    t0 = shift + 1
    closed = t0 + cp * Vp * mp.zeta(1.5) / (p - 1)
    print("p4_expectation_bound(p=5) closed form =", mp.nstr(closed, 20))

    # Independent route: adaptive quadrature in t of the tail series.
    big = np.arange(2 * 10 ** 5, dtype=np.float64)

    def tail_float(t):
        d = t - shift
        L = big.size
        head = math.fsum((big + 1) ** 2.5 * (d + big) ** -5.0)
        f = lambda x: (x + 1) ** 2.5 * (d + x) ** -5
        rem = float(mp.quad(f, [L, 10 * L, 100 * L, mp.inf]))
        return cp * Vp * (head + rem + f(L) / 2)

    pieces = [t0, t0 + 4, t0 + 32, t0 + 256, t0 + 4096, np.inf]
    quad = t0
    for lo, hi in zip(pieces, pieces[1:]):
        v, _ = integrate.quad(tail_float, lo, hi, epsabs=0, epsrel=1e-10, limit=200)
        quad += v
    print("p4_expectation_bound(p=5) quadrature =", repr(quad))

    # Theorem-4 designed martingale: +3 w.p. 1/4, -1 w.p. 3/4, M_0 = 0.
    def thm4_lhs(t, up, pu, r):
        total = F(0)
        for pattern in product([0, 1], repeat=t):
            m, prob, alive = 0, F(1), True
            for n, s in enumerate(pattern, start=1):
                m += up if s else -1
                prob *= pu if s else 1 - pu
                if m <= n:
                    alive = False
                    break
            if alive and m > 0:
                total += prob * F(m) ** r
        return total

    lhs4 = thm4_lhs(4, 3, F(1, 4), 1)
    print("theorem4 lhs t=4 (r=1) =", lhs4, "=", float(lhs4))

    # Lemma 8 designed martingale: +7 w.p. 1/8, -1 w.p. 7/8; P(tau > S_x), x = 4.
    def lemma8_exact(x, up, pu):
        # depth-first over stopped paths, each counted once
        def rec(n, m, prob):
            if n > 0 and m >= x:
                return prob if m > n else F(0)
            if n > 0 and m <= n:
                return F(0)
            return rec(n + 1, m + up, prob * pu) + rec(n + 1, m - 1, prob * (1 - pu))
        return rec(0, 0, F(1))

    l8 = lemma8_exact(4, 7, F(1, 8))
    print("lemma8 P(tau > S_4) =", l8, "=", float(l8))

    # Amassed chain, M = 2: E(X_2).
    print("amassed M=2 E(X_2) =", F(1, 4) * 3 + F(3, 4) * 2)


if __name__ == "__main__":
    main()
