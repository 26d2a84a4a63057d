"""Closed-form oracle for the d=1 non-measurable symbol residue.

V(n) = int_3^n g1(r) h(r) dr with h(r) = (sin log log r + cos log log r) / r,
g1 the quintic smoothstep on [3, 4]. Since h = F' with F(r) = log r sin log log r,
V(n) = F(n) - F(4) + int_3^4 g1 h.  Res_n = V(n) / log(1 + n).
Prints the frozen values used by the C++ tests.
"""
import mpmath as mp

mp.mp.dps = 40


def g1(r):
    t = r - 3
    return t**3 * (10 - 15 * t + 6 * t**2)


def h(r):
    ll = mp.log(mp.log(r))
    return (mp.sin(ll) + mp.cos(ll)) / r


def F(r):
    return mp.log(r) * mp.sin(mp.log(mp.log(r)))


C = mp.quad(lambda r: g1(r) * h(r), [3, 4]) - F(4)


def res_at_t(t):
    x = mp.exp(mp.exp(t))
    n = mp.ceil(x) if x < mp.mpf(2) ** 53 else x
    ln = mp.log(n)
    return (ln * mp.sin(mp.log(ln)) + C) / mp.log(1 + n)


if __name__ == "__main__":
    print("C =", mp.nstr(C, 15))
    for t in [1.0, 1.5, 2.0, float(mp.pi / 2)]:
        print(f"t={t:.6f} res={mp.nstr(res_at_t(t), 15)} sin(t)={mp.nstr(mp.sin(t), 15)}")
    for k in range(17):
        t = 0.6 + 0.4 * k
        print(f"t={t:.1f} res={mp.nstr(res_at_t(t), 15)} sin={mp.nstr(mp.sin(t), 15)}")
