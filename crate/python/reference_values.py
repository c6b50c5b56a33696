#!/usr/bin/env python3
"""Regenerates the reference values frozen into the Rust test suites.

Everything is computed with mpmath at 40 digits straight from the defining
ratios (h, g, g~, h' and the two profile integrands), deliberately not from
the reduced closed forms the library uses, so the two routes are
independent. Run it and compare against the constants in the tests.
"""

from mpmath import mp, mpf, quad, findroot, sqrt, exp, pi

mp.dps = 40

K = mpf("3.3957")


def h(z):
    return (1 + z * z) / (z * (1 - z * z))


def g(z):
    return (1 + z * z) / (2 * z**3)


def g_tilde(z):
    return (1 + z * z) ** 2 / (2 * z**3 * (3 - z * z))


def h_prime(z):
    return (z**4 + 4 * z * z - 1) / (z * z * (1 - z * z) ** 2)


def t_lower(z):
    if z == 1:
        return mpf(1)
    return h_prime(z) / (h(z) * (h(z) - g_tilde(z)))


def t_upper(z):
    if z == 1:
        return mpf(1)
    return h_prime(z) / (h(z) * (h(z) + g(z)))


def profile_integrand(z):
    if z == 1:
        return mpf(-3) / 2
    return h_prime(z) / (h(z) + g(z)) - 1 / (1 - z)


def profile_tilde_integrand(z):
    if z == 1:
        return mpf(1) / 2
    return h_prime(z) / (h(z) - g_tilde(z)) - 1 / (1 - z)


def phi(z):
    return -quad(profile_integrand, [z, 1])


def phi_tilde(z):
    return -quad(profile_tilde_integrand, [z, 1])


def f_plain(z):
    return K * (1 - z) * exp(-phi(z))


def f_tilde(z):
    return K * (1 - z) * exp(-phi_tilde(z))


def defect_lower(z):
    return K / 4 * quad(t_lower, [z, 1])


def defect_upper(z):
    return K / 4 * quad(t_upper, [z, 1])


def invert(fn, target, lo, hi):
    return findroot(lambda z: fn(z) - target, (lo, hi), solver="bisect", tol=mpf(10) ** -35)


def show(name, value):
    print(f"{name:32} {mp.nstr(value, 20)}")


def main():
    z13 = sqrt(mpf(1) / 3)
    beta = findroot(profile_tilde_integrand, mpf("0.72"))

    show("beta", beta)
    show("t at sqrt(1/3)", t_lower(z13))
    show("T at sqrt(1/3)", t_upper(z13))
    show("h' at sqrt(1/3)", h_prime(z13))
    show("h at sqrt(1/3)", h(z13))

    phi13 = phi(z13)
    phi_tilde13 = phi_tilde(z13)
    phi_tilde_beta = phi_tilde(beta)
    show("Phi at sqrt(1/3)", phi13)
    show("Phi~ at sqrt(1/3)", phi_tilde13)
    show("Phi~ at beta", phi_tilde_beta)

    f13 = f_plain(z13)
    ftilde13 = f_tilde(z13)
    lb13 = defect_lower(z13)
    ub13 = defect_upper(z13)
    show("f at sqrt(1/3)", f13)
    show("f~ at sqrt(1/3)", ftilde13)
    show("LB at sqrt(1/3)", lb13)
    show("UB at sqrt(1/3)", ub13)

    t13 = t_lower(z13)
    show("A = K exp(-Phi13)", K * exp(-phi13))
    show("B = K exp(-Phi~ beta)", K * exp(-phi_tilde_beta))
    show("alpha", 2 * exp(phi13 - phi_tilde_beta) / (pi * t13))
    show("delta", (2 * pi) ** 2 * exp(phi_tilde_beta) * t13 / 4)
    show("gamma", (2 * pi) ** 2 * exp(phi13) / 4)

    show("short slope 2 pi / sqrt(f13)", 2 * pi / sqrt(f13))
    show("core cap K / (2 pi h13)", K / (2 * pi * h(z13)))

    # composed-bound spot values used by the bounds tests
    zbu = invert(defect_upper, mpf("0.1"), z13 + mpf("1e-9"), 1 - mpf("1e-9"))
    zbl = invert(defect_lower, mpf("0.1"), z13 + mpf("1e-9"), 1 - mpf("1e-9"))
    show("BU(0.1)", zbu)
    show("BL(0.1)", zbl)
    show("window hi at 0.1", (2 * pi) ** 2 / f_plain(zbu))
    show("window lo at 0.1", (2 * pi) ** 2 / f_tilde(zbl))

    zbl2 = invert(defect_lower, mpf("0.01"), z13 + mpf("1e-9"), 1 - mpf("1e-9"))
    zhat = invert(f_plain, f_tilde(zbl2), z13 + mpf("1e-9"), 1 - mpf("1e-9"))
    show("composed ell at 0.01", K / (2 * pi * h(zhat)))

    # where the plain profile leaves its invertible range under composition
    zstar = invert(f_tilde, f13, z13 + mpf("1e-9"), 1 - mpf("1e-9"))
    show("saturation radius z*", zstar)
    show("saturation defect LB(z*)", defect_lower(zstar))


if __name__ == "__main__":
    main()
