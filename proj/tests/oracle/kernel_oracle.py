"""High-precision reference values for the triangle kernel tests.

Angles come from the plain hyperbolic law of cosines and derivatives from
central differences of that law at 40 digits, so nothing here shares code
or formulas with the C++ implementation.
"""
from mpmath import mp, mpf, acos, asinh, cosh, exp, log, pi, sinh

mp.dps = 40


def angles(l_ij, l_ik, l_jk):
    def at(a, b, opp):
        return acos((cosh(a) * cosh(b) - cosh(opp)) / (sinh(a) * sinh(b)))

    return at(l_ij, l_ik, l_jk), at(l_ij, l_jk, l_ik), at(l_ik, l_jk, l_ij)


def scaled(d, ua, ub):
    return 2 * asinh(sinh(d / 2) * exp(ua + ub))


def scaled_angles(d_ij, d_ik, d_jk, u):
    ui, uj, uk = u
    return angles(scaled(d_ij, ui, uj), scaled(d_ik, ui, uk), scaled(d_jk, uj, uk))


def derivative(fn, d, k, h=mpf("1e-12")):
    up = [mpf(0)] * 3
    dn = [mpf(0)] * 3
    up[k] = h
    dn[k] = -h
    return (fn(*d, up) - fn(*d, dn)) / (2 * h)


def main():
    one = mpf(1)
    a = angles(one, one, one)[0]
    print("equilateral angle", mp.nstr(a, 20))
    print("equilateral area", mp.nstr(pi - 3 * a, 20))
    print("scaled_length(1, ln 2, 0)", mp.nstr(scaled(one, log(2), 0), 20))
    print("equilateral d a_i/d u_j", mp.nstr(derivative(lambda *x: scaled_angles(*x[:3], x[3])[0], (one,) * 3, 1), 20))
    area = lambda *x: pi - sum(scaled_angles(*x[:3], x[3]))
    print("equilateral d Area/d u_i", mp.nstr(derivative(area, (one,) * 3, 0), 20))
    d = (mpf("0.8"), mpf("1.1"), mpf("1.3"))
    ai = lambda *x: scaled_angles(*x[:3], x[3])[0]
    print("(0.8, 1.1, 1.3) d a_i/d u_i", mp.nstr(derivative(ai, d, 0), 20))
    print("(0.8, 1.1, 1.3) d a_i/d u_j", mp.nstr(derivative(ai, d, 1), 20))
    print("(0.8, 1.1, 1.3) d Area/d u_i", mp.nstr(derivative(area, d, 0), 20))


if __name__ == "__main__":
    main()
