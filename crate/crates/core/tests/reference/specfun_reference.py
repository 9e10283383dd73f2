"""Regenerate the frozen 50-digit reference values in tests/specfun_reference.rs."""
from mpmath import mp, hyp1f1, hyperu, besselj, bessely, mpc, mpf

mp.dps = 50


def c(v):
    v = mpc(v)
    return f"c({mp.nstr(v.real, 20)}, {mp.nstr(v.imag, 20)})"


print("// Φ(b, c, z): (b, c, z, value)")
print("const PHI_CASES: &[(C64, C64, C64, C64)] = &[")
for mu in ["0.5", "1.5", "2.5", "0.999", "1.3"]:
    mu = mpf(mu)
    for b, cc in [((1 - mu) / 2, 1 - mu), ((1 + mu) / 2, 1 + mu)]:
        for y in [0.5, 3, 9.5, 10.5, 25, 50, 80]:
            z = mpc(0, y)
            print(f"    ({c(b)}, {c(cc)}, {c(z)}, {c(hyp1f1(b, cc, z))}),")
for mu in ["0.7", "1.3229"]:
    mu = mpf(mu)
    for b, cc in [((1 + 2j * mu) / 2, 1 + 2j * mu), ((1 - 2j * mu) / 2, 1 - 2j * mu)]:
        for y in [0.5, 3, 9.5, 25, 80]:
            z = mpc(0, y)
            print(f"    ({c(b)}, {c(cc)}, {c(z)}, {c(hyp1f1(b, cc, z))}),")
print("];")

print("// Ψ(b, c, z) = U(b, c, z): (b, c, z, value)")
print("const PSI_CASES: &[(f64, f64, C64, C64)] = &[")
for mu in [2, 3, 4]:
    cc = 1 - mu
    b = mpf(cc) / 2
    for y in [0.05, 0.5, 3, 9.5, 25, 60]:
        z = mpc(0, y)
        print(f"    ({mp.nstr(b, 20)}, {cc}.0, {c(z)}, {c(hyperu(b, cc, z))}),")
print("];")

print("// (τ, J0, Y0, J1, Y1)")
print("const BESSEL_CASES: &[(f64, f64, f64, f64, f64)] = &[")
for x in ["1e-6", "0.1", "1", "2.5", "5", "11.9", "12.1", "20", "50", "1000"]:
    x = mpf(x)
    vals = [besselj(0, x), bessely(0, x), besselj(1, x), bessely(1, x)]
    print("    (" + ", ".join(mp.nstr(v, 20) for v in [x] + vals) + "),")
print("];")
