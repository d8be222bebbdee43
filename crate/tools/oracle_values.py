"""High-precision reference values frozen into the Rust tests."""
import mpmath as mp

mp.mp.dps = 30

print("// Z(t) at 50 points, t = 10 * 500^(i/49) + 0.123 * i")
for i in range(50):
    t = mp.mpf(10) * mp.mpf(500) ** (mp.mpf(i) / 49) + mp.mpf("0.123") * i
    t = mp.mpf(mp.nstr(t, 17))
    print(f"({mp.nstr(t, 17)}, {mp.nstr(mp.siegelz(t), 17)}),")
print("// zeros")
for k in range(1, 4):
    print(mp.nstr(mp.im(mp.zetazero(k)), 20))
print("// count of zeros in (10, 100)")
print(mp.nzeros(100) - mp.nzeros(10))
print("// |zeta(1/2+20i)|^2", mp.nstr(abs(mp.zeta(mp.mpc(0.5, 20))) ** 2, 20))
print("// theta", [(t, mp.nstr(mp.siegeltheta(t), 20)) for t in (1, 2, 5, 10, 14, 30, 100, 1000)])
print("// first Gram point", mp.nstr(mp.grampoint(0), 20))
print("// F(T) = int_0^T Z^2")
for T in (20, 100):
    pts = [mp.mpf(j) / 4 for j in range(0, 4 * T + 1)]
    print(T, mp.nstr(mp.quad(lambda t: mp.siegelz(t) ** 2, pts), 20))
