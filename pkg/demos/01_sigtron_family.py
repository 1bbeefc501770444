"""Tour of the SIGTRON family: shape, kink, derivatives and the integral F.

Run with ``python3 demos/01_sigtron_family.py``.
"""
import numpy as np

from sigtron.extfun import (
    SigtronParams,
    f_integral,
    f_quadrature,
    inflection_point,
    sigtron,
    sigtron_nth_deriv,
)

x = np.linspace(-6.0, 6.0, 7)
print("x:", x)
for alpha in (0.0, 0.5, 1.0, 1.5, 2.0):
    mag = 2.0 if alpha > 1 else -2.0
    p = SigtronParams.from_c_alpha(alpha, mag) if alpha != 1 else SigtronParams(1.0, 1.0)
    print(f"alpha={alpha:<4} s(x) = {np.array2string(sigtron(p, x), precision=4)}")

# alpha < 1 saturates at 1 to the right of the kink, alpha > 1 reaches 0 to its left
p = SigtronParams.from_c_alpha(0.75, -2.0)
print("\nalpha=3/4 kink at", -p.c_alpha, " s(0) =", sigtron(p, 0.0))
print("inflection point:", inflection_point(p))
# higher derivatives exist for alpha in (1/2, 3/2)
for n in (1, 2, 3):
    print(f"d^{n}s/dx^{n} at 0:", sigtron_nth_deriv(p, n, 0.0))

# F(z; b) is the integral behind the induced loss; closed form vs quadrature
print("\nF(z; b): closed form against adaptive Simpson")
for b in (1.0, 3.0, 0.5, 2.5):
    z = 4.0
    print(f"  b={b}: {f_integral(z, b):.12f}  quadrature {f_quadrature(z, b):.12f}")
