"""Margin losses induced by SIGTRON compared with logistic and focal losses.

Run with ``python3 demos/02_losses.py``.
"""
import numpy as np

from sigtron.extfun import SigtronParams
from sigtron.loss import Focal, logistic_loss, sigtron_loss

m = np.array([-4.0, -2.0, 0.0, 2.0, 4.0])
print("margin:      ", m)
print("logistic:    ", np.round(logistic_loss(m), 4))
for alpha in (0.5, 0.75, 1.25, 1.5):
    mag = 2.0 if alpha > 1 else -2.0
    p = SigtronParams.from_c_alpha(alpha, mag)
    print(f"sigtron {alpha:<4}:", np.round(sigtron_loss(p, m), 4))

# alpha < 1 is exactly zero past the kink, alpha > 1 is linear before it
f = Focal(0.5, 1.0, 0.0)
print("\nfocal(0.5, 1, 0) is half the logistic loss:",
      np.allclose(f.margin_loss(m, True), 0.5 * logistic_loss(m)))
print("focal(0.25, 2, 1), positive class:", np.round(Focal(0.25, 2.0, 1.0).margin_loss(m, True), 4))
