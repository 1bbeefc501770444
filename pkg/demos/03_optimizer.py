"""L-BFGS with the interval-bisection line search on a badly scaled quadratic.

Run with ``python3 demos/03_optimizer.py``.
"""
import numpy as np

from sigtron.optim import OptimConfig, minimize

A = np.diag(np.logspace(0, 4, 6))
b = np.ones(6)


def fun(x):
    return 0.5 * x @ A @ x - b @ x, A @ x - b


x, trace = minimize(fun, np.zeros(6), OptimConfig(eps_tol1=1e-8))
print("status:", trace.status, " iterations:", trace.n_iter, " gradient calls:", trace.n_grad)
print("max error against the exact minimizer:", np.max(np.abs(x - np.linalg.solve(A, b))))
print("first trace records:")
for line in trace.to_jsonl().splitlines()[:4]:
    print(" ", line)
