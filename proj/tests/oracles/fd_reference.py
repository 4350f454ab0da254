"""Independent L1 / central-difference solver for the worked example.

Discretizes D^rho (u - mu u_xx) - sigma(t) u_xx = r(t) g(x) directly: the
L1 sum is written over increments of W = u - mu delta^2 u and the implicit
step is solved with scipy's banded solver. Prints the max nodal error against
2(1+t^2) sin(pi x) for the requested meshes.

usage: python3 fd_reference.py [N] [M ...]
"""
import math
import sys

import numpy as np
from scipy.linalg import solve_banded

RHO, MU, T = 0.5, 1.0, 5.0


def sigma(t):
    return 2.0 + math.sqrt(t)


def r(t):
    return 16.0 / (3.0 * math.sqrt(2.0 * math.pi)) * t**1.5 + math.sqrt(2.0) * math.pi**2 / (
        1.0 + math.pi**2) * (2.0 + math.sqrt(t)) * (1.0 + t * t)


def exact(x, t):
    return 2.0 * (1.0 + t * t) * np.sin(np.pi * x)


def solve(N, M, grading):
    x = np.linspace(0.0, 1.0, N + 1)
    h = 1.0 / N
    t = T * (np.arange(M + 1) / M) ** grading
    g = math.sqrt(2.0) * (1.0 + math.pi**2) * np.sin(np.pi * x[1:-1])
    n = N - 1
    lap = lambda v: (np.concatenate(([0.0], v[:-1])) - 2.0 * v + np.concatenate((v[1:], [0.0]))) / h**2
    u = [2.0 * np.sin(np.pi * x[1:-1])]
    W = [u[0] - MU * lap(u[0])]
    G = math.gamma(2.0 - RHO)
    for k in range(1, M + 1):
        tk = t[k]
        # coefficient of (W_j - W_{j-1}) in the L1 sum
        j = np.arange(1, k + 1)
        coef = ((tk - t[j - 1]) ** (1 - RHO) - (tk - t[j]) ** (1 - RHO)) / (t[j] - t[j - 1]) / G
        known = np.zeros(n)
        for jj in range(1, k):
            known += coef[jj - 1] * (W[jj] - W[jj - 1])
        known -= coef[k - 1] * W[k - 1]
        # coef_k (u - mu lap u) - sigma lap u = r g - known
        s = sigma(tk)
        off = -(coef[k - 1] * MU + s) / h**2
        diag = coef[k - 1] + 2.0 * (coef[k - 1] * MU + s) / h**2
        ab = np.zeros((3, n))
        ab[0, 1:] = off
        ab[1, :] = diag
        ab[2, :-1] = off
        uk = solve_banded((1, 1), ab, r(tk) * g - known)
        u.append(uk)
        W.append(uk - MU * lap(uk))
    err = max(np.max(np.abs(u[k] - exact(x[1:-1], t[k]))) for k in range(M + 1))
    return err


if __name__ == "__main__":
    N = int(sys.argv[1]) if len(sys.argv) > 1 else 1000
    Ms = [int(a) for a in sys.argv[2:]] or [100, 200]
    grading = max(1.0, (2.0 - RHO) / RHO)
    for M in Ms:
        print(f"N={N} M={M} grading={grading:g} max_err={solve(N, M, grading):.10e}")
