"""Reference solvers used only by the tests; independent of csis.lasso."""

import math

import numpy as np


def kkt_violation(A, b, lam, x):
    """Largest violation of the LASSO optimality conditions at ``x``."""
    g = A.T @ (A @ x - b)
    nz = x != 0
    off = np.max(np.abs(g[~nz]) - lam, initial=0.0)
    on = np.max(np.abs(g[nz] + lam * np.sign(x[nz])), initial=0.0)
    return max(off, on)


def lasso_objective(A, b, lam, x):
    r = A @ x - b
    return 0.5 * r @ r + lam * np.abs(x).sum()


def lasso_homotopy(A, b, lam, max_steps=10_000):
    """Exact LASSO solution by following the piecewise-linear path in lambda.

    Starts from x = 0 at lambda = max|A^T b| and moves the breakpoints down to
    ``lam``, adding a coordinate when its correlation reaches the current
    lambda and dropping one when it crosses zero.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    n = A.shape[1]
    x = np.zeros(n)
    c = A.T @ b
    level = np.abs(c).max()
    if level <= lam:
        return x
    active = [int(np.argmax(np.abs(c)))]
    for _ in range(max_steps):
        S = np.array(active)
        signs = np.sign(c[S])
        d = np.linalg.solve(A[:, S].T @ A[:, S], signs)
        a = A.T @ (A[:, S] @ d)
        gamma, event = level - lam, None
        inactive = np.setdiff1d(np.arange(n), S)
        for j in inactive:
            for num, den in ((level - c[j], 1 - a[j]), (level + c[j], 1 + a[j])):
                if den > 1e-14:
                    g = num / den
                    if 1e-14 < g < gamma:
                        gamma, event = g, ("add", j)
        for k, j in enumerate(S):
            if d[k] * x[j] < 0:
                g = -x[j] / d[k]
                if 1e-14 < g < gamma:
                    gamma, event = g, ("drop", j)
        x[S] += gamma * d
        c = A.T @ (b - A @ x)
        level -= gamma
        if event is None:
            return x
        kind, j = event
        if kind == "add":
            active.append(int(j))
        else:
            active.remove(int(j))
            x[j] = 0.0
    raise RuntimeError("homotopy did not reach the target lambda")


def coordinate_descent(A, b, lam, sweeps=5000, tol=1e-15):
    """Plain cyclic coordinate descent, used as a second opinion."""
    A = np.asarray(A, dtype=float)
    x = np.zeros(A.shape[1])
    r = np.asarray(b, dtype=float).copy()
    col_sq = (A * A).sum(axis=0)
    for _ in range(sweeps):
        biggest = 0.0
        for j in range(A.shape[1]):
            old = x[j]
            rho = A[:, j] @ r + col_sq[j] * old
            new = np.sign(rho) * max(abs(rho) - lam, 0.0) / col_sq[j]
            if new != old:
                r -= A[:, j] * (new - old)
                x[j] = new
                biggest = max(biggest, abs(new - old))
        if biggest < tol:
            break
    return x


def direct_dct2(x):
    """O(B^4) orthonormal DCT-II by explicit summation."""
    b = x.shape[0]
    out = np.zeros((b, b))
    for k in range(b):
        for l in range(b):
            ck = math.sqrt((1 if k == 0 else 2) / b)
            cl = math.sqrt((1 if l == 0 else 2) / b)
            acc = 0.0
            for i in range(b):
                for j in range(b):
                    acc += (
                        x[i, j]
                        * math.cos(math.pi * (2 * i + 1) * k / (2 * b))
                        * math.cos(math.pi * (2 * j + 1) * l / (2 * b))
                    )
            out[k, l] = ck * cl * acc
    return out


def direct_idct2(y):
    b = y.shape[0]
    out = np.zeros((b, b))
    for i in range(b):
        for j in range(b):
            acc = 0.0
            for k in range(b):
                for l in range(b):
                    ck = math.sqrt((1 if k == 0 else 2) / b)
                    cl = math.sqrt((1 if l == 0 else 2) / b)
                    acc += (
                        ck * cl * y[k, l]
                        * math.cos(math.pi * (2 * i + 1) * k / (2 * b))
                        * math.cos(math.pi * (2 * j + 1) * l / (2 * b))
                    )
            out[i, j] = acc
    return out


def reference_des(key: bytes, block: bytes) -> bytes:
    """Single DES from the ``cryptography`` package (3DES with three equal keys)."""
    from cryptography.hazmat.decrepit.ciphers.algorithms import TripleDES
    from cryptography.hazmat.primitives.ciphers import Cipher, modes

    enc = Cipher(TripleDES(key * 3), modes.ECB()).encryptor()
    return enc.update(block) + enc.finalize()
