"""Brute-force reference implementations, independent of the fast algorithms."""
from __future__ import annotations

import itertools
import math

import numpy as np


def sec_brute(P):
    """Smallest enclosing circle by checking every pair and triple. O(n^4)."""
    P = [tuple(map(float, p)) for p in P]
    if len(P) == 1:
        return P[0], 0.0
    best = None

    def consider(c, r):
        nonlocal best
        if best is not None and r >= best[1]:
            return
        if all(math.dist(c, q) <= r * (1 + 1e-12) + 1e-15 for q in P):
            best = (c, r)

    for a, b in itertools.combinations(P, 2):
        c = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        consider(c, math.dist(a, b) / 2)
    for a, b, d in itertools.combinations(P, 3):
        bx, by, cx, cy = b[0] - a[0], b[1] - a[1], d[0] - a[0], d[1] - a[1]
        den = 2 * (bx * cy - by * cx)
        if abs(den) < 1e-14:
            continue
        ux = (cy * (bx * bx + by * by) - by * (cx * cx + cy * cy)) / den
        uy = (bx * (cx * cx + cy * cy) - cx * (bx * bx + by * by)) / den
        consider((a[0] + ux, a[1] + uy), math.hypot(ux, uy))
    return best


def weber_grid(P, rounds: int = 60, k: int = 21):
    """Geometric median by repeated grid refinement of the convex objective."""
    A = np.asarray(P, dtype=float)
    lo, hi = A.min(axis=0), A.max(axis=0)
    c = (lo + hi) / 2
    h = float(max(hi - lo)) or 1.0
    t = np.linspace(-1.0, 1.0, k)
    for _ in range(rounds):
        gx, gy = np.meshgrid(c[0] + h * t, c[1] + h * t)
        G = np.stack([gx.ravel(), gy.ravel()], axis=1)
        f = np.linalg.norm(G[:, None, :] - A[None, :, :], axis=2).sum(axis=1)
        c = G[int(np.argmin(f))]
        h *= 0.5
    return float(c[0]), float(c[1])


def weber_cost(P, x):
    return sum(math.dist(p, x) for p in P)


def similar_brute(A, B, eps: float = 1e-7) -> bool:
    """Try every pair-to-pair alignment, with and without reflection."""
    if len(A) != len(B):
        return False
    A = [complex(*p) for p in A]
    B = [complex(*p) for p in B]
    if len(A) < 2:
        return True
    scale = max(abs(p - q) for p in B for q in B) or 1.0
    a0, a1 = next((p, q) for p in A for q in A if abs(p - q) > 0)
    for conj in (False, True):
        src = [p.conjugate() for p in A] if conj else A
        s0, s1 = (a0.conjugate(), a1.conjugate()) if conj else (a0, a1)
        for b0 in B:
            for b1 in B:
                if b0 == b1:
                    continue
                m = (b1 - b0) / (s1 - s0)
                img = sorted((m * (p - s0) + b0 for p in src), key=lambda z: (z.real, z.imag))
                left = list(B)
                ok = True
                for z in img:
                    j = min(range(len(left)), key=lambda j: abs(left[j] - z))
                    if abs(left[j] - z) > eps * scale:
                        ok = False
                        break
                    left.pop(j)
                if ok:
                    return True
    return False


def theta_brute(P, c):
    """Smallest angular separation of the robots seen from c."""
    a = [math.atan2(p[1] - c[1], p[0] - c[0]) for p in P]
    best = math.inf
    for x, y in itertools.combinations(a, 2):
        d = abs(x - y) % (2 * math.pi)
        best = min(best, d, 2 * math.pi - d)
    return best
