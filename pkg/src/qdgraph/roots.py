"""Simultaneous polynomial root finding (Aberth-Ehrlich)."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import NonConvergence


def aberth(newton: Callable, n: int, center: complex = 0.0, radius: float = 1.0,
           max_iter: int = 500, tol: float = 1e-13) -> np.ndarray:
    """All ``n`` roots of a degree-``n`` polynomial.

    Parameters
    ----------
    newton : callable
        Maps an array of points to ``p(z) / p'(z)``.  The caller decides how
        ``p`` is evaluated (basis, precision).
    n : int
        Degree.
    center, radius : complex, float
        Circle carrying the initial configuration.  A small rotation keeps
        the starting points off any symmetry axis of the roots.
    max_iter : int
    tol : float
        A root is frozen once its correction is below ``tol * (1 + |z|)``.

    Returns
    -------
    ndarray of complex
    """
    if n == 0:
        return np.empty(0, dtype=complex)
    k = np.arange(n)
    z = center + radius * np.exp(2j * np.pi * (k + 0.25) / n + 0.4j)
    done = np.zeros(n, dtype=bool)
    for _ in range(max_iter):
        ratio = np.asarray(newton(z), dtype=complex)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            # coinciding iterates give non-finite corrections, masked below
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w) & ~done, w, 0.0)
        z = z - w
        done |= np.abs(w) <= tol * (1 + np.abs(z))
        if np.all(done):
            return z
    raise NonConvergence(f"Aberth iteration did not converge in {max_iter} steps")
