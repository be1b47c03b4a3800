"""Scalar golden-section minimization shared by the bound searches and fits."""

from __future__ import annotations

from typing import Callable

_INV_GOLDEN = 0.6180339887498949


def golden_section_minimize(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-9,
    max_iter: int = 200,
) -> tuple[float, float]:
    """Minimize a unimodal scalar function on [lo, hi].

    Returns ``(x, f(x))`` with the interval narrowed below ``tol`` (or after
    ``max_iter`` shrink steps).
    """
    if not hi > lo:
        raise ValueError("need hi > lo")
    a, b = float(lo), float(hi)
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)
