"""Named scalar functions addressable from configs and tests.

Vector-world builders return :class:`SmoothFunction` objects over a
pairing; matrix-world helpers (trace polynomials) act on square-matrix
predual slots flattened row-major against the trace pairing.
"""

from __future__ import annotations

import numpy as np

from .algebra import DualPairing
from .errors import ConfigError
from .poisson import SmoothFunction

__all__ = [
    "linear",
    "quadratic",
    "rigid_body_energy",
    "norm_squared",
    "trace_polynomial",
    "build_named_function",
]


def linear(pairing: DualPairing, x0) -> SmoothFunction:
    """f(b) = Re <b, x0>; the gradient is the constant x0."""
    x0 = np.asarray(x0, dtype=pairing.algebra.dtype)
    return SmoothFunction(
        eval=lambda b: pairing.real_pair(b, x0),
        grad=lambda b: x0,
    )


def quadratic(pairing: DualPairing, q=None) -> SmoothFunction:
    """f(b) = 1/2 Re(b^T Q b) for symmetric Q (identity by default).

    The gradient solves gram @ x = Q b; with the identity gram and Q = I
    this is f(b) = 1/2 <b, b> with gradient b.
    """
    g = pairing.gram
    qm = np.eye(pairing.predual_dim, dtype=g.dtype) if q is None else np.asarray(q, dtype=g.dtype)
    return SmoothFunction(
        eval=lambda b: 0.5 * float(np.real(np.asarray(b) @ qm @ np.asarray(b))),
        grad=lambda b: np.linalg.solve(g, qm @ np.asarray(b, dtype=g.dtype)),
    )


def rigid_body_energy(inertia) -> SmoothFunction:
    """h(b) = sum b_i^2 / (2 I_i) on the angular-momentum space with the
    identity gram; the gradient is the angular velocity b / I."""
    inertia = np.asarray(inertia, dtype=float)
    if np.any(inertia <= 0):
        raise ValueError("inertia moments must be positive")
    return SmoothFunction(
        eval=lambda b: float(0.5 * np.sum(np.asarray(b) ** 2 / inertia)),
        grad=lambda b: np.asarray(b) / inertia,
    )


def norm_squared() -> SmoothFunction:
    """f(b) = sum |b_i|^2; the Casimir of so(3)* under the identity gram."""
    return SmoothFunction(
        eval=lambda b: float(np.sum(np.abs(np.asarray(b)) ** 2)),
        grad=None,
    )


def trace_polynomial(n: int, coeffs) -> SmoothFunction:
    """f(B) = Re sum_k coeffs[k] tr(B^(k+1)) on n x n matrix points
    flattened row-major; the gradient (trace pairing) is
    sum_k (k+1) coeffs[k] B^k."""
    coeffs = list(coeffs)

    def _eval(b):
        m = np.asarray(b).reshape(n, n)
        acc = np.eye(n, dtype=m.dtype)
        total = 0.0
        for ck in coeffs:
            acc = acc @ m
            total += np.real(ck * np.trace(acc))
        return float(total)

    def _grad(b):
        m = np.asarray(b).reshape(n, n)
        out = np.zeros_like(m)
        acc = np.eye(n, dtype=m.dtype)
        for k, ck in enumerate(coeffs):
            out = out + (k + 1) * ck * acc
            acc = acc @ m
        return out.reshape(n * n)

    return SmoothFunction(eval=_eval, grad=_grad)


def build_named_function(name: str, params: dict, pairing: DualPairing) -> SmoothFunction:
    """Resolve a config entry {"name": ..., params} against a pairing."""
    if name == "linear":
        if "coeffs" not in params:
            raise ConfigError("linear function needs coefficients", "hamiltonian.coeffs")
        return linear(pairing, params["coeffs"])
    if name == "quadratic":
        return quadratic(pairing, params.get("gram"))
    if name == "rigid_body":
        if "inertia" not in params:
            raise ConfigError("rigid_body needs an inertia triple", "hamiltonian.inertia")
        return rigid_body_energy(params["inertia"])
    if name == "trace_poly":
        n = int(round(np.sqrt(pairing.predual_dim)))
        return trace_polynomial(n, params.get("coefficients", [1.0]))
    if name == "norm_squared":
        return norm_squared()
    raise ConfigError(f"unknown function {name!r}", "hamiltonian.name")
