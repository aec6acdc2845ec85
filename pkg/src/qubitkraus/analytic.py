"""Closed-form interaction-picture Kraus operators ``K1 .. K8``.

``K1 .. K6`` are explicit.  ``K7`` and ``K8`` are diagonal with entries built
from ``tau = (g1 + g2) t``, ``W = (g1 - g2) / (g1 + g2)`` and the auxiliary
quantities ``A``, ``A'`` and ``B``.  Two forms of ``B**2`` are available:

``"printed"``
    the expression as published; its last term is ``8 exp(280 tau) cosh(120 W tau)``.
    It is exact at ``tau = 0`` but for any ``tau > 0`` the radicand of ``A``
    turns negative and :class:`FormulaDomainError` is raised.
``"corrected"``
    the same expression with that term replaced by ``8 exp(56 tau) cosh(24 W tau)``,
    i.e. ``B**2 = 64 exp(64 tau) + (2 exp(24 tau) sinh(16 W tau) + 4 exp(32 tau) sinh(8 W tau))**2``.
    This reproduces the numerically extracted channel.

``A``, ``A'`` and ``B`` grow or decay like ``exp(+-40 tau)``; the operators are
evaluated with that factor divided out, so they stay finite for any ``t``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import FormulaDomainError
from .kraus import KrausSet

B_FORMS = ("printed", "corrected")

_K1 = np.array([[0, 0, 0, 0], [0, 0, 0, 1j], [0, 0, 0, 0], [0, -1j, 0, 0]])
_K2 = np.array([[0, 0, 0, 0], [0, 0, 0, -1], [0, 0, 0, 0], [0, -1, 0, 0]], dtype=complex)
_K3 = np.array([[0, 0, 1, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]], dtype=complex)
_K4 = np.array([[0, 0, -1j, 0], [0, 0, 0, 0], [1j, 0, 0, 0], [0, 0, 0, 0]])
_K5 = np.diag([0, -1, 0, 1]).astype(complex)
_K6 = np.diag([1, 0, -1, 0]).astype(complex)


@dataclass(frozen=True)
class DiagonalCoefficients:
    """Auxiliary quantities of the diagonal operators.

    ``A``, ``A_prime`` and ``B`` are reported on their natural scale and may
    under- or overflow for large ``tau``; the operators never use them directly.
    """

    tau: float
    W: float
    B: float
    A: float
    A_prime: float
    b_form: str


def _exp_scaled(log_value):
    try:
        return math.exp(log_value)
    except OverflowError:
        return math.inf


def _exp_diff(p, q):
    """``exp(-p) - exp(-q)`` without cancellation or overflow for ``p, q >= 0``."""
    if p >= q:
        return math.exp(-q) * math.expm1(q - p)
    return -math.exp(-p) * math.expm1(p - q)


def _diagonal_block(rates, t, b_form):
    """Scaled quantities of the (I, I (x) sigma_z) block of the Choi matrix."""
    if b_form not in B_FORMS:
        raise ValueError(f"b_form must be one of {B_FORMS}, got {b_form!r}")
    g1, g2 = rates.gamma1, rates.gamma2
    tau = (g1 + g2) * t
    W = (g1 - g2) / (g1 + g2)
    x = math.exp(-16 * t * g1)
    y = math.exp(-16 * t * g2)
    sx, sy = math.exp(-8 * t * g1), math.exp(-8 * t * g2)
    u = sx * sy  # exp(-8 tau)
    x_minus_y = _exp_diff(16 * t * g1, 16 * t * g2)
    sx_minus_sy = _exp_diff(8 * t * g1, 8 * t * g2)
    a = (x * x + y * y) / 4 + (x + y) / 2 + 0.5
    c = 2 * u
    # b is -(2 e^{24 tau} sinh(16 W tau) + 4 e^{32 tau} sinh(8 W tau)) / (4 e^{40 tau}); c is 8 e^{32 tau} / (4 e^{40 tau})
    b = x_minus_y * ((x + y) / 4 + 0.5)
    a_minus_c = x_minus_y**2 / 4 + math.expm1(-8 * tau) ** 2 / 2 + sx_minus_sy**2 / 2
    if b_form == "corrected":
        r = math.hypot(c, b)  # B / (4 e^{40 tau})
        d8 = a + r
        d7 = max((a_minus_c * (a + c) - b * b) / d8, 0.0)
        r_minus_c = b * b / (r + c) if r + c > 0 else 0.0
    else:
        # printed B^2 exceeds the corrected one by 8 e^{280 tau} cosh(120 W tau) - 8 e^{56 tau} cosh(24 W tau)
        try:
            extra = (
                math.exp(200 * tau) * math.cosh(120 * W * tau)
                - math.exp(-24 * tau) * math.cosh(24 * W * tau)
            ) / 2
        except OverflowError:
            extra = math.inf
        r2 = c * c + b * b + extra
        if not r2 >= 0:
            raise FormulaDomainError(f"B**2 < 0 at tau={tau:.6g}")
        r = math.sqrt(r2)
        if not math.isfinite(r):
            raise FormulaDomainError(f"B overflows at tau={tau:.6g}")
        d8 = a + r
        d7 = a - r
        if d7 < 0:
            raise FormulaDomainError(
                f"radicand of A is negative ({4 * math.exp(-16 * tau) * d7:.3e}) at tau={tau:.6g}; "
                "the printed B leaves the domain of the closed form"
            )
        r_minus_c = r - c
    return tau, W, b, c, r, r_minus_c, d7, d8


def diagonal_coefficients(rates, t, b_form="printed"):
    """``tau``, ``W``, ``B``, ``A`` and ``A'`` at time ``t``."""
    tau, W, b, c, r, r_minus_c, d7, d8 = _diagonal_block(rates, t, b_form)
    n7 = math.hypot(r_minus_c, b)
    n8 = math.hypot(r + c, b)
    shrink = math.exp(-40 * tau)
    if shrink == 0.0:
        # every factor below is out of floating-point range; report the limits
        return DiagonalCoefficients(tau, W, math.inf, 0.0, 0.0, b_form)
    B = 4 * r * _exp_scaled(40 * tau)
    if d7 == 0:
        A = 0.0
    elif n7 == 0:
        A = math.inf
    else:
        A = math.sqrt(d7) / n7 / 8 * shrink
    A_prime = math.sqrt(d8) / n8 / 8 * shrink
    return DiagonalCoefficients(tau, W, B, A, A_prime, b_form)


def analytic_kraus(rates, t, b_form="printed"):
    """The eight closed-form Kraus operators at time ``t`` (interaction picture).

    All eight are returned, including zero operators, in the order ``K1 .. K8``.

    Raises
    ------
    FormulaDomainError
        If the chosen form of ``B`` leaves the real domain of ``A`` or ``A'``.
    """
    if not t >= 0:
        raise ValueError(f"time must be non-negative, got {t!r}")
    if not rates.gamma1 + rates.gamma2 > 0:
        raise ValueError("gamma1 + gamma2 must be positive")
    g1, g2 = rates.gamma1, rates.gamma2
    s2 = math.sqrt(-math.expm1(-32 * t * g2)) / 2
    s1 = math.sqrt(-math.expm1(-32 * t * g1)) / 2
    ops = [
        s2 * _K1,
        s2 * _K2,
        s1 * _K3,
        s1 * _K4,
        -math.expm1(-16 * t * g2) / 2 * _K5,
        -math.expm1(-16 * t * g1) / 2 * _K6,
    ]
    _, _, b, c, r, r_minus_c, d7, d8 = _diagonal_block(rates, t, b_form)
    # At W = 0 the bracket of K7 vanishes while A diverges; use the limit b -> 0+.
    n7 = math.hypot(r_minus_c, b)
    unit7 = np.array([r_minus_c - b, r_minus_c + b]) / n7 if n7 > 0 else np.array([-1.0, 1.0])
    k7 = 0.5 * math.sqrt(d7) * unit7
    n8 = math.hypot(r + c, b)
    unit8 = np.array([r + c + b, r + c - b]) / n8 if n8 > 0 else np.ones(2)
    k8 = -0.5 * math.sqrt(d8) * unit8
    ops.append(np.diag(np.tile(k7, 2)).astype(complex))
    ops.append(np.diag(np.tile(k8, 2)).astype(complex))
    ops = np.array(ops)
    weights = np.einsum("kab,kab->k", ops.conj(), ops).real
    return KrausSet(ops, weights, t, "interaction")


def asymptotic_sums(kraus_set):
    """``(sum_{i<=6} K_i K_i, sum_{i>=7} K_i K_i)`` for a set ordered as :func:`analytic_kraus`."""
    ops = kraus_set.operators
    return np.einsum("kab,kbc->ac", ops[:6], ops[:6]), np.einsum("kab,kbc->ac", ops[6:], ops[6:])
