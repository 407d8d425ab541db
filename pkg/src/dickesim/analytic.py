"""Closed-form single-excitation solution used as an independent oracle.

One resonant qubit, one excitation, gamma = gamma_phi = 0: within the
single-excitation sector the Lindblad equation reduces to the non-Hermitian
amplitude ODE

    dc_q/dt = -i g c_ph
    dc_ph/dt = -i g c_q - (kappa/2) c_ph

whose solution with c_q(0) = 1, written in terms of the two decay modes
lambda_pm = -kappa/4 +- W with W = sqrt((kappa/4)^2 - g^2), is

    c_q(t)  = A+ e^{lambda_+ t} + A- e^{lambda_- t},  A+- = (W +- kappa/4)/(2W)
    c_ph(t) = -i g (e^{lambda_+ t} - e^{lambda_- t}) / (2W)

W is imaginary for kappa < 4g (damped Rabi oscillation) and real above
(overdamped Purcell decay). Both exponents have non-positive real part, so
this form never overflows, unlike the cosh/sinh form.
"""

from __future__ import annotations

import numpy as np


def single_excitation_amplitudes(g: float, kappa: float, t: np.ndarray):
    """(c_q, c_ph) amplitudes at the given physical times."""
    t = np.asarray(t, dtype=float)
    w = np.sqrt(complex((kappa / 4.0) ** 2 - g**2))
    if abs(w) < 1e-14:  # critically damped limit of the mode sum
        decay = np.exp(-kappa * t / 4.0)
        c_q = decay * (1.0 + kappa * t / 4.0)
        c_ph = -1j * g * t * decay
        return c_q.astype(complex), c_ph
    lam_p = -kappa / 4.0 + w
    lam_m = -kappa / 4.0 - w
    e_p = np.exp(lam_p * t)
    e_m = np.exp(lam_m * t)
    a_p = (w + kappa / 4.0) / (2.0 * w)
    a_m = (w - kappa / 4.0) / (2.0 * w)
    c_q = a_p * e_p + a_m * e_m
    c_ph = -1j * g * (e_p - e_m) / (2.0 * w)
    return c_q, c_ph


def single_excitation_populations(g: float, kappa: float, t: np.ndarray):
    """(n_q, n_ph) for the resonant one-qubit one-excitation problem."""
    c_q, c_ph = single_excitation_amplitudes(g, kappa, t)
    return np.abs(c_q) ** 2, np.abs(c_ph) ** 2
