"""Qubit-based microwave photon detector.

Frequencies and rates are angular (rad/s) unless a name ends in _hz.
"""

import json
import math

from ._core import *  # noqa: F401,F403
from ._core import (
    Error,
    compute_spectrum,
    find_preset,
    make_signal,
)

__version__ = "0.1.0"

TWO_PI = 2.0 * math.pi


def hz(f):
    """Angular frequency from Hz."""
    return TWO_PI * f


def spectrum(system, signal, omega_p, components=False, threads=1):
    """compute_spectrum with numpy arrays in and out.

    Returns a dict with omega_p, s21 and, with components, cavity and qubit
    (shape [n_qubits, n_points]).
    """
    import numpy as np

    sp = compute_spectrum(system, signal, [float(w) for w in np.ravel(omega_p)], components, threads)
    out = {"omega_p": np.asarray(sp.omega_p), "s21": np.asarray(sp.s21, dtype=complex)}
    if components:
        out["cavity"] = np.asarray(sp.cavity, dtype=complex)
        out["qubit"] = np.asarray(sp.qubit, dtype=complex).reshape(len(sp.qubit), -1)
    out["sidecar"] = json.loads(sp.sidecar_json())
    return out


def preset_signal(preset_id, state, nbar=None, flux=None, tau_c=0.0):
    """System and signal of a named preset; nbar defaults to the preset's."""
    p = find_preset(preset_id)
    if nbar is None and flux is None and state != "vacuum":
        nbar = p.nbar
    return p.system, make_signal(state, nbar, flux, tau_c)
