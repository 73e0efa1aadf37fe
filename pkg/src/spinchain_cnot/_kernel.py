"""Compiled element-wise master-equation RHS and RK4 stepping.

Mirrors ``dissipators.master_rhs`` exactly; see tests/test_kernel.py.
With ``free`` false the diagonal -i[H0, rho] term is left out; the Lawson
stepper applies it exactly as an element-wise phase instead.
"""
from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True)
def rhs(rho, t, out, energy, bits, flip, g_emit, g_abs, omega_eig, use_phase,
        drive_on, freq, phase, amp, free=True):
    d = rho.shape[0]
    n = bits.shape[0]
    for a in range(d):
        for b in range(d):
            if free:
                out[a, b] = -1j * (energy[a] - energy[b]) * rho[a, b]
            else:
                out[a, b] = 0j

    if drive_on:
        z = np.exp(1j * (freq * t + phase))
        zc = np.conj(z)
        h = -0.5 * amp
        for a in range(d):
            for b in range(d):
                acc = 0j
                for k in range(n):
                    fa = flip[k, a]
                    fb = flip[k, b]
                    # (H rho)_ab: H[a, fa] = h*z if a has bit 0 (S+ term), else h*zc
                    ha = h * z if bits[k, a] == 0 else h * zc
                    # (rho H)_ab: H[fb, b] = h*z if b has bit 1, else h*zc
                    hb = h * z if bits[k, b] == 1 else h * zc
                    acc += ha * rho[fa, b] - rho[a, fb] * hb
                out[a, b] += -1j * acc

    u = np.empty(d, dtype=np.complex128)
    for k in range(n):
        if use_phase:
            for a in range(d):
                u[a] = np.exp(1j * omega_eig[k, a] * t)
        for a in range(d):
            ba = bits[k, a]
            la = g_emit[k, a] if ba == 0 else g_abs[k, a]
            for b in range(d):
                bb = bits[k, b]
                lb = g_emit[k, b] if bb == 0 else g_abs[k, b]
                val = -0.5 * (la + lb) * rho[a, b]
                if ba == bb:
                    src = rho[flip[k, a], flip[k, b]]
                    if ba == 1:
                        ph = u[b] * np.conj(u[a]) if use_phase else 1.0 + 0j
                        val += 0.5 * (g_emit[k, a] + g_emit[k, b]) * ph * src
                    else:
                        ph = u[a] * np.conj(u[b]) if use_phase else 1.0 + 0j
                        val += 0.5 * (g_abs[k, a] + g_abs[k, b]) * ph * src
                out[a, b] += val


@numba.njit(cache=True)
def advance(rho, t0, dt, nsteps, energy, bits, flip, g_emit, g_abs, omega_eig,
            use_phase, drive_on, freq, phase, amp):
    """Take ``nsteps`` classical RK4 steps of size dt starting at t0."""
    d = rho.shape[0]
    y = rho.copy()
    k1 = np.empty((d, d), dtype=np.complex128)
    k2 = np.empty_like(k1)
    k3 = np.empty_like(k1)
    k4 = np.empty_like(k1)
    tmp = np.empty_like(k1)
    for s in range(nsteps):
        t = t0 + s * dt
        rhs(y, t, k1, energy, bits, flip, g_emit, g_abs, omega_eig, use_phase,
            drive_on, freq, phase, amp)
        for a in range(d):
            for b in range(d):
                tmp[a, b] = y[a, b] + 0.5 * dt * k1[a, b]
        rhs(tmp, t + 0.5 * dt, k2, energy, bits, flip, g_emit, g_abs, omega_eig,
            use_phase, drive_on, freq, phase, amp)
        for a in range(d):
            for b in range(d):
                tmp[a, b] = y[a, b] + 0.5 * dt * k2[a, b]
        rhs(tmp, t + 0.5 * dt, k3, energy, bits, flip, g_emit, g_abs, omega_eig,
            use_phase, drive_on, freq, phase, amp)
        for a in range(d):
            for b in range(d):
                tmp[a, b] = y[a, b] + dt * k3[a, b]
        rhs(tmp, t + dt, k4, energy, bits, flip, g_emit, g_abs, omega_eig,
            use_phase, drive_on, freq, phase, amp)
        for a in range(d):
            for b in range(d):
                y[a, b] += dt / 6.0 * (k1[a, b] + 2.0 * k2[a, b] + 2.0 * k3[a, b] + k4[a, b])
    return y


@numba.njit(cache=True)
def advance_lawson(rho, t0, dt, nsteps, energy, bits, flip, g_emit, g_abs, omega_eig,
                   use_phase, drive_on, freq, phase, amp):
    """Integrating-factor RK4: free precession exact, RK4 on the rest."""
    d = rho.shape[0]
    y = rho.copy()
    half = np.empty((d, d), dtype=np.complex128)
    full = np.empty((d, d), dtype=np.complex128)
    for a in range(d):
        for b in range(d):
            w = energy[a] - energy[b]
            half[a, b] = np.exp(-0.5j * w * dt)
            full[a, b] = half[a, b] * half[a, b]
    k1 = np.empty((d, d), dtype=np.complex128)
    k2 = np.empty_like(k1)
    k3 = np.empty_like(k1)
    k4 = np.empty_like(k1)
    tmp = np.empty_like(k1)
    for s in range(nsteps):
        t = t0 + s * dt
        rhs(y, t, k1, energy, bits, flip, g_emit, g_abs, omega_eig, use_phase,
            drive_on, freq, phase, amp, False)
        for a in range(d):
            for b in range(d):
                tmp[a, b] = half[a, b] * (y[a, b] + 0.5 * dt * k1[a, b])
        rhs(tmp, t + 0.5 * dt, k2, energy, bits, flip, g_emit, g_abs, omega_eig,
            use_phase, drive_on, freq, phase, amp, False)
        for a in range(d):
            for b in range(d):
                tmp[a, b] = half[a, b] * y[a, b] + 0.5 * dt * k2[a, b]
        rhs(tmp, t + 0.5 * dt, k3, energy, bits, flip, g_emit, g_abs, omega_eig,
            use_phase, drive_on, freq, phase, amp, False)
        for a in range(d):
            for b in range(d):
                tmp[a, b] = full[a, b] * y[a, b] + dt * half[a, b] * k3[a, b]
        rhs(tmp, t + dt, k4, energy, bits, flip, g_emit, g_abs, omega_eig,
            use_phase, drive_on, freq, phase, amp, False)
        for a in range(d):
            for b in range(d):
                y[a, b] = full[a, b] * (y[a, b] + dt / 6.0 * k1[a, b]) + dt / 6.0 * (
                    2.0 * half[a, b] * (k2[a, b] + k3[a, b]) + k4[a, b])
    return y
