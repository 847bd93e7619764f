"""Compiled LSTM forward/backward loops (gate order: input, forget, cell, output)."""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _sig(z):
    return 0.5 * (math.tanh(0.5 * z) + 1.0)


@njit(cache=True)
def forward(w_in, w_rec, bias, w_out, b_out, xs):
    n = xs.shape[0]
    hu = w_out.shape[0]
    ys = np.empty(n)
    hs = np.zeros((n, hu))
    gates = np.empty((n, 4 * hu))
    cs = np.empty((n, hu))
    h = np.zeros(hu)
    c = np.zeros(hu)
    for t in range(n):
        x = xs[t]
        for k in range(4 * hu):
            z = bias[k] + w_in[k] * x
            for j in range(hu):
                z += w_rec[k, j] * h[j]
            if 2 * hu <= k < 3 * hu:
                gates[t, k] = math.tanh(z)
            else:
                gates[t, k] = _sig(z)
        y = b_out
        for j in range(hu):
            c[j] = gates[t, hu + j] * c[j] + gates[t, j] * gates[t, 2 * hu + j]
            cs[t, j] = c[j]
        for j in range(hu):
            h[j] = gates[t, 3 * hu + j] * math.tanh(c[j])
            hs[t, j] = h[j]
            y += w_out[j] * h[j]
        ys[t] = y
    return ys, hs, gates, cs


@njit(cache=True)
def backward(w_rec, w_out, xs, dy, hs, gates, cs):
    n = xs.shape[0]
    hu = w_out.shape[0]
    g_w_in = np.zeros(4 * hu)
    g_w_rec = np.zeros((4 * hu, hu))
    g_bias = np.zeros(4 * hu)
    g_w_out = np.zeros(hu)
    g_b_out = 0.0
    dh_next = np.zeros(hu)
    dc_next = np.zeros(hu)
    dz = np.empty(4 * hu)
    for t in range(n - 1, -1, -1):
        g_b_out += dy[t]
        for j in range(hu):
            g_w_out[j] += dy[t] * hs[t, j]
        for j in range(hu):
            i = gates[t, j]
            f = gates[t, hu + j]
            g = gates[t, 2 * hu + j]
            o = gates[t, 3 * hu + j]
            tc = math.tanh(cs[t, j])
            c_prev = cs[t - 1, j] if t > 0 else 0.0
            dh = dy[t] * w_out[j] + dh_next[j]
            dc = dc_next[j] + dh * o * (1.0 - tc * tc)
            dz[j] = dc * g * i * (1.0 - i)
            dz[hu + j] = dc * c_prev * f * (1.0 - f)
            dz[2 * hu + j] = dc * i * (1.0 - g * g)
            dz[3 * hu + j] = dh * tc * o * (1.0 - o)
            dc_next[j] = dc * f
        for j in range(hu):
            acc = 0.0
            for k in range(4 * hu):
                acc += w_rec[k, j] * dz[k]
            dh_next[j] = acc
        for k in range(4 * hu):
            g_w_in[k] += dz[k] * xs[t]
            g_bias[k] += dz[k]
            if t > 0:
                for j in range(hu):
                    g_w_rec[k, j] += dz[k] * hs[t - 1, j]
    return g_w_in, g_w_rec, g_bias, g_w_out, g_b_out
