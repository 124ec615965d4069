"""Hot inner loops, in two flavours.

Every kernel exists as a numba ``@njit`` loop and as a vectorised numpy
function with the same signature and the same result.  ``APGROUPS_BACKEND``
picks which one the public names are bound to:

    APGROUPS_BACKEND=numba   (default when numba imports)
    APGROUPS_BACKEND=numpy   (pure numpy, no compilation)

Both variants stay importable as ``NUMBA_KERNELS`` / ``NUMPY_KERNELS`` so the
benchmark and the tests can run them side by side.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

_CHUNK = 1 << 18


# ---------------------------------------------------------------------------
# pure numpy
# ---------------------------------------------------------------------------

def _np_dlog_table(p, g):
    # g^(i*B + j) = g^(i*B) * g^j; products stay below 2^62 for p < 2^31
    n = p - 1
    block = int(np.sqrt(n)) + 1
    small = np.empty(block, dtype=np.int64)
    acc = 1
    for j in range(block):
        small[j] = acc
        acc = acc * g % p
    step = acc  # g^block
    dlog = np.full(p, -1, dtype=np.int64)
    base = 1
    for i in range(0, n, block):
        cnt = min(block, n - i)
        vals = small[:cnt] * base % p
        dlog[vals] = np.arange(i, i + cnt, dtype=np.int64)
        base = base * step % p
    return dlog


def _np_progression_mask(member, p, r):
    out = np.empty(p, dtype=np.bool_)
    for lo in range(0, p, _CHUNK):
        x = np.arange(lo, min(p, lo + _CHUNK), dtype=np.int64)
        ok = np.ones(x.shape[0], dtype=np.bool_)
        for s in range(1, r + 1):
            ok &= member[(1 + s * x) % p]
        out[lo:lo + x.shape[0]] = ok
    return out


def _np_count_aps(member, elems, p, r):
    if elems.shape[0] == 0:
        return 0
    b = np.arange(1, p, dtype=np.int64)
    rows = max(1, _CHUNK // max(p, 1))
    total = 0
    for lo in range(0, elems.shape[0], rows):
        a = elems[lo:lo + rows, None].astype(np.int64)
        ok = np.ones((a.shape[0], b.shape[0]), dtype=np.bool_)
        for s in range(1, r + 1):
            ok &= member[(a + s * b) % p]
        total += int(ok.sum())
    return total


def _np_linear_forms_count(member, L, b, p):
    m, t = L.shape
    total_points = p ** t
    count = 0
    for lo in range(0, total_points, _CHUNK):
        flat = np.arange(lo, min(total_points, lo + _CHUNK), dtype=np.int64)
        coords = np.empty((t, flat.shape[0]), dtype=np.int64)
        rest = flat
        for j in range(t - 1, -1, -1):
            coords[j] = rest % p
            rest = rest // p
        ok = np.ones(flat.shape[0], dtype=np.bool_)
        for i in range(m):
            val = np.full(flat.shape[0], b[i], dtype=np.int64)
            for j in range(t):
                val += L[i, j] * coords[j]
            ok &= member[val % p]
        count += int(ok.sum())
    return count


def _np_tuple_log_gcd(dlog, p, r):
    # gcd(p-1, dlog(1+t), ..., dlog(1+rt)) per t; -1 marks a zero term
    n = p - 1
    out = np.empty(p, dtype=np.int64)
    out[0] = -1
    for lo in range(1, p, _CHUNK):
        t = np.arange(lo, min(p, lo + _CHUNK), dtype=np.int64)
        g = np.full(t.shape[0], n, dtype=np.int64)
        bad = np.zeros(t.shape[0], dtype=np.bool_)
        for s in range(1, r + 1):
            y = (1 + s * t) % p
            bad |= y == 0
            g = np.gcd(g, np.where(y == 0, 0, dlog[y]))
        g[bad] = -1
        out[lo:lo + t.shape[0]] = g
    return out


NUMPY_KERNELS = {
    "dlog_table": _np_dlog_table,
    "progression_mask": _np_progression_mask,
    "count_aps": _np_count_aps,
    "linear_forms_count": _np_linear_forms_count,
    "tuple_log_gcd": _np_tuple_log_gcd,
}


# ---------------------------------------------------------------------------
# numba
# ---------------------------------------------------------------------------

NUMBA_KERNELS: dict = {}

if HAS_NUMBA:

    @njit(cache=True, nogil=True)
    def _nb_dlog_table(p, g):
        dlog = np.full(p, -1, dtype=np.int64)
        acc = 1
        for i in range(p - 1):
            dlog[acc] = i
            acc = acc * g % p
        return dlog

    @njit(cache=True, nogil=True)
    def _nb_progression_mask(member, p, r):
        out = np.empty(p, dtype=np.bool_)
        for x in range(p):
            ok = True
            y = 1
            for s in range(r):
                y += x
                if y >= p:
                    y -= p
                if not member[y]:
                    ok = False
                    break
            out[x] = ok
        return out

    @njit(cache=True, nogil=True)
    def _nb_count_aps(member, elems, p, r):
        total = 0
        for i in range(elems.shape[0]):
            a = elems[i]
            for b in range(1, p):
                y = a
                ok = True
                for s in range(r):
                    y += b
                    if y >= p:
                        y -= p
                    if not member[y]:
                        ok = False
                        break
                if ok:
                    total += 1
        return total

    @njit(cache=True, nogil=True)
    def _nb_linear_forms_count(member, L, b, p):
        m, t = L.shape
        base = np.empty(m, dtype=np.int64)
        for i in range(m):
            base[i] = b[i] % p
            if base[i] < 0:
                base[i] += p
        step = np.empty((m, t), dtype=np.int64)
        for i in range(m):
            for j in range(t):
                v = L[i, j] % p
                step[i, j] = v + p if v < 0 else v
        coords = np.zeros(t, dtype=np.int64)
        vals = base.copy()
        count = 0
        total_points = 1
        for _ in range(t):
            total_points *= p
        for _ in range(total_points):
            ok = True
            for i in range(m):
                if not member[vals[i]]:
                    ok = False
                    break
            if ok:
                count += 1
            # odometer increment, last coordinate fastest
            j = t - 1
            while j >= 0:
                coords[j] += 1
                for i in range(m):
                    vals[i] += step[i, j]
                    if vals[i] >= p:
                        vals[i] -= p
                if coords[j] < p:
                    break
                coords[j] = 0
                j -= 1
        return count

    @njit(cache=True, nogil=True)
    def _nb_gcd(a, b):
        while b:
            a, b = b, a % b
        return a

    @njit(cache=True, nogil=True)
    def _nb_tuple_log_gcd(dlog, p, r):
        n = p - 1
        out = np.empty(p, dtype=np.int64)
        out[0] = -1
        for t in range(1, p):
            g = n
            y = 1
            for s in range(r):
                y += t
                if y >= p:
                    y -= p
                if y == 0:
                    g = -1
                    break
                g = _nb_gcd(g, dlog[y])
            out[t] = g
        return out

    NUMBA_KERNELS = {
        "dlog_table": _nb_dlog_table,
        "progression_mask": _nb_progression_mask,
        "count_aps": _nb_count_aps,
        "linear_forms_count": _nb_linear_forms_count,
        "tuple_log_gcd": _nb_tuple_log_gcd,
    }


def _select_backend():
    want = os.environ.get("APGROUPS_BACKEND", "").strip().lower()
    if want == "numpy" or not HAS_NUMBA:
        return "numpy", NUMPY_KERNELS
    if want not in ("", "numba"):
        raise ValueError(f"APGROUPS_BACKEND must be 'numba' or 'numpy', got {want!r}")
    return "numba", NUMBA_KERNELS


BACKEND, _ACTIVE = _select_backend()

dlog_table = _ACTIVE["dlog_table"]
progression_mask = _ACTIVE["progression_mask"]
count_aps = _ACTIVE["count_aps"]
linear_forms_count = _ACTIVE["linear_forms_count"]
tuple_log_gcd = _ACTIVE["tuple_log_gcd"]
