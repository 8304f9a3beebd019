"""Compiled inner loops for the mod-p^E column-stream accumulator.

The kernel holds one row per pivot column (row id == column), tagged in
a byte array `kind`: 0 = no pivot, 1 = unit row (pivot value 1,
lossless reductions), 2 = blocker row (pivot value p^b, installed from
Python as stage 2 discovers torsion; divisions are loss-tracked).

Columns of the working vector with no pivot sit on a flat touched list
instead of the heap: rows only carry tail entries above their own
pivot, so a pivot-free coordinate is final once every pivot coordinate
below it has been processed, and the end-of-column sweep reads
residues straight off the touched list.  Residues almost always cancel
completely; a surviving unit residue installs a new row, anything else
goes to the side pool for stage 2 (leading coordinates at or above the
noise cutoff are dropped).

Modular reduction uses a double-precision reciprocal when p^E < 2^26
(products then stay inside the 2^52 exact range), falling back to
hardware remainder for larger moduli.

Status codes: 0 done, 1 pool exhausted (resume at state[3]), 2 side
pool exhausted (resume), 3 mid-column overflow (caller restarts).
"""

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap

FASTMOD_LIMIT = 1 << 26


@njit(cache=True)
def _modinv(u, pe):
    a, b = u % pe, pe
    x0, x1 = 1, 0
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
    return x0 % pe


@njit(cache=True)
def _hpush(heap, hs, c, inheap):
    if inheap[c] == 0:
        inheap[c] = 1
        k = hs
        hs += 1
        heap[k] = c
        while k > 0:
            par = (k - 1) >> 1
            if heap[par] > heap[k]:
                heap[par], heap[k] = heap[k], heap[par]
                k = par
            else:
                break
    return hs


@njit(cache=True)
def _hpop(heap, hs, inheap):
    c = heap[0]
    hs -= 1
    heap[0] = heap[hs]
    k = 0
    while True:
        l = 2 * k + 1
        if l >= hs:
            break
        sm = l
        r2 = l + 1
        if r2 < hs and heap[r2] < heap[l]:
            sm = r2
        if heap[sm] < heap[k]:
            heap[sm], heap[k] = heap[k], heap[sm]
            k = sm
        else:
            break
    inheap[c] = 0
    return c, hs


@njit(cache=True, inline="always")
def _mulmod(q, w, pe, inv_pe, fastmod):
    if fastmod:
        qw = q * w
        t = np.int64(qw * inv_pe)
        r = qw - t * pe
        if r < 0:
            r += pe
        elif r >= pe:
            r -= pe
        return r
    return (q * w) % pe


@njit(cache=True)
def accumulate_kernel(idx, p, pe, cutoff, inv_pe, fastmod, pexp,
                      kind, rowexp, rowloss, rowptr, rowlen,
                      pool_idx, pool_val, pool_slot,
                      side_idx, side_val, side_ptr, side_loss,
                      state, buf, heap, inheap, touched, intouched,
                      resid, freemap, slotcol, scratch, slotused, slots):
    """Stream 4-entry columns (signs +,-,+,-; index -1 = absent).

    state: [0]=pool fill, [1]=side fill, [2]=side count, [3]=resume col.

    Fast path: when all present indices carry unit pivots and their
    tails live only on pivot-free or blocker columns (freemap >= 0),
    the whole reduction is the signed sum of four stored tails inside a
    compact scratch vector; a clean cancellation, the overwhelmingly
    common case once the basis has saturated, costs no heap traffic and
    a single deferred modulo per touched slot.
    """
    fill = state[0]
    sfill = state[1]
    scount = state[2]
    P = pool_idx.shape[0]
    SP = side_idx.shape[0]
    SC = side_ptr.shape[0] - 1
    m = buf.shape[0]
    ncols = idx.shape[0]
    i = state[3]
    while i < ncols:
        if fill + m + 16 > P:
            state[0] = fill
            state[1] = sfill
            state[2] = scount
            state[3] = i
            return 1
        if sfill + 2 * m + 16 > SP or scount + 2 > SC:
            state[0] = fill
            state[1] = sfill
            state[2] = scount
            state[3] = i
            return 2
        allunit = True
        for t in range(4):
            c = idx[i, t]
            if c >= 0 and kind[c] != 1:
                allunit = False
                break
        if allunit:
            ns = 0
            ok = True
            for t in range(4):
                c = idx[i, t]
                if c < 0:
                    continue
                sign = 1 if (t == 0 or t == 2) else -1
                base = rowptr[c]
                for k2 in range(rowlen[c]):
                    slot = pool_slot[base + k2]
                    if slot < 0:
                        if pool_idx[base + k2] == c:
                            continue
                        ok = False
                        break
                    if sign > 0:
                        scratch[slot] -= pool_val[base + k2]
                    else:
                        scratch[slot] += pool_val[base + k2]
                    if slotused[slot] == 0:
                        slotused[slot] = 1
                        slots[ns] = slot
                        ns += 1
                if not ok:
                    break
            if ok:
                # absorb torsion content: reduce blocker-column residues,
                # smallest column first (tails only point rightward)
                while True:
                    bc = -1
                    bs = -1
                    for k in range(ns):
                        s = slots[k]
                        v = scratch[s]
                        t64 = np.int64(np.float64(v) * inv_pe)
                        if v - t64 * pe != 0:
                            cc = slotcol[s]
                            if kind[cc] == 2 and (bc < 0 or cc < bc):
                                bc = cc
                                bs = s
                    if bc < 0:
                        break
                    v = scratch[bs] % pe
                    e = rowexp[bc]
                    a = 0
                    vv = v
                    while vv % p == 0:
                        vv //= p
                        a += 1
                    if a < e:
                        break  # pivot improvement: general path decides
                    q = v // pexp[e]
                    base = rowptr[bc]
                    for k2 in range(rowlen[bc]):
                        slot = pool_slot[base + k2]
                        if slot < 0:
                            ok = False
                            break
                        scratch[slot] -= _mulmod(q, pool_val[base + k2], pe, inv_pe, fastmod)
                        if slotused[slot] == 0:
                            slotused[slot] = 1
                            slots[ns] = slot
                            ns += 1
                    if not ok:
                        break
            clean = ok
            if ok:
                for k in range(ns):
                    v = scratch[slots[k]]
                    t64 = np.int64(np.float64(v) * inv_pe)
                    if v - t64 * pe != 0:
                        clean = False
                        break
            if clean:
                for k in range(ns):
                    scratch[slots[k]] = 0
                    slotused[slots[k]] = 0
                state[4] += 1
                i += 1
                continue
            # replay through the general path
            for k in range(ns):
                scratch[slots[k]] = 0
                slotused[slots[k]] = 0
            state[5] += 1
        hs = 0
        nt = 0
        for t in range(4):
            c = idx[i, t]
            if c < 0:
                continue
            v = buf[c]
            if t == 0 or t == 2:
                v += 1
            else:
                v += pe - 1
            if v >= pe:
                v -= pe
            buf[c] = v
            if kind[c] != 0:
                hs = _hpush(heap, hs, c, inheap)
            elif intouched[c] == 0:
                intouched[c] = 1
                touched[nt] = c
                nt += 1
        vloss = 0
        sided = 0
        sstart = sfill
        while hs > 0:
            j, hs = _hpop(heap, hs, inheap)
            v = buf[j]
            buf[j] = 0
            if v == 0:
                continue
            e = 0
            if kind[j] == 2:
                e = rowexp[j]
                a = 0
                vv = v
                while vv % p == 0:
                    vv //= p
                    a += 1
                if a < e:
                    # improvement candidate for stage 2
                    side_idx[sfill] = j
                    side_val[sfill] = v
                    sfill += 1
                    sided = 1
                    continue
                q = v // pexp[e]
            else:
                q = v
            base = rowptr[j]
            for k2 in range(rowlen[j]):
                c = pool_idx[base + k2]
                if c == j:
                    continue
                r = _mulmod(q, pool_val[base + k2], pe, inv_pe, fastmod)
                nv = buf[c] - r
                if nv < 0:
                    nv += pe
                buf[c] = nv
                if kind[c] != 0:
                    if nv != 0:
                        hs = _hpush(heap, hs, c, inheap)
                elif intouched[c] == 0:
                    intouched[c] = 1
                    touched[nt] = c
                    nt += 1
            nl = vloss + e
            if rowloss[j] > nl:
                nl = rowloss[j]
            vloss = nl
        # gather the residue, ascending; lattice columns almost always
        # cancel completely, so sorting only happens when something survives
        nres = 0
        for t in range(nt):
            c = touched[t]
            intouched[c] = 0
            if buf[c] != 0:
                resid[nres] = c
                nres += 1
        if nres == 0 and sided == 0:
            i += 1
            continue
        for a1 in range(1, nres):
            key = resid[a1]
            b1 = a1 - 1
            while b1 >= 0 and resid[b1] > key:
                resid[b1 + 1] = resid[b1]
                b1 -= 1
            resid[b1 + 1] = key
        k0 = 0
        if sided == 0:
            while k0 < nres:
                c0 = resid[k0]
                v0 = buf[c0]
                if v0 % p != 0:
                    # unit residue: install a new row pivoted at c0
                    uinv = _modinv(v0, pe)
                    start = fill
                    for k in range(k0, nres):
                        c = resid[k]
                        x = buf[c]
                        buf[c] = 0
                        if x == 0:
                            continue
                        pool_idx[fill] = c
                        pool_val[fill] = (uinv * x) % pe
                        pool_slot[fill] = freemap[c]
                        fill += 1
                    kind[c0] = 1
                    rowexp[c0] = 0
                    rowloss[c0] = vloss
                    rowptr[c0] = start
                    rowlen[c0] = fill - start
                    k0 = nres
                    break
                a = 0
                vv = v0
                while vv % p == 0:
                    vv //= p
                    a += 1
                if a >= cutoff:
                    # noise at working precision
                    buf[c0] = 0
                    k0 += 1
                    continue
                sided = 1
                break
        if sided == 1:
            for k in range(k0, nres):
                c = resid[k]
                x = buf[c]
                buf[c] = 0
                if x == 0:
                    continue
                side_idx[sfill] = c
                side_val[sfill] = x
                sfill += 1
            if sfill > sstart:
                side_ptr[scount] = sstart
                side_ptr[scount + 1] = sfill
                side_loss[scount] = vloss
                scount += 1
        i += 1
    state[0] = fill
    state[1] = sfill
    state[2] = scount
    state[3] = ncols
    return 0


@njit(cache=True)
def back_reduce_kernel(p, pe, inv_pe, fastmod, kind, rowexp, rowloss,
                       rowptr, rowlen, pool_idx, pool_val, pool_slot,
                       freemap, state, buf,
                       heap, inheap, touched, intouched, order):
    """Rewrite every unit row fully reduced, descending pivot order.

    Blocker rows are owned by stage 2 and are neither rewritten nor
    used for reduction here, so the sweep is lossless.  Returns 1 if
    the pool ran out (caller grows and retries), else 0.
    """
    fill = state[0]
    P = pool_idx.shape[0]
    m = buf.shape[0]
    nlive = 0
    for j in range(m):
        if kind[j] == 1:
            order[nlive] = j
            nlive += 1
    for t in range(nlive - 1, -1, -1):
        j = order[t]
        if fill + m + 16 > P:
            state[0] = fill
            return 1
        base = rowptr[j]
        ln = rowlen[j]
        hs = 0
        nt = 0
        for k2 in range(ln):
            c = pool_idx[base + k2]
            if c == j:
                continue
            nv = buf[c] + pool_val[base + k2]
            if nv >= pe:
                nv -= pe
            buf[c] = nv
            if kind[c] == 1:
                if nv != 0:
                    hs = _hpush(heap, hs, c, inheap)
            elif intouched[c] == 0:
                intouched[c] = 1
                touched[nt] = c
                nt += 1
        while hs > 0:
            c, hs = _hpop(heap, hs, inheap)
            v = buf[c]
            buf[c] = 0
            if v == 0:
                continue
            rb = rowptr[c]
            for k2 in range(rowlen[c]):
                cc = pool_idx[rb + k2]
                if cc == c:
                    continue
                r = _mulmod(v, pool_val[rb + k2], pe, inv_pe, fastmod)
                nv = buf[cc] - r
                if nv < 0:
                    nv += pe
                buf[cc] = nv
                if kind[cc] == 1:
                    if nv != 0:
                        hs = _hpush(heap, hs, cc, inheap)
                elif intouched[cc] == 0:
                    intouched[cc] = 1
                    touched[nt] = cc
                    nt += 1
        nres = 0
        for t2 in range(nt):
            c = touched[t2]
            intouched[c] = 0
            if buf[c] != 0:
                touched[nres] = c
                nres += 1
        for a1 in range(1, nres):
            key = touched[a1]
            b1 = a1 - 1
            while b1 >= 0 and touched[b1] > key:
                touched[b1 + 1] = touched[b1]
                b1 -= 1
            touched[b1 + 1] = key
        newstart = fill
        pool_idx[fill] = j
        pool_val[fill] = 1
        pool_slot[fill] = -1
        fill += 1
        for k in range(nres):
            c = touched[k]
            x = buf[c]
            buf[c] = 0
            if x == 0:
                continue
            pool_idx[fill] = c
            pool_val[fill] = x
            pool_slot[fill] = freemap[c]
            fill += 1
        rowptr[j] = newstart
        rowlen[j] = fill - newstart
    state[0] = fill
    return 0
