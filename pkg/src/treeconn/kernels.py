"""Array kernels for the hot enumeration and search loops.

Every kernel is written against plain numpy arrays and is compiled with
numba when available.  Setting ``TREECONN_BACKEND=python`` selects the
uncompiled path (identical code, interpreted); ``benchmarks/bench_kernels.py``
compares the two.
"""

from __future__ import annotations

import os

import numpy as np

_REQUESTED = os.environ.get("TREECONN_BACKEND", "numba").strip().lower()
if _REQUESTED not in ("numba", "python"):
    raise RuntimeError(
        f"TREECONN_BACKEND={_REQUESTED!r} not understood; use 'numba' or 'python'"
    )

JIT_ENABLED = False
if _REQUESTED == "numba":
    try:
        from numba import njit as _njit

        JIT_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        JIT_ENABLED = False

BACKEND = "numba" if JIT_ENABLED else "python"


def _jit(fn):
    if JIT_ENABLED:
        return _njit(cache=True)(fn)
    return fn


def py_func(kernel):
    """The interpreted version of a kernel (itself, when not compiled)."""
    return getattr(kernel, "py_func", kernel)


# Search statuses shared by the resumable kernels.
FOUND = 0
EXHAUSTED = 1
PAUSED = 2


@_jit
def embedding_search(meet_s, meet_t, pin_root, max_out):
    """Enumerate structure-preserving increasing injections by backtracking.

    meet_s/meet_t: (n, n) int64 meet tables.  With true meet tables and
    pin_root this yields tree embeddings; with min-tables and no root pin it
    yields plain increasing injections.  Candidates are scanned in ascending
    order, so rows come out in lexicographic order.

    Returns (count, out); only the first max_out rows are materialized, the
    count keeps running so callers can detect budget overflow exactly.
    """
    ns = meet_s.shape[0]
    nt = meet_t.shape[0]
    out = np.empty((max_out, ns), dtype=np.int64)
    img = np.empty(ns, dtype=np.int64)
    cand = np.zeros(ns, dtype=np.int64)
    count = 0
    d = 0
    while d >= 0:
        if d == ns:
            if count < max_out:
                for x in range(ns):
                    out[count, x] = img[x]
            count += 1
            d -= 1
            continue
        c = cand[d]
        lo = 0 if d == 0 else img[d - 1] + 1
        if c < lo:
            c = lo
        hi = 1 if (d == 0 and pin_root) else nt
        chosen = np.int64(-1)
        while c < hi:
            ok = True
            for y in range(d):
                if meet_t[img[y], c] != img[meet_s[y, d]]:
                    ok = False
                    break
            if ok:
                chosen = c
                break
            c += 1
        if chosen < 0:
            d -= 1
            continue
        img[d] = chosen
        cand[d] = chosen + 1
        d += 1
        if d < ns:
            cand[d] = 0
    return count, out


@_jit
def rigid_count(skels, dom, cap):
    """Number of surjections whose induced embedding is one of ``skels``.

    skels: (k, ns) rows are embeddings of the small tree into the big one.
    dom: (nt, nt) bool, dom[u, y] true when assigning image x with skeleton
    vertex u=skel[x] to position y is allowed (ancestry for trees, <= for
    linear orders).  The count is clamped to cap + 1 as soon as it is known
    to exceed cap.
    """
    k = skels.shape[0]
    ns = skels.shape[1]
    nt = dom.shape[0]
    inskel = np.zeros(nt, dtype=np.bool_)
    total = np.int64(0)
    for p in range(k):
        for y in range(nt):
            inskel[y] = False
        for x in range(ns):
            inskel[skels[p, x]] = True
        prod = np.int64(1)
        for y in range(nt):
            if inskel[y]:
                continue
            cnt = np.int64(0)
            for x in range(ns):
                if dom[skels[p, x], y]:
                    cnt += 1
            prod *= cnt
            if prod == 0 or prod > cap:
                break
        total += prod
        if total > cap:
            return cap + np.int64(1)
    return total


@_jit
def rigid_fill(skels, dom, out):
    """Materialize the surjections counted by ``rigid_count`` into ``out``.

    Rows are grouped by skeleton and enumerated odometer-style over the free
    positions; the caller sorts the result into canonical order.
    """
    k = skels.shape[0]
    ns = skels.shape[1]
    nt = dom.shape[0]
    allowed = np.empty((nt, ns), dtype=np.int64)
    na = np.empty(nt, dtype=np.int64)
    freev = np.empty(nt, dtype=np.int64)
    idx = np.empty(nt, dtype=np.int64)
    s = np.empty(nt, dtype=np.int64)
    pos = 0
    for p in range(k):
        for y in range(nt):
            s[y] = -1
        for x in range(ns):
            s[skels[p, x]] = x
        nf = 0
        feasible = True
        for y in range(nt):
            if s[y] >= 0:
                continue
            cnt = 0
            for x in range(ns):
                if dom[skels[p, x], y]:
                    allowed[nf, cnt] = x
                    cnt += 1
            if cnt == 0:
                feasible = False
                break
            na[nf] = cnt
            freev[nf] = y
            nf += 1
        if not feasible:
            continue
        for f in range(nf):
            idx[f] = 0
        while True:
            for f in range(nf):
                s[freev[f]] = allowed[f, idx[f]]
            for y in range(nt):
                out[pos, y] = s[y]
            pos += 1
            f = nf - 1
            while f >= 0:
                idx[f] += 1
                if idx[f] < na[f]:
                    break
                idx[f] = 0
                f -= 1
            if f < 0:
                break
    return pos


@_jit
def pair_filter(surjs, embs, caps):
    """Mask of surjection/embedding pairs that are partial inverses.

    Pair (s, j) passes when s(j(x)) = x for every x and s(y) stays at or
    below caps[q, y], the least x whose embedded image lies strictly above y.
    """
    a = surjs.shape[0]
    b = embs.shape[0]
    ns = embs.shape[1]
    nt = surjs.shape[1]
    mask = np.zeros((a, b), dtype=np.bool_)
    for q in range(b):
        for p in range(a):
            ok = True
            for x in range(ns):
                if surjs[p, embs[q, x]] != x:
                    ok = False
                    break
            if ok:
                for y in range(nt):
                    if surjs[p, y] > caps[q, y]:
                        ok = False
                        break
            mask[p, q] = ok
    return mask


@_jit
def pair_caps(embs, nt):
    """caps[q, y] = least x with embs[q, x] > y, or ns when none exists."""
    b = embs.shape[0]
    ns = embs.shape[1]
    caps = np.empty((b, nt), dtype=np.int64)
    for q in range(b):
        x = 0
        for y in range(nt):
            while x < ns and embs[q, x] <= y:
                x += 1
            caps[q, y] = x
    return caps


@_jit
def dfs_bad_coloring(cstart, citems, clen, istart, icopies, order, r,
                     col, nxt, maxu, ccnt, ccol, cmix, ubuf, ulen,
                     state, node_budget):
    """Resumable depth-first search for a coloring with no monochromatic copy.

    Items are colored in the order given by ``order`` with colors tried
    ascending, restricted to at most one fresh color beyond those already
    used (any bad coloring has a representative of this form, and with the
    identity order the first hit is the lexicographically least bad
    coloring).  A branch dies as soon as some copy becomes fully assigned
    and monochromatic.

    state = [depth, explored]; all other arrays persist across calls so the
    search can be paused on the node budget and resumed.
    """
    n = order.shape[0]
    d = state[0]
    explored = state[1]
    while True:
        if d == n:
            state[0] = d
            state[1] = explored
            return FOUND
        it = order[d]
        c = nxt[d]
        lim = r
        m2 = maxu[d] + 2
        if m2 < lim:
            lim = m2
        chosen = np.int64(-1)
        while c < lim:
            if explored >= node_budget:
                nxt[d] = c
                state[0] = d
                state[1] = explored
                return PAUSED
            explored += 1
            dead = False
            for tpos in range(istart[it], istart[it + 1]):
                k = icopies[tpos]
                if ccnt[k] + 1 == clen[k] and cmix[k] == 0:
                    if ccnt[k] == 0 or ccol[k] == c:
                        dead = True
                        break
            if not dead:
                chosen = c
                break
            c += 1
        if chosen < 0:
            d -= 1
            if d < 0:
                state[0] = d
                state[1] = explored
                return EXHAUSTED
            prev = order[d]
            for tpos in range(istart[prev], istart[prev + 1]):
                ccnt[icopies[tpos]] -= 1
            for u in range(ulen[d]):
                cmix[ubuf[d, u]] = 0
            col[prev] = -1
            continue
        ul = 0
        for tpos in range(istart[it], istart[it + 1]):
            k = icopies[tpos]
            if ccnt[k] == 0:
                ccol[k] = chosen
            elif cmix[k] == 0 and ccol[k] != chosen:
                cmix[k] = 1
                ubuf[d, ul] = k
                ul += 1
            ccnt[k] += 1
        ulen[d] = ul
        col[it] = chosen
        nxt[d] = chosen + 1
        mu = maxu[d]
        if chosen > mu:
            mu = chosen
        maxu[d + 1] = mu
        d += 1
        if d < n:
            nxt[d] = 0


@_jit
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@_jit
def dfs_degree(cstart, citems, clen, istart, icopies, order, r, ncopies,
               col, nxt, maxu, ccnt, cmask, ubuf, ulen,
               state, best_col, node_budget):
    """Resumable branch-and-bound for max over colorings of the minimum
    number of colors attained on a copy.

    state = [depth, explored, best, cap] where cap = min(r, smallest copy
    size) is an a-priori upper bound; the search stops early when best
    reaches it.  best_col holds the witness coloring for the current best.
    """
    n = order.shape[0]
    d = state[0]
    explored = state[1]
    best = state[2]
    cap = state[3]
    while True:
        if best >= cap:
            state[0] = d
            state[1] = explored
            state[2] = best
            return EXHAUSTED
        if d == n:
            val = cap
            for k in range(ncopies):
                pc = _popcount(cmask[k])
                if pc < val:
                    val = pc
            if val > best:
                best = val
                for i in range(n):
                    best_col[i] = col[i]
            d -= 1
            if d < 0:
                state[0] = d
                state[1] = explored
                state[2] = best
                return EXHAUSTED
            prev = order[d]
            for tpos in range(istart[prev], istart[prev + 1]):
                ccnt[icopies[tpos]] -= 1
            for u in range(ulen[d]):
                cmask[ubuf[d, u]] &= ~(np.int64(1) << col[prev])
            col[prev] = -1
            continue
        it = order[d]
        c = nxt[d]
        lim = r
        m2 = maxu[d] + 2
        if m2 < lim:
            lim = m2
        chosen = np.int64(-1)
        while c < lim:
            if explored >= node_budget:
                nxt[d] = c
                state[0] = d
                state[1] = explored
                state[2] = best
                return PAUSED
            explored += 1
            # Tentatively apply, bound, and keep or roll back.
            ul = 0
            for tpos in range(istart[it], istart[it + 1]):
                k = icopies[tpos]
                bit = np.int64(1) << c
                if cmask[k] & bit == 0:
                    cmask[k] |= bit
                    ubuf[d, ul] = k
                    ul += 1
                ccnt[k] += 1
            ub = cap
            for k in range(ncopies):
                pc = _popcount(cmask[k])
                rem = clen[k] - ccnt[k]
                room = r - pc
                if rem < room:
                    room = rem
                if pc + room < ub:
                    ub = pc + room
            if ub > best:
                chosen = c
                ulen[d] = ul
                break
            for u in range(ul):
                cmask[ubuf[d, u]] &= ~(np.int64(1) << c)
            for tpos in range(istart[it], istart[it + 1]):
                ccnt[icopies[tpos]] -= 1
            c += 1
        if chosen < 0:
            d -= 1
            if d < 0:
                state[0] = d
                state[1] = explored
                state[2] = best
                return EXHAUSTED
            prev = order[d]
            for tpos in range(istart[prev], istart[prev + 1]):
                ccnt[icopies[tpos]] -= 1
            for u in range(ulen[d]):
                cmask[ubuf[d, u]] &= ~(np.int64(1) << col[prev])
            col[prev] = -1
            continue
        col[it] = chosen
        nxt[d] = chosen + 1
        mu = maxu[d]
        if chosen > mu:
            mu = chosen
        maxu[d + 1] = mu
        d += 1
        if d < n:
            nxt[d] = 0


@_jit
def doubling_pair_sweep(ms, js, anc, base, first_double, viol_out):
    """Sweep all realizable skeleton/embedding pairs of the outer Hom-set and
    check the doubling stability condition on each.

    ms and js both list the embeddings of the doubling tree T into the
    witness V (rows, length nt).  A pair (m, j) is realizable exactly when
    some surjection with induced embedding m forms a connection with j:
    m[x] must sit below j[x], no two skeleton/embedding images may collide
    inconsistently, and the forced value x at position m[x] must respect the
    cap induced by j.  For each realizable pair the stability condition says
    the skeleton and the embedding agree on every marked base vertex and the
    skeleton avoids the embedded first double.

    Returns (n_realizable, n_violations); the first violating (m, j) index
    pairs are written to viol_out.
    """
    a = ms.shape[0]
    b = js.shape[0]
    nt = ms.shape[1]
    nv = anc.shape[0]
    namark = base.shape[0]
    minv = np.empty(nv, dtype=np.int64)
    cap = np.empty(nv, dtype=np.int64)
    nfeas = np.int64(0)
    nviol = np.int64(0)
    for q in range(b):
        x = 0
        for y in range(nv):
            while x < nt and js[q, x] <= y:
                x += 1
            cap[y] = x
        for p in range(a):
            for y in range(nv):
                minv[y] = -1
            for t in range(nt):
                minv[ms[p, t]] = t
            feas = True
            for t in range(nt):
                jx = js[q, t]
                mx = ms[p, t]
                if not anc[mx, jx]:
                    feas = False
                    break
                if minv[jx] != -1 and minv[jx] != t:
                    feas = False
                    break
                if t > cap[mx]:
                    feas = False
                    break
            if not feas:
                continue
            nfeas += 1
            bad = False
            for ai in range(namark):
                tb = base[ai]
                td = first_double[ai]
                if ms[p, tb] != js[q, tb]:
                    bad = True
                    break
                if ms[p, tb] == js[q, td]:
                    bad = True
                    break
            if bad:
                if nviol < viol_out.shape[0]:
                    viol_out[nviol, 0] = p
                    viol_out[nviol, 1] = q
                nviol += 1
    return nfeas, nviol
