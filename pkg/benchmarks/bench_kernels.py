"""Benchmark the compiled kernels against the interpreted fallback.

Usage:
    python benchmarks/bench_kernels.py [--big]

Each workload runs once through the numba-compiled kernel and once through
its plain-Python version (``kernel.py_func``); results are checked for
equality before timings are reported.  With TREECONN_BACKEND=python the two
paths coincide and the script says so.  ``--big`` adds the larger doubling
sweep, which is slow on the interpreted path.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

import treeconn as tc
from treeconn import kernels
from treeconn.homsets import _emb_rows, _rigid_rows
from treeconn.search import _csr, _order


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def bench_embedding_search(big: bool):
    S = tc.doubling_tree(tc.chain(4 if big else 3)).tree
    T = tc.doubling_tree(S).tree
    args = (S.meet_table, T.meet_table, True, 10_000)
    kernels.embedding_search(*args)  # compile once
    (c1, o1), t_jit = timed(kernels.embedding_search, *args)
    (c2, o2), t_py = timed(kernels.py_func(kernels.embedding_search), *args)
    assert c1 == c2 and np.array_equal(o1[:c1], o2[:c2])
    return f"embedding search |T|={S.n} into |V|={T.n} ({c1} found)", t_jit, t_py


def bench_rigid(big: bool):
    T = tc.chain(7 if big else 6)
    S = tc.chain(3)
    skels = _emb_rows(S, T, tc.DEFAULT_BUDGET)
    count = int(kernels.rigid_count(skels, T.anc, 10**7))
    out1 = np.empty((count, T.n), dtype=np.int64)
    out2 = np.empty((count, T.n), dtype=np.int64)
    kernels.rigid_fill(skels, T.anc, out1)  # compile once
    _, t_jit = timed(kernels.rigid_fill, skels, T.anc, out1)
    _, t_py = timed(kernels.py_func(kernels.rigid_fill), skels, T.anc, out2)
    assert np.array_equal(out1, out2)
    return f"rigid surjection fill {T.n}->{S.n} ({count} maps)", t_jit, t_py


def bench_pair_filter(big: bool):
    S = tc.chain(3 if big else 2)
    T = tc.doubling_tree(S).tree
    V = tc.doubling_tree(T).tree
    srows = _rigid_rows(V, T, tc.Budget(max_hom=2_000_000))
    erows = _emb_rows(T, V, tc.DEFAULT_BUDGET)
    caps = kernels.pair_caps(erows, V.n)
    kernels.pair_filter(srows[:10], erows, caps)  # compile once
    m1, t_jit = timed(kernels.pair_filter, srows, erows, caps)
    m2, t_py = timed(kernels.py_func(kernels.pair_filter), srows, erows, caps)
    assert np.array_equal(m1, m2)
    return f"pair filter {srows.shape[0]}x{erows.shape[0]}", t_jit, t_py


def bench_doubling_sweep(big: bool):
    S = tc.chain(4 if big else 3)
    dbl = tc.doubling_tree(S)
    V = tc.doubling_tree(dbl.tree).tree
    rows = _emb_rows(dbl.tree, V, tc.DEFAULT_BUDGET)
    base = np.array([dbl.base_index[x] for x in dbl.marked], dtype=np.int64)
    first = np.array([dbl.doubles[x][0] for x in dbl.marked], dtype=np.int64)
    viol1 = np.full((16, 2), -1, dtype=np.int64)
    viol2 = np.full((16, 2), -1, dtype=np.int64)
    kernels.doubling_pair_sweep(rows[:2], rows[:2], V.anc, base, first, viol1)
    r1, t_jit = timed(kernels.doubling_pair_sweep, rows, rows, V.anc, base, first, viol1)
    r2, t_py = timed(
        kernels.py_func(kernels.doubling_pair_sweep), rows, rows, V.anc, base, first, viol2
    )
    assert r1 == r2
    return f"doubling sweep {rows.shape[0]}^2 pairs |V|={V.n}", t_jit, t_py


def bench_arrow_dfs(big: bool):
    n_chain = 7 if big else 6
    fam = tc.copy_family(tc.chain(2), tc.chain(3), tc.chain(n_chain), tc.INC_INJ)
    n = len(fam.hom_sv)
    copies = sorted(set(fam.copies))
    cstart, citems, clen, istart, icopies, maxdeg = _csr(copies, n)
    order = _order("canonical", istart, n)

    def run(impl):
        col = np.full(n, -1, dtype=np.int64)
        nxt = np.zeros(n, dtype=np.int64)
        maxu = np.full(n + 1, -1, dtype=np.int64)
        ccnt = np.zeros(len(copies), dtype=np.int64)
        ccol = np.zeros(len(copies), dtype=np.int64)
        cmix = np.zeros(len(copies), dtype=np.int64)
        ubuf = np.zeros((n, maxdeg), dtype=np.int64)
        ulen = np.zeros(n, dtype=np.int64)
        state = np.zeros(2, dtype=np.int64)
        status = impl(cstart, citems, clen, istart, icopies, order, 2,
                      col, nxt, maxu, ccnt, ccol, cmix, ubuf, ulen, state, 10**9)
        return status, int(state[1])

    run(kernels.dfs_bad_coloring)  # compile once
    r1, t_jit = timed(run, kernels.dfs_bad_coloring)
    r2, t_py = timed(run, kernels.py_func(kernels.dfs_bad_coloring))
    assert r1 == r2
    return f"arrow DFS on chain({n_chain}) ({r1[1]} nodes)", t_jit, t_py


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--big", action="store_true", help="larger workloads")
    args = ap.parse_args()
    print(f"active backend: {kernels.BACKEND}")
    if not kernels.JIT_ENABLED:
        print("numba disabled; both columns run the interpreted path\n")
    benches = [
        bench_embedding_search,
        bench_rigid,
        bench_pair_filter,
        bench_doubling_sweep,
        bench_arrow_dfs,
    ]
    print(f"{'workload':50s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}")
    for bench in benches:
        name, t_jit, t_py = bench(args.big)
        ratio = t_py / t_jit if t_jit > 0 else float("inf")
        print(f"{name:50s} {t_jit:9.4f}s {t_py:9.4f}s {ratio:7.1f}x")


if __name__ == "__main__":
    main()
