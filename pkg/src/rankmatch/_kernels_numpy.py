"""Pure numpy/Python fallbacks for the hot kernels.

Signature-compatible with `_kernels_numba`.  Randomness comes from a
module-level `numpy.random.RandomState`, drawn in exactly the same
order as the numba kernels, so seeded runs match the numba backend bit
for bit.  The pairing recurrences are vectorized where the data flow
allows; the rest are plain loops and noticeably slower than numba.
"""

import numpy as np

_rs = np.random.RandomState(0)


def seed_rng(seed):
    global _rs
    _rs = np.random.RandomState(seed)


# ---------------------------------------------------------------------------
# greedy stable matching
# ---------------------------------------------------------------------------

def greedy_complete(caps):
    n = caps.size
    a = caps.copy()
    ei, ej = [], []
    for i in range(n):
        if a[i] <= 0:
            continue
        for j in range(i + 1, n):
            if a[i] <= 0:
                break
            if a[j] > 0:
                ei.append(i)
                ej.append(j)
                a[i] -= 1
                a[j] -= 1
    return (np.asarray(ei, dtype=np.int64), np.asarray(ej, dtype=np.int64))


def greedy_csr(caps, indptr, indices):
    n = caps.size
    a = caps.copy()
    ei, ej = [], []
    for i in range(n):
        if a[i] <= 0:
            continue
        for idx in range(indptr[i], indptr[i + 1]):
            j = indices[idx]
            if j <= i:
                continue
            if a[i] <= 0:
                break
            if a[j] > 0:
                ei.append(i)
                ej.append(j)
                a[i] -= 1
                a[j] -= 1
    return (np.asarray(ei, dtype=np.int64), np.asarray(ej, dtype=np.int64))


def greedy_1m_order(order, adj, n_ids):
    mate = np.full(n_ids, -1, dtype=np.int64)
    m = order.size
    for oi in range(m - 1):
        i = order[oi]
        if mate[i] >= 0:
            continue
        tail = order[oi + 1:]
        ok = (adj[i, tail] != 0) & (mate[tail] < 0)
        hit = np.argmax(ok)
        if ok[hit]:
            j = tail[hit]
            mate[i] = j
            mate[j] = i
    return mate


# ---------------------------------------------------------------------------
# pairing-probability recurrences
# ---------------------------------------------------------------------------

def pair_probs_1m(n, p):
    """Vectorized row scan of the pairing recurrence.

    Within row i the second factor (1 - colsum) is fixed, so the running
    row sum telescopes into a cumulative product:
    (1 - rowsum_{j+1}) = (1 - rowsum_j) * (1 - p * (1 - colsum_j)).
    Agrees with the loop form to ~1e-13 (different summation order).
    """
    D = np.zeros((n, n))
    colsum = np.zeros(n)
    for i in range(n - 1):
        c = 1.0 - colsum[i + 1:]
        q = 1.0 - p * c
        r = np.empty(n - i - 1)
        r[0] = 1.0 - colsum[i]
        if r.size > 1:
            r[1:] = r[0] * np.cumprod(q[:-1])
        row = p * c * r
        D[i, i + 1:] = row
        D[i + 1:, i] = row
        colsum[i + 1:] += row
    return D


def pair_probs_b0(n, p, b0, keep_pair):
    dc = np.zeros((b0, n, n))
    if keep_pair:
        dcc = np.zeros((b0, b0, n, n))
    else:
        dcc = np.zeros((1, 1, 1, 1))
    B = np.zeros((b0 + 1, n))
    B[0, :] = 1.0
    for i in range(n):
        A = B[:, i].copy()
        for j in range(i + 1, n):
            Wi = A[:-1] - A[1:]
            Wj = B[:-1, j] - B[1:, j]
            swi = Wi.sum()
            swj = Wj.sum()
            vij = (p * Wi) * swj
            vji = (p * swi) * Wj
            dc[:, i, j] = vij
            dc[:, j, i] = vji
            A[1:] += vij
            B[1:, j] += vji
            if keep_pair:
                block = np.outer(p * Wi, Wj)
                dcc[:, :, i, j] = block
                dcc[:, :, j, i] = block.T
    return dc, dcc


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def mc_choice_counts(caps, p, draws, keep_pair):
    n = caps.size
    b0 = max(1, int(caps.max())) if n else 1
    counts = np.zeros((b0, n, n), dtype=np.int64)
    if keep_pair:
        cc = np.zeros((b0, b0, n, n), dtype=np.int64)
    else:
        cc = np.zeros((1, 1, 1, 1), dtype=np.int64)
    rand = _rs.random_sample
    a = np.empty(n, dtype=np.int64)
    for _ in range(draws):
        a[:] = caps
        for i in range(n):
            if a[i] <= 0:
                continue
            for j in range(i + 1, n):
                if a[j] <= 0:
                    continue
                if rand() < p:
                    ci = caps[i] - a[i]
                    cj = caps[j] - a[j]
                    counts[ci, i, j] += 1
                    counts[cj, j, i] += 1
                    if keep_pair:
                        cc[ci, cj, i, j] += 1
                        cc[cj, ci, j, i] += 1
                    a[i] -= 1
                    a[j] -= 1
                    if a[i] <= 0:
                        break
    return counts, cc


# ---------------------------------------------------------------------------
# decentralized initiative engines
# ---------------------------------------------------------------------------

def shuffle_ids(ids):
    m = ids.size
    if m > 1:
        us = _rs.random_sample(m - 1)
        for k in range(m - 1, 0, -1):
            j = int(us[m - 1 - k] * (k + 1))
            ids[k], ids[j] = ids[j], ids[k]


def static_unit(indptr, indices, present_ids, mate, cursor, strategy):
    m = present_ids.size
    n = mate.size
    rand = _rs.random_sample
    active = 0
    perm = present_ids.copy()
    shuffle_ids(perm)
    for s in range(m):
        p = perm[s]
        mp = mate[p]
        thr = mp if mp >= 0 else n
        q = -1
        if strategy == 0:
            for idx in range(indptr[p], indptr[p + 1]):
                cand = indices[idx]
                if cand >= thr:
                    break
                cm = mate[cand]
                if cm < 0 or p < cm:
                    q = cand
                    break
        elif strategy == 1:
            deg = indptr[p + 1] - indptr[p]
            if deg > 0:
                start = cursor[p]
                for k in range(deg):
                    off = start + k
                    if off >= deg:
                        off -= deg
                    cand = indices[indptr[p] + off]
                    if cand < thr:
                        cm = mate[cand]
                        if cm < 0 or p < cm:
                            q = cand
                            nxt = off + 1
                            cursor[p] = 0 if nxt >= deg else nxt
                            break
        else:
            u2 = rand()
            deg = indptr[p + 1] - indptr[p]
            if deg > 0:
                cand = indices[indptr[p] + int(u2 * deg)]
                if cand < thr:
                    cm = mate[cand]
                    if cm < 0 or p < cm:
                        q = cand
        if q >= 0:
            if mate[p] >= 0:
                mate[mate[p]] = -1
            if mate[q] >= 0:
                mate[mate[q]] = -1
            mate[p] = q
            mate[q] = p
            active += 1
    return active


def churn_unit(adj, mark, present, present_ids, m, mate, free_ids, nfree,
               p_event, p_edge):
    rand = _rs.random_sample
    active = 0
    perm = present_ids[:m].copy()
    shuffle_ids(perm)
    for s in range(perm.size):
        if p_event > 0.0 and rand() < p_event:
            if rand() < 0.5:
                if nfree == 0:
                    return m, nfree, active, 1
                nid = free_ids[nfree - 1]
                nfree -= 1
                mark[nid] = rand()
                ids = present_ids[:m]
                coins = rand(m)
                wired = ids[coins < p_edge]
                adj[nid, wired] = 1
                adj[wired, nid] = 1
                mate[nid] = -1
                present[nid] = True
                present_ids[m] = nid
                m += 1
            elif m > 1:
                t = int(rand() * m)
                vid = present_ids[t]
                present_ids[t] = present_ids[m - 1]
                m -= 1
                present[vid] = False
                if mate[vid] >= 0:
                    mate[mate[vid]] = -1
                mate[vid] = -1
                adj[vid, :] = 0
                adj[:, vid] = 0
                free_ids[nfree] = vid
                nfree += 1
        p = perm[s]
        if not present[p]:
            continue
        mp = mate[p]
        thr = mark[mp] if mp >= 0 else np.inf
        ids = present_ids[:m]
        mates = mate[ids]
        mate_mark = np.where(mates >= 0, mark[np.maximum(mates, 0)], np.inf)
        cand_mark = mark[ids]
        ok = (adj[p, ids] != 0) & (cand_mark < thr) & (mark[p] < mate_mark)
        if ok.any():
            masked = np.where(ok, cand_mark, np.inf)
            best = ids[int(np.argmin(masked))]
            if mate[p] >= 0:
                mate[mate[p]] = -1
            if mate[best] >= 0:
                mate[mate[best]] = -1
            mate[p] = best
            mate[best] = p
            active += 1
    return m, nfree, active, 0
