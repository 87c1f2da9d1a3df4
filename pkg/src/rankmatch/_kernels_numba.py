"""Numba implementations of the hot kernels.

Every function here has a signature-identical twin in `_kernels_numpy`.
Randomness comes from numba's internal MT19937 generator, which replays
`numpy.random.RandomState` bit for bit, so both backends produce the
same results from the same seed.  Call `seed_rng` before any kernel
that draws.
"""

import numpy as np
from numba import njit

HUGE = np.inf


@njit(cache=True)
def seed_rng(seed):
    np.random.seed(seed)


# ---------------------------------------------------------------------------
# greedy stable matching (rank order, best peer first)
# ---------------------------------------------------------------------------

@njit(cache=True)
def greedy_complete(caps):
    """Connect events of the greedy pass on a complete acceptance graph.

    Returns (ei, ej) arrays, 0-based, in the order connections are made.
    """
    n = caps.size
    a = caps.copy()
    cap = 0
    for i in range(n):
        cap += a[i]
    ei = np.empty(cap // 2 + 1, dtype=np.int64)
    ej = np.empty(cap // 2 + 1, dtype=np.int64)
    cnt = 0
    for i in range(n):
        if a[i] <= 0:
            continue
        for j in range(i + 1, n):
            if a[i] <= 0:
                break
            if a[j] > 0:
                ei[cnt] = i
                ej[cnt] = j
                cnt += 1
                a[i] -= 1
                a[j] -= 1
    return ei[:cnt], ej[:cnt]


@njit(cache=True)
def greedy_csr(caps, indptr, indices):
    """Greedy pass over a sparse acceptance graph (neighbors sorted by rank)."""
    n = caps.size
    a = caps.copy()
    cap = 0
    for i in range(n):
        cap += a[i]
    ei = np.empty(cap // 2 + 1, dtype=np.int64)
    ej = np.empty(cap // 2 + 1, dtype=np.int64)
    cnt = 0
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
                ei[cnt] = i
                ej[cnt] = j
                cnt += 1
                a[i] -= 1
                a[j] -= 1
    return ei[:cnt], ej[:cnt]


@njit(cache=True)
def greedy_1m_order(order, adj, n_ids):
    """1-matching greedy pass on a dense adjacency, peers visited in `order`.

    `order` holds peer ids sorted best to worst; `adj` is a dense 0/1
    matrix over ids.  Returns the mate array indexed by id (-1 unmated).
    """
    mate = np.full(n_ids, -1, dtype=np.int64)
    m = order.size
    for oi in range(m):
        i = order[oi]
        if mate[i] >= 0:
            continue
        for oj in range(oi + 1, m):
            j = order[oj]
            if mate[j] < 0 and adj[i, j] != 0:
                mate[i] = j
                mate[j] = i
                break
    return mate


# ---------------------------------------------------------------------------
# pairing-probability recurrences (independence approximation)
# ---------------------------------------------------------------------------

@njit(cache=True)
def pair_probs_1m(n, p):
    """Fill D(i,j) = p*(1 - sum_{k<j} D(i,k))*(1 - sum_{k<i} D(j,k)).

    Rank order is the peer index (0-based internally); running partial
    sums make the double loop O(n^2).
    """
    D = np.zeros((n, n))
    colsum = np.zeros(n)  # colsum[j] = sum_{k<i} D(j,k) at outer step i
    for i in range(n):
        rowsum = colsum[i]  # sum_{k<=i} D(i,k), by symmetry
        for j in range(i + 1, n):
            v = p * (1.0 - rowsum) * (1.0 - colsum[j])
            D[i, j] = v
            D[j, i] = v
            rowsum += v
            colsum[j] += v
    return D


@njit(cache=True)
def pair_probs_b0(n, p, b0, keep_pair):
    """Fill the choice-indexed pairing probabilities for b0 slots per peer.

    dc[c, i, j] is the probability that the (c+1)-th best partner of peer
    i is peer j.  The recurrence multiplies, for each side, the
    probability that the slot is still open for a peer of the other's
    rank: for peer i and choice c that weight is
    sum_{k<j} (dc[c-1,i,k] - dc[c,i,k]), with the choice-0 partial sum
    pinned to one.  If `keep_pair` the joint tensor dcc[ci, cj, i, j]
    (choice ci+1 of i is j AND choice cj+1 of j is i) is filled as well.
    """
    dc = np.zeros((b0, n, n))
    if keep_pair:
        dcc = np.zeros((b0, b0, n, n))
    else:
        dcc = np.zeros((1, 1, 1, 1))
    # B[c, x] = sum_{k<i} dc[c-1, x, k] for the current outer i; row 0 == 1
    B = np.zeros((b0 + 1, n))
    B[0, :] = 1.0
    A = np.zeros(b0 + 1)   # A[c] = sum_{k<j} dc[c-1, i, k] for current (i, j)
    Wi = np.zeros(b0)
    Wj = np.zeros(b0)
    for i in range(n):
        for c in range(b0 + 1):
            A[c] = B[c, i]
        for j in range(i + 1, n):
            swi = 0.0
            swj = 0.0
            for c in range(b0):
                wi = A[c] - A[c + 1]
                wj = B[c, j] - B[c + 1, j]
                Wi[c] = wi
                Wj[c] = wj
                swi += wi
                swj += wj
            for c in range(b0):
                # order of factors chosen so that b0 == 1 reproduces the
                # 1-matching kernel bit for bit (swi == Wi[0] there)
                vij = p * Wi[c] * swj
                vji = p * swi * Wj[c]
                dc[c, i, j] = vij
                dc[c, j, i] = vji
                A[c + 1] += vij
                B[c + 1, j] += vji
            if keep_pair:
                for ci in range(b0):
                    for cj in range(b0):
                        v = p * Wi[ci] * Wj[cj]
                        dcc[ci, cj, i, j] = v
                        dcc[cj, ci, j, i] = v
    return dc, dcc


# ---------------------------------------------------------------------------
# Monte Carlo: greedy matching over random acceptance graphs
# ---------------------------------------------------------------------------

@njit(cache=True)
def mc_choice_counts(caps, p, draws, keep_pair):
    """Empirical choice-indexed matching counts over `draws` random graphs.

    Edges are sampled lazily: the greedy pass inspects each pair at most
    once, so drawing the coin at inspection time is equivalent to
    materializing the graph.  Call seed_rng first.
    """
    n = caps.size
    b0 = 1
    for i in range(n):
        if caps[i] > b0:
            b0 = caps[i]
    counts = np.zeros((b0, n, n), dtype=np.int64)
    if keep_pair:
        cc = np.zeros((b0, b0, n, n), dtype=np.int64)
    else:
        cc = np.zeros((1, 1, 1, 1), dtype=np.int64)
    a = np.empty(n, dtype=np.int64)
    for _ in range(draws):
        for i in range(n):
            a[i] = caps[i]
        for i in range(n):
            if a[i] <= 0:
                continue
            for j in range(i + 1, n):
                if a[j] <= 0:
                    continue
                if np.random.random() < p:
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
# decentralized initiative engines (1-matching)
# ---------------------------------------------------------------------------

@njit(cache=True)
def shuffle_ids(ids):
    """Fisher-Yates with int(u*(k+1)) draws; identical in both backends."""
    for k in range(ids.size - 1, 0, -1):
        j = int(np.random.random() * (k + 1))
        tmp = ids[k]
        ids[k] = ids[j]
        ids[j] = tmp


@njit(cache=True)
def static_unit(indptr, indices, present_ids, mate, cursor, strategy):
    """One base unit on a fixed instance; returns the active count.

    Every present peer takes exactly one initiative per unit, in a fresh
    uniform random order.  strategy: 0 best-mate, 1 decremental
    (circular cursor), 2 random probe.  Peers are ids == 0-based ranks;
    `mate` is -1 when unmated.
    """
    m = present_ids.size
    n = mate.size
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
            u2 = np.random.random()
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


@njit(cache=True)
def churn_unit(adj, mark, present, present_ids, m, mate, free_ids, nfree,
               p_event, p_edge):
    """One base unit of best-mate initiatives interleaved with churn events.

    The peers present at unit start act once each in a fresh random
    order; per step, with probability p_event an event fires first: a
    fair coin picks arrival (new peer, uniform mark, edge coin per
    present peer) or departure (uniform victim).  A peer that departs
    before its turn loses it; arrivals act from the next unit.  Returns
    (m, nfree, active, status); status 1 means the id pool ran dry
    (caller treats it as an error).
    """
    n_cap = mark.size
    active = 0
    perm = present_ids[:m].copy()
    shuffle_ids(perm)
    for s in range(perm.size):
        if p_event > 0.0:
            u = np.random.random()
            if u < p_event:
                if np.random.random() < 0.5:
                    if nfree == 0:
                        return m, nfree, active, 1
                    nid = free_ids[nfree - 1]
                    nfree -= 1
                    mark[nid] = np.random.random()
                    for t in range(m):
                        o = present_ids[t]
                        if np.random.random() < p_edge:
                            adj[nid, o] = 1
                            adj[o, nid] = 1
                    mate[nid] = -1
                    present[nid] = True
                    present_ids[m] = nid
                    m += 1
                elif m > 1:
                    u3 = np.random.random()
                    t = int(u3 * m)
                    vid = present_ids[t]
                    present_ids[t] = present_ids[m - 1]
                    m -= 1
                    present[vid] = False
                    if mate[vid] >= 0:
                        mate[mate[vid]] = -1
                    mate[vid] = -1
                    for x in range(n_cap):
                        adj[vid, x] = 0
                        adj[x, vid] = 0
                    free_ids[nfree] = vid
                    nfree += 1
        p = perm[s]
        if not present[p]:
            continue
        mp = mate[p]
        thr = mark[mp] if mp >= 0 else HUGE
        markp = mark[p]
        best = -1
        bm = thr
        for t in range(m):
            q = present_ids[t]
            if q == p or adj[p, q] == 0:
                continue
            mq = mark[q]
            if mq >= bm:
                continue
            qm = mate[q]
            if qm < 0 or markp < mark[qm]:
                best = q
                bm = mq
        if best >= 0:
            if mate[p] >= 0:
                mate[mate[p]] = -1
            if mate[best] >= 0:
                mate[mate[best]] = -1
            mate[p] = best
            mate[best] = p
            active += 1
    return m, nfree, active, 0
