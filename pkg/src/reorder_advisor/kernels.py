"""Array kernels behind features, orderings and the symbolic cost model.

All kernels take raw CSR arrays (``indptr``, ``indices``) of int64 and
return fresh arrays.  They are compiled with numba unless
``REORDER_ADVISOR_DISABLE_NUMBA`` is set, in which case the loop kernels run
interpreted and :func:`bandwidth_profile` switches to its vectorised numpy
form.
"""

import numpy as np

from ._jit import USE_NUMBA, njit

# --------------------------------------------------------------------------
# bandwidth / profile
# --------------------------------------------------------------------------


@njit(cache=True)
def _bandwidth_profile_loop(n, row_ptr, col_idx):
    bw = 0
    prof = 0
    for i in range(n):
        a = row_ptr[i]
        b = row_ptr[i + 1]
        if a == b:
            continue
        first = col_idx[a]
        last = col_idx[b - 1]
        if first < i:
            prof += i - first
            if i - first > bw:
                bw = i - first
        if last > i and last - i > bw:
            bw = last - i
    return bw, prof


def _bandwidth_profile_numpy(n, row_ptr, col_idx):
    counts = np.diff(row_ptr)
    rows = np.flatnonzero(counts)
    if rows.size == 0:
        return 0, 0
    first = col_idx[row_ptr[rows]]
    last = col_idx[row_ptr[rows + 1] - 1]
    left = rows - first
    bw = max(int(left.max()), int((last - rows).max()), 0)
    return bw, int(np.clip(left, 0, None).sum())


def bandwidth_profile(n, row_ptr, col_idx):
    """``(bandwidth, profile)`` of a CSR pattern with sorted rows."""
    if USE_NUMBA:
        bw, prof = _bandwidth_profile_loop(n, row_ptr, col_idx)
        return int(bw), int(prof)
    return _bandwidth_profile_numpy(n, row_ptr, col_idx)


# --------------------------------------------------------------------------
# breadth-first search machinery
# --------------------------------------------------------------------------


@njit(cache=True)
def _bfs(n, indptr, indices, root, degree, by_degree, visited, stamp):
    """Level structure rooted at ``root``.

    Returns ``(order, level_ptr)``; level ``l`` is
    ``order[level_ptr[l]:level_ptr[l + 1]]``.  With ``by_degree`` the
    unvisited neighbours of each vertex are queued by ascending degree,
    ties by lower index (the Cuthill-McKee rule).
    """
    order = np.empty(n, np.int64)
    level_ptr = np.empty(n + 1, np.int64)
    keys = np.empty(n, np.int64)
    order[0] = root
    visited[root] = stamp
    tail = 1
    head = 0
    nlev = 0
    level_ptr[0] = 0
    while head < tail:
        level_end = tail
        nlev += 1
        while head < level_end:
            v = order[head]
            head += 1
            start = tail
            for t in range(indptr[v], indptr[v + 1]):
                u = indices[t]
                if visited[u] != stamp:
                    visited[u] = stamp
                    order[tail] = u
                    tail += 1
            if by_degree and tail - start > 1:
                m = tail - start
                for s in range(m):
                    u = order[start + s]
                    keys[s] = degree[u] * n + u
                idx = np.argsort(keys[:m])
                tmp = order[start:tail].copy()
                for s in range(m):
                    order[start + s] = tmp[idx[s]]
        level_ptr[nlev] = tail
    return order[:tail].copy(), level_ptr[: nlev + 1].copy()


@njit(cache=True)
def _pseudo_peripheral(n, indptr, indices, start, degree, visited, stamp, max_sweeps):
    """George-Liu pseudo-peripheral vertex search from ``start``.

    Returns ``(root, order, level_ptr, stamp)`` with the level structure of
    the final root.  At most ``max_sweeps`` BFS passes are made.
    """
    root = start
    stamp += 1
    order, level_ptr = _bfs(n, indptr, indices, root, degree, False, visited, stamp)
    ecc = level_ptr.size - 2
    for _ in range(max_sweeps - 1):
        # minimum-degree vertex of the last level, ties by lower index
        cand = -1
        for t in range(level_ptr[ecc], level_ptr[ecc + 1]):
            u = order[t]
            if cand < 0 or degree[u] < degree[cand] or (degree[u] == degree[cand] and u < cand):
                cand = u
        stamp += 1
        order2, level_ptr2 = _bfs(n, indptr, indices, cand, degree, False, visited, stamp)
        ecc2 = level_ptr2.size - 2
        if ecc2 > ecc:
            root = cand
            order = order2
            level_ptr = level_ptr2
            ecc = ecc2
        else:
            break
    return root, order, level_ptr, stamp


@njit(cache=True)
def pseudo_peripheral_levels(n, indptr, indices, start, max_sweeps):
    """Root and level structure of a pseudo-peripheral vertex of ``start``'s component."""
    degree = np.empty(n, np.int64)
    for v in range(n):
        degree[v] = indptr[v + 1] - indptr[v]
    visited = np.zeros(n, np.int64)
    root, order, level_ptr, _ = _pseudo_peripheral(
        n, indptr, indices, start, degree, visited, 0, max_sweeps
    )
    return root, order, level_ptr


@njit(cache=True)
def connected_components(n, indptr, indices):
    """Component label per vertex; components numbered by their lowest vertex."""
    label = np.full(n, -1, np.int64)
    stack = np.empty(n, np.int64)
    ncomp = 0
    for s in range(n):
        if label[s] >= 0:
            continue
        label[s] = ncomp
        top = 0
        stack[0] = s
        top = 1
        while top > 0:
            top -= 1
            v = stack[top]
            for t in range(indptr[v], indptr[v + 1]):
                u = indices[t]
                if label[u] < 0:
                    label[u] = ncomp
                    stack[top] = u
                    top += 1
        ncomp += 1
    return label


@njit(cache=True)
def reverse_cuthill_mckee(n, indptr, indices, max_sweeps):
    """RCM visit order (``order[new] = old``).

    Components are numbered in order of their lowest vertex and each one is
    reversed in place, so isolated vertices keep their relative order.
    """
    degree = np.empty(n, np.int64)
    for v in range(n):
        degree[v] = indptr[v + 1] - indptr[v]
    visited = np.zeros(n, np.int64)
    done = np.zeros(n, np.bool_)
    out = np.empty(n, np.int64)
    pos = 0
    stamp = 0
    for s in range(n):
        if done[s]:
            continue
        # component of s; start the peripheral search at its min-degree vertex
        stamp += 1
        comp, _ = _bfs(n, indptr, indices, s, degree, False, visited, stamp)
        start = comp[0]
        for t in range(comp.size):
            u = comp[t]
            if degree[u] < degree[start] or (degree[u] == degree[start] and u < start):
                start = u
        root, _, _, stamp = _pseudo_peripheral(
            n, indptr, indices, start, degree, visited, stamp, max_sweeps
        )
        stamp += 1
        cm, _ = _bfs(n, indptr, indices, root, degree, True, visited, stamp)
        for t in range(cm.size):
            out[pos + cm.size - 1 - t] = cm[t]
            done[cm[t]] = True
        pos += cm.size
    return out


# --------------------------------------------------------------------------
# minimum degree on the quotient graph
# --------------------------------------------------------------------------


@njit(cache=True)
def _compact(n, iw, ptr, ln, status, need):
    live = 0
    for v in range(n):
        if status[v] != 2:
            live += ln[v]
    cap = iw.size
    if live + need > cap // 2:
        cap = 2 * (live + need) + 16
    new = np.empty(cap, np.int64)
    pos = 0
    for v in range(n):
        if status[v] == 2:
            continue
        a = ptr[v]
        for s in range(ln[v]):
            new[pos + s] = iw[a + s]
        ptr[v] = pos
        pos += ln[v]
    return new, pos


@njit(cache=True)
def minimum_degree(n, indptr, indices):
    """Minimum-degree elimination order on the quotient graph.

    Each vertex ``i`` keeps one list in the workspace ``iw``: first the
    ``nel[i]`` elements it belongs to, then its remaining variable
    neighbours.  An eliminated pivot ``p`` becomes element ``p`` whose list
    is its boundary ``L_p``.  Degrees are Amestoy-style approximate external
    degrees; elements whose boundary falls inside ``L_p`` are absorbed.
    Ties go to the lowest vertex index.  Returns ``order[new] = old``.
    """
    nnz = indptr[n]
    iw = np.empty(nnz + 2 * n + 16, np.int64)
    ptr = np.empty(n, np.int64)
    ln = np.empty(n, np.int64)
    nel = np.zeros(n, np.int64)
    status = np.zeros(n, np.int8)  # 0 variable, 1 element, 2 absorbed
    degree = np.empty(n, np.int64)
    for i in range(n):
        ptr[i] = indptr[i]
        ln[i] = indptr[i + 1] - indptr[i]
        degree[i] = ln[i]
    for t in range(nnz):
        iw[t] = indices[t]
    pfree = nnz
    mark = np.zeros(n, np.int64)
    wstamp = np.zeros(n, np.int64)
    w = np.zeros(n, np.int64)
    buf = np.empty(2 * n + 1, np.int64)
    order = np.empty(n, np.int64)
    stamp = 0

    for k in range(n):
        p = -1
        for i in range(n):
            if status[i] == 0 and (p < 0 or degree[i] < degree[p]):
                p = i
        order[k] = p
        remaining = n - k - 1

        if pfree + n > iw.size:
            iw, pfree = _compact(n, iw, ptr, ln, status, n)

        # boundary L_p: union of absorbed element boundaries and variable neighbours
        stamp += 1
        mark[p] = stamp
        start = pfree
        a = ptr[p]
        for t in range(a, a + nel[p]):
            e = iw[t]
            if status[e] != 1:
                continue
            for s in range(ptr[e], ptr[e] + ln[e]):
                v = iw[s]
                if status[v] == 0 and mark[v] != stamp:
                    mark[v] = stamp
                    iw[pfree] = v
                    pfree += 1
            status[e] = 2
        for t in range(a + nel[p], a + ln[p]):
            v = iw[t]
            if status[v] == 0 and mark[v] != stamp:
                mark[v] = stamp
                iw[pfree] = v
                pfree += 1
        status[p] = 1
        ptr[p] = start
        ln[p] = pfree - start
        nel[p] = 0
        lp = ln[p]

        # w[e] = |L_e \ L_p| for every live element touching L_p
        for t in range(start, start + lp):
            i = iw[t]
            for s in range(ptr[i], ptr[i] + nel[i]):
                e = iw[s]
                if status[e] != 1:
                    continue
                if wstamp[e] != stamp:
                    wstamp[e] = stamp
                    w[e] = ln[e]
                w[e] -= 1

        # prune lists of the boundary variables and bound their degrees
        for t in range(start, start + lp):
            i = iw[t]
            a = ptr[i]
            old_len = ln[i]
            old_nel = nel[i]
            for s in range(old_len):
                buf[s] = iw[a + s]
            pos = a
            iw[pos] = p
            pos += 1
            ext = 0
            for s in range(old_nel):
                e = buf[s]
                if status[e] != 1 or e == p:
                    continue
                if w[e] == 0:
                    status[e] = 2
                    continue
                ext += w[e]
                iw[pos] = e
                pos += 1
            nel[i] = pos - a
            nvar = 0
            for s in range(old_nel, old_len):
                v = buf[s]
                if status[v] != 0 or mark[v] == stamp:
                    continue
                iw[pos] = v
                pos += 1
                nvar += 1
            ln[i] = pos - a
            d = nvar + lp - 1 + ext
            if degree[i] + lp - 1 < d:
                d = degree[i] + lp - 1
            if remaining - 1 < d:
                d = remaining - 1
            degree[i] = d
    return order


# --------------------------------------------------------------------------
# symbolic Cholesky
# --------------------------------------------------------------------------


@njit(cache=True)
def elimination_tree(n, indptr, indices):
    """Parent array of the elimination tree (-1 for roots).

    ``indptr``/``indices`` describe the symmetric pattern in its final
    numbering with sorted rows; only entries below the diagonal are read.
    """
    parent = np.full(n, -1, np.int64)
    ancestor = np.full(n, -1, np.int64)
    for i in range(n):
        for t in range(indptr[i], indptr[i + 1]):
            k = indices[t]
            if k >= i:
                break
            r = k
            while ancestor[r] != -1 and ancestor[r] != i:
                nxt = ancestor[r]
                ancestor[r] = i
                r = nxt
            if ancestor[r] == -1:
                ancestor[r] = i
                parent[r] = i
    return parent


@njit(cache=True)
def column_counts(n, indptr, indices, parent):
    """Column counts of L (diagonal included) by row-subtree traversal."""
    counts = np.ones(n, np.int64)
    flag = np.full(n, -1, np.int64)
    for i in range(n):
        flag[i] = i
        for t in range(indptr[i], indptr[i + 1]):
            j = indices[t]
            if j >= i:
                break
            while flag[j] != i:
                counts[j] += 1
                flag[j] = i
                j = parent[j]
    return counts


@njit(cache=True)
def postorder(n, parent):
    """Postorder of a forest given by ``parent``; children visited by index."""
    head = np.full(n, -1, np.int64)
    nxt = np.full(n, -1, np.int64)
    for v in range(n - 1, -1, -1):
        p = parent[v]
        if p >= 0:
            nxt[v] = head[p]
            head[p] = v
    post = np.empty(n, np.int64)
    stack = np.empty(n, np.int64)
    k = 0
    for root in range(n):
        if parent[root] != -1:
            continue
        top = 0
        stack[0] = root
        top = 1
        while top > 0:
            v = stack[top - 1]
            c = head[v]
            if c == -1:
                top -= 1
                post[k] = v
                k += 1
            else:
                head[v] = nxt[c]
                stack[top] = c
                top += 1
    return post
