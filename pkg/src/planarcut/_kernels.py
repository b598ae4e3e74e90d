"""Compiled inner loops for piece handling and separator search.

Everything here works on flat int64 arrays.  Darts follow the package
convention (``2e`` and ``2e + 1`` for edge ``e``).  Scratch arrays passed in
by callers are restored to ``-1`` before returning.
"""
from __future__ import annotations

import numpy as np
from numba import njit

I64 = np.int64


# ---------------------------------------------------------------------------
# pieces
# ---------------------------------------------------------------------------

@njit(cache=True)
def build_local(edges, tail, rot_ptr, rot_darts, face_of, face_len, vmark, emark):
    """Re-index the piece on ``edges`` and trace its faces.

    Returns ``(verts, ltail, lrot_ptr, lrot, face_ptr, face_darts,
    boundary_face, boundary_vertex)``.  A face is a boundary face when it is
    not a face of the parent graph; a vertex is a boundary vertex when it has
    fewer darts in the piece than in the parent.
    """
    k = edges.shape[0]
    for i in range(k):
        emark[edges[i]] = i
    verts = np.empty(2 * k, I64)
    ltail = np.empty(2 * k, I64)
    nv = 0
    for i in range(k):
        e = edges[i]
        for b in range(2):
            v = tail[2 * e + b]
            if vmark[v] < 0:
                vmark[v] = nv
                verts[nv] = v
                nv += 1
            ltail[2 * i + b] = vmark[v]
    lrot_ptr = np.empty(nv + 1, I64)
    lrot = np.empty(2 * k, I64)
    boundary_vertex = np.zeros(nv, np.uint8)
    cnt = 0
    for lv in range(nv):
        v = verts[lv]
        lrot_ptr[lv] = cnt
        for j in range(rot_ptr[v], rot_ptr[v + 1]):
            d = rot_darts[j]
            i = emark[d >> 1]
            if i >= 0:
                lrot[cnt] = 2 * i + (d & 1)
                cnt += 1
        if cnt - lrot_ptr[lv] < rot_ptr[v + 1] - rot_ptr[v]:
            boundary_vertex[lv] = 1
    lrot_ptr[nv] = cnt
    nxt = np.empty(2 * k, I64)
    for lv in range(nv):
        a, b = lrot_ptr[lv], lrot_ptr[lv + 1]
        for j in range(a, b):
            nxt[lrot[j]] = lrot[j + 1] if j + 1 < b else lrot[a]
    seen = np.zeros(2 * k, np.uint8)
    face_ptr = np.empty(2 * k + 1, I64)
    face_darts = np.empty(2 * k, I64)
    nf = 0
    pos = 0
    for start in range(2 * k):
        if seen[start]:
            continue
        face_ptr[nf] = pos
        d = start
        while not seen[d]:
            seen[d] = 1
            face_darts[pos] = d
            pos += 1
            d = nxt[d ^ 1]
        nf += 1
    face_ptr[nf] = pos
    boundary_face = np.zeros(nf, np.uint8)
    for f in range(nf):
        a, b = face_ptr[f], face_ptr[f + 1]
        d0 = face_darts[a]
        f0 = face_of[2 * edges[d0 >> 1] + (d0 & 1)]
        if b - a != face_len[f0]:
            boundary_face[f] = 1
            continue
        for j in range(a + 1, b):
            d = face_darts[j]
            if face_of[2 * edges[d >> 1] + (d & 1)] != f0:
                boundary_face[f] = 1
                break
    for i in range(k):
        emark[edges[i]] = -1
    for lv in range(nv):
        vmark[verts[lv]] = -1
    return (verts[:nv].copy(), ltail, lrot_ptr, lrot[:cnt].copy(), face_ptr[:nf + 1].copy(),
            face_darts, boundary_face, boundary_vertex)


@njit(cache=True)
def edge_components(edges, tail, uf):
    """Component label (0, 1, ...) of every edge in ``edges``; ``uf`` is scratch."""
    k = edges.shape[0]
    for i in range(k):
        e = edges[i]
        uf[tail[2 * e]] = tail[2 * e]
        uf[tail[2 * e + 1]] = tail[2 * e + 1]
    for i in range(k):
        e = edges[i]
        a = tail[2 * e]
        while uf[a] != a:
            uf[a] = uf[uf[a]]
            a = uf[a]
        b = tail[2 * e + 1]
        while uf[b] != b:
            uf[b] = uf[uf[b]]
            b = uf[b]
        if a != b:
            uf[a] = b
    label = np.empty(k, I64)
    # roots get labels in first-seen order; stored as -(label + 2) in uf
    nl = 0
    for i in range(k):
        a = tail[2 * edges[i]]
        while uf[a] >= 0 and uf[a] != a:
            a = uf[a]
        if uf[a] == a:
            uf[a] = -(nl + 2)
            nl += 1
        label[i] = -uf[a] - 2
    for i in range(k):
        e = edges[i]
        uf[tail[2 * e]] = -1
        uf[tail[2 * e + 1]] = -1
    return label, nl


# ---------------------------------------------------------------------------
# triangulation
# ---------------------------------------------------------------------------

@njit(cache=True)
def triangulate(n, tail, face_ptr, face_darts, starred):
    """Triangulate faces: starred or short faces get a centre, long ones a fan.

    Returns ``(n_total, tail, triangles, centre_of_face)``; the first
    ``len(tail)`` darts keep their ids.
    """
    nf = face_ptr.shape[0] - 1
    extra_e = 0
    extra_v = 0
    nt = 0
    for f in range(nf):
        k = face_ptr[f + 1] - face_ptr[f]
        if starred[f] or k < 3:
            extra_e += k
            extra_v += 1
            nt += k
        else:
            extra_e += k - 3
            nt += k - 2
    m2 = tail.shape[0]
    t = np.empty(m2 + 2 * extra_e, I64)
    t[:m2] = tail
    tri = np.empty((nt, 3), I64)
    centre = np.full(nf, -1, I64)
    ne = m2 // 2
    nn = n
    ti = 0
    for f in range(nf):
        a = face_ptr[f]
        k = face_ptr[f + 1] - a
        if starred[f] or k < 3:
            c = nn
            nn += 1
            centre[f] = c
            e0 = ne
            for i in range(k):
                t[2 * (e0 + i)] = t[face_darts[a + i]]
                t[2 * (e0 + i) + 1] = c
            ne += k
            for i in range(k):
                j = i + 1 if i + 1 < k else 0
                tri[ti, 0] = face_darts[a + i]
                tri[ti, 1] = 2 * (e0 + j)
                tri[ti, 2] = 2 * (e0 + i) + 1
                ti += 1
        elif k == 3:
            tri[ti, 0] = face_darts[a]
            tri[ti, 1] = face_darts[a + 1]
            tri[ti, 2] = face_darts[a + 2]
            ti += 1
        else:
            v0 = t[face_darts[a]]
            e0 = ne
            for j in range(2, k - 1):
                t[2 * (e0 + j - 2)] = v0
                t[2 * (e0 + j - 2) + 1] = t[face_darts[a + j]]
            ne += k - 3
            tri[ti, 0] = face_darts[a]
            tri[ti, 1] = face_darts[a + 1]
            tri[ti, 2] = 2 * e0 + 1
            ti += 1
            for j in range(2, k - 2):
                tri[ti, 0] = 2 * (e0 + j - 2)
                tri[ti, 1] = face_darts[a + j]
                tri[ti, 2] = 2 * (e0 + j - 1) + 1
                ti += 1
            tri[ti, 0] = 2 * (e0 + k - 4)
            tri[ti, 1] = face_darts[a + k - 2]
            tri[ti, 2] = face_darts[a + k - 1]
            ti += 1
    return nn, t, tri, centre


# ---------------------------------------------------------------------------
# separator search
# ---------------------------------------------------------------------------

@njit(cache=True)
def _bfs(n, tail, out_ptr, out_darts, src, dist, par, order):
    for i in range(n):
        dist[i] = -1
    dist[src] = 0
    par[src] = -1
    order[0] = src
    head = 0
    cnt = 1
    while head < cnt:
        v = order[head]
        head += 1
        for j in range(out_ptr[v], out_ptr[v + 1]):
            d = out_darts[j]
            u = tail[d ^ 1]
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                par[u] = d
                order[cnt] = u
                cnt += 1
    return cnt


@njit(cache=True)
def _less(a0, a1, a2, b0, b1, b2):
    if a0 != b0:
        return a0 < b0
    if a1 != b1:
        return a1 < b1
    return a2 < b2


@njit(cache=True)
def separator(n, tail, tri, w, short):
    """Fundamental-cycle separator of a connected triangulation.

    Returns ``(status, cycle, inside_face_mask)`` where status is 1 for a
    balanced cycle, 0 for the least unbalanced one, -1 when the graph has no
    non-tree edge and -2 when it is disconnected.
    """
    m2 = tail.shape[0]
    m = m2 // 2
    nf = tri.shape[0]
    face_of = np.empty(m2, I64)
    for f in range(nf):
        for j in range(3):
            face_of[tri[f, j]] = f
    out_ptr = np.zeros(n + 1, I64)
    for d in range(m2):
        out_ptr[tail[d] + 1] += 1
    for v in range(n):
        out_ptr[v + 1] += out_ptr[v]
    fill = out_ptr[:n].copy()
    out_darts = np.empty(m2, I64)
    for d in range(m2):
        v = tail[d]
        out_darts[fill[v]] = d
        fill[v] += 1

    dist = np.empty(n, I64)
    par = np.empty(n, I64)
    order = np.empty(n, I64)
    empty_mask = np.zeros(nf, np.uint8)
    cnt = _bfs(n, tail, out_ptr, out_darts, 0, dist, par, order)
    if cnt != n:
        return -2, np.empty(0, I64), empty_mask
    a = order[n - 1]
    _bfs(n, tail, out_ptr, out_darts, a, dist, par, order)
    v = order[n - 1]
    target = dist[v] // 2
    while dist[v] > target:
        v = tail[par[v]]
    root = v

    # breadth-first tree
    _bfs(n, tail, out_ptr, out_darts, root, dist, par, order)
    depth = dist
    tree_edge = np.zeros(m, np.uint8)
    parent = np.full(n, -1, I64)
    for i in range(1, n):
        u = order[i]
        d = par[u]
        tree_edge[d >> 1] = 1
        parent[u] = tail[d]
    rootsum = np.empty(n, I64)
    rootsum[root] = w[root]
    for i in range(1, n):
        u = order[i]
        rootsum[u] = w[u] + rootsum[parent[u]]
    total = 0
    for i in range(n):
        total += w[i]

    # children lists and lca queries in CSR form
    ch_ptr = np.zeros(n + 1, I64)
    for i in range(1, n):
        ch_ptr[parent[order[i]] + 1] += 1
    for i in range(n):
        ch_ptr[i + 1] += ch_ptr[i]
    fill = ch_ptr[:n].copy()
    ch = np.empty(max(n - 1, 1), I64)
    for i in range(1, n):
        u = order[i]
        p = parent[u]
        ch[fill[p]] = u
        fill[p] += 1
    q_ptr = np.zeros(n + 1, I64)
    nq = 0
    for e in range(m):
        if not tree_edge[e]:
            q_ptr[tail[2 * e] + 1] += 1
            q_ptr[tail[2 * e + 1] + 1] += 1
            nq += 1
    if nq == 0:
        return -1, np.empty(0, I64), empty_mask
    for i in range(n):
        q_ptr[i + 1] += q_ptr[i]
    fill = q_ptr[:n].copy()
    q_other = np.empty(2 * nq, I64)
    q_edge = np.empty(2 * nq, I64)
    for e in range(m):
        if not tree_edge[e]:
            x = tail[2 * e]
            y = tail[2 * e + 1]
            q_other[fill[x]] = y
            q_edge[fill[x]] = e
            fill[x] += 1
            q_other[fill[y]] = x
            q_edge[fill[y]] = e
            fill[y] += 1

    lca = np.full(m, -1, I64)
    uf = np.arange(n)
    anchor = np.arange(n)
    visited = np.zeros(n, np.uint8)
    tin = np.empty(n, I64)
    tout = np.empty(n, I64)
    clock = 0
    st_v = np.empty(n, I64)
    st_i = np.empty(n, I64)
    sp = 0
    st_v[0] = root
    st_i[0] = 0
    sp = 1
    while sp > 0:
        v = st_v[sp - 1]
        i = st_i[sp - 1]
        if i == 0:
            tin[v] = clock
            clock += 1
        if ch_ptr[v] + i < ch_ptr[v + 1]:
            st_i[sp - 1] = i + 1
            st_v[sp] = ch[ch_ptr[v] + i]
            st_i[sp] = 0
            sp += 1
            continue
        sp -= 1
        visited[v] = 1
        for j in range(q_ptr[v], q_ptr[v + 1]):
            u = q_other[j]
            e = q_edge[j]
            if visited[u] and lca[e] < 0:
                r = u
                while uf[r] != r:
                    r = uf[r]
                s = u
                while uf[s] != r:
                    nxt = uf[s]
                    uf[s] = r
                    s = nxt
                lca[e] = anchor[r]
        tout[v] = clock
        clock += 1
        if v != root:
            p = parent[v]
            r = p
            while uf[r] != r:
                r = uf[r]
            uf[v] = r
            anchor[r] = p

    # cotree rooted at face 0
    f_par = np.full(nf, -1, I64)
    f_seen = np.zeros(nf, np.uint8)
    f_order = np.empty(nf, I64)
    f_seen[0] = 1
    f_order[0] = 0
    head = 0
    fc = 1
    while head < fc:
        f = f_order[head]
        head += 1
        for j in range(3):
            d = tri[f, j]
            if tree_edge[d >> 1]:
                continue
            g2 = face_of[d ^ 1]
            if not f_seen[g2]:
                f_seen[g2] = 1
                f_par[g2] = d ^ 1
                f_order[fc] = g2
                fc += 1

    closed = np.zeros(m, I64)
    best_e = -1
    best_c = -1
    bk0 = 0
    bk1 = 0
    bk2 = 0
    fb_e = -1
    fb_c = -1
    fk0 = 0
    fk1 = 0
    for idx in range(fc - 1, 0, -1):
        c = f_order[idx]
        a0 = f_par[c]
        if a0 == tri[c, 0]:
            a1 = tri[c, 1]
            a2 = tri[c, 2]
        elif a0 == tri[c, 1]:
            a1 = tri[c, 2]
            a2 = tri[c, 0]
        else:
            a1 = tri[c, 0]
            a2 = tri[c, 1]
        x = tail[a0]
        y = tail[a1]
        z = tail[a2]
        e0 = a0 >> 1
        e1 = a1 >> 1
        e2 = a2 >> 1
        t1 = tree_edge[e1]
        t2 = tree_edge[e2]
        if t1 and t2:
            k = w[x]
            if y != x:
                k += w[y]
            if z != x and z != y:
                k += w[z]
        elif t2:
            l1 = lca[e1]
            ax = tin[x] <= tin[y] and tout[y] <= tout[x]
            bx = tin[x] <= tin[z] and tout[z] <= tout[x]
            k = closed[e1]
            if not (ax != bx or x == l1):
                k += w[x]
        elif t1:
            l2 = lca[e2]
            ay = tin[y] <= tin[z] and tout[z] <= tout[y]
            by = tin[y] <= tin[x] and tout[x] <= tout[y]
            k = closed[e2]
            if not (ay != by or y == l2):
                k += w[y]
        else:
            l1 = lca[e1]
            l2 = lca[e2]
            l3 = lca[e0]
            d1 = depth[l1]
            d2 = depth[l2]
            d3 = depth[l3]
            if d3 > d1 and d3 > d2:
                overlap = rootsum[z] + rootsum[l3] - 2 * rootsum[l1] + w[l1]
            else:
                mid = l1 if d1 >= d2 else l2
                overlap = rootsum[z] - rootsum[mid] + w[mid]
            k = closed[e1] + closed[e2] - overlap
        closed[e0] = k
        l0 = lca[e0]
        inside = k - (rootsum[x] + rootsum[y] - 2 * rootsum[l0] + w[l0])
        outside = total - k
        heavy = inside if inside > outside else outside
        length = depth[x] + depth[y] - 2 * depth[l0] + 1
        if 3 * heavy <= 2 * total:
            k0 = length if length > short else short
            if best_e < 0 or _less(k0, heavy, length, bk0, bk1, bk2):
                best_e = e0
                best_c = c
                bk0 = k0
                bk1 = heavy
                bk2 = length
        elif best_e < 0:
            if fb_e < 0 or _less(heavy, length, 0, fk0, fk1, 0):
                fb_e = e0
                fb_c = c
                fk0 = heavy
                fk1 = length

    status = 1
    if best_e < 0:
        best_e = fb_e
        best_c = fb_c
        status = 0
    x = tail[2 * best_e]
    y = tail[2 * best_e + 1]
    l0 = lca[best_e]
    length = depth[x] + depth[y] - 2 * depth[l0] + 1
    if x == y:
        length = 1
    cycle = np.empty(length, I64)
    i = 0
    v = x
    while v != l0:
        cycle[i] = v
        i += 1
        v = parent[v]
    cycle[i] = l0
    j = length - 1
    v = y
    while v != l0:
        cycle[j] = v
        j -= 1
        v = parent[v]

    mask = np.zeros(nf, np.uint8)
    mask[best_c] = 1
    queue = np.empty(nf, I64)
    queue[0] = best_c
    head = 0
    qc = 1
    while head < qc:
        f = queue[head]
        head += 1
        for j in range(3):
            d = tri[f, j]
            if tree_edge[d >> 1] or (d >> 1) == best_e:
                continue
            g2 = face_of[d ^ 1]
            if f_par[g2] == (d ^ 1) and not mask[g2]:
                mask[g2] = 1
                queue[qc] = g2
                qc += 1
    return status, cycle, mask


# ---------------------------------------------------------------------------
# shortest paths with two-part keys
# ---------------------------------------------------------------------------
# A key is the pair (weight, noise) compared lexicographically, with the
# vertex id as the last tie-break.  Unreached vertices hold weight -1.

@njit(cache=True)
def _push(hw, hn, hv, size, w, n, v):
    if size == hw.shape[0]:
        cap = 2 * size + 16
        nw = np.empty(cap, I64)
        nn = np.empty(cap, I64)
        nv = np.empty(cap, I64)
        nw[:size] = hw[:size]
        nn[:size] = hn[:size]
        nv[:size] = hv[:size]
        hw, hn, hv = nw, nn, nv
    i = size
    while i > 0:
        p = (i - 1) >> 1
        if _less(w, n, v, hw[p], hn[p], hv[p]):
            hw[i], hn[i], hv[i] = hw[p], hn[p], hv[p]
            i = p
        else:
            break
    hw[i], hn[i], hv[i] = w, n, v
    return hw, hn, hv, size + 1


@njit(cache=True)
def _pop(hw, hn, hv, size):
    w, n, v = hw[0], hn[0], hv[0]
    size -= 1
    if size > 0:
        xw, xn, xv = hw[size], hn[size], hv[size]
        i = 0
        while True:
            c = 2 * i + 1
            if c >= size:
                break
            if c + 1 < size and _less(hw[c + 1], hn[c + 1], hv[c + 1], hw[c], hn[c], hv[c]):
                c += 1
            if _less(hw[c], hn[c], hv[c], xw, xn, xv):
                hw[i], hn[i], hv[i] = hw[c], hn[c], hv[c]
                i = c
            else:
                break
        hw[i], hn[i], hv[i] = xw, xn, xv
    return w, n, v, size


@njit(cache=True)
def piece_csr(edges, tail, vmark):
    """Local adjacency of the piece on ``edges``; ``vmark`` maps vertices to local ids.

    The caller resets ``vmark[verts] = -1`` when done.
    """
    k = edges.shape[0]
    verts = np.empty(2 * k, I64)
    nv = 0
    deg = np.zeros(2 * k + 1, I64)
    for i in range(k):
        e = edges[i]
        for b in range(2):
            v = tail[2 * e + b]
            if vmark[v] < 0:
                vmark[v] = nv
                verts[nv] = v
                nv += 1
            deg[vmark[v] + 1] += 1
    ptr = np.zeros(nv + 1, I64)
    for i in range(nv):
        ptr[i + 1] = ptr[i] + deg[i + 1]
    fill = ptr[:nv].copy()
    tgt = np.empty(2 * k, I64)
    darts = np.empty(2 * k, I64)
    for i in range(k):
        e = edges[i]
        for b in range(2):
            d = 2 * e + b
            a = vmark[tail[d]]
            tgt[fill[a]] = vmark[tail[d ^ 1]]
            darts[fill[a]] = d
            fill[a] += 1
    return verts[:nv], ptr, tgt, darts


@njit(cache=True)
def local_dijkstra(ptr, tgt, darts, kw, kn, src, dw, dn, par):
    """Single-source shortest paths over a local adjacency.

    ``dw``, ``dn`` and ``par`` are filled in place; ``par[v]`` is the dart
    entering ``v`` on its shortest path, ties going to the smaller dart id.
    """
    nv = ptr.shape[0] - 1
    for v in range(nv):
        dw[v] = -1
        dn[v] = 0
        par[v] = -1
    done = np.zeros(nv, np.uint8)
    hw = np.empty(16, I64)
    hn = np.empty(16, I64)
    hv = np.empty(16, I64)
    dw[src] = 0
    hw, hn, hv, size = _push(hw, hn, hv, 0, 0, 0, src)
    while size > 0:
        w, n, v, size = _pop(hw, hn, hv, size)
        if done[v]:
            continue
        done[v] = 1
        for k in range(ptr[v], ptr[v + 1]):
            u = tgt[k]
            if done[u]:
                continue
            d = darts[k]
            e = d >> 1
            nw = w + kw[e]
            nn = n + kn[e]
            if dw[u] < 0 or nw < dw[u] or (nw == dw[u] and nn < dn[u]):
                dw[u] = nw
                dn[u] = nn
                par[u] = d
                hw, hn, hv, size = _push(hw, hn, hv, size, nw, nn, u)
            elif nw == dw[u] and nn == dn[u] and d < par[u]:
                par[u] = d


@njit(cache=True)
def ddg_all(tail, kw, kn, piece_ptr, piece_edges, bptr, bverts, vmark):
    """Boundary-to-boundary distances of every piece.

    Piece ``q`` owns edges ``piece_edges[piece_ptr[q]:piece_ptr[q+1]]`` and
    boundary vertices ``bverts[bptr[q]:bptr[q+1]]``.  Its ``b x b`` matrix
    starts at ``moff[q]`` in the flat outputs ``(dw, dn)``; ``dw`` is -1 for
    unreachable pairs.
    """
    npieces = piece_ptr.shape[0] - 1
    moff = np.zeros(npieces + 1, I64)
    for q in range(npieces):
        b = bptr[q + 1] - bptr[q]
        moff[q + 1] = moff[q] + b * b
    dwo = np.full(moff[npieces], -1, I64)
    dno = np.zeros(moff[npieces], I64)
    for q in range(npieces):
        edges = piece_edges[piece_ptr[q]:piece_ptr[q + 1]]
        verts, ptr, tgt, darts = piece_csr(edges, tail, vmark)
        nv = verts.shape[0]
        b = bptr[q + 1] - bptr[q]
        loc = np.empty(b, I64)
        for i in range(b):
            loc[i] = vmark[bverts[bptr[q] + i]]
        dw = np.empty(nv, I64)
        dn = np.empty(nv, I64)
        par = np.empty(nv, I64)
        for i in range(b):
            if loc[i] < 0:
                continue
            local_dijkstra(ptr, tgt, darts, kw, kn, loc[i], dw, dn, par)
            row = moff[q] + i * b
            for j in range(b):
                if loc[j] >= 0 and dw[loc[j]] >= 0:
                    dwo[row + j] = dw[loc[j]]
                    dno[row + j] = dn[loc[j]]
        for i in range(nv):
            vmark[verts[i]] = -1
    return dwo, dno, moff


@njit(cache=True)
def source_tree(edges, tail, kw, kn, src, vmark):
    """Shortest-path tree of one piece from global vertex ``src``.

    Returns ``(verts, par)`` with ``par[i]`` the dart entering ``verts[i]``.
    """
    verts, ptr, tgt, darts = piece_csr(edges, tail, vmark)
    nv = verts.shape[0]
    s = vmark[src]
    for i in range(nv):
        vmark[verts[i]] = -1
    dw = np.empty(nv, I64)
    dn = np.empty(nv, I64)
    par = np.empty(nv, I64)
    if s >= 0:
        local_dijkstra(ptr, tgt, darts, kw, kn, s, dw, dn, par)
    else:
        par[:] = -1
    return verts, par


@njit(cache=True)
def union_dijkstra(mem_ptr, mem_q, mem_i, bptr, bverts, moff, dw, dn,
                   sptr, sdst, sw, sn, mask, src, dst):
    """Shortest ``src -> dst`` path over dense distance graphs and super edges.

    Vertex ``v`` belongs to pieces ``mem_q[mem_ptr[v]:mem_ptr[v+1]]`` at the
    boundary positions ``mem_i``.  Super edges are a CSR over global ids with
    ``sdst``; their index within the CSR is reported as the segment.  Only
    vertices with ``mask`` set are used.  Returns ``(w, n, verts, seg_q,
    seg_a, seg_b, settled)``: for a piece segment ``(q, i, j)``, for a super
    edge ``(-1, index, 0)``.  ``w`` is -1 when ``dst`` is unreachable.
    """
    nv = mask.shape[0]
    distw = np.full(nv, -1, I64)
    distn = np.zeros(nv, I64)
    pv = np.full(nv, -1, I64)
    pq = np.zeros(nv, I64)
    pa = np.zeros(nv, I64)
    pb = np.zeros(nv, I64)
    done = np.zeros(nv, np.uint8)
    hw = np.empty(64, I64)
    hn = np.empty(64, I64)
    hv = np.empty(64, I64)
    distw[src] = 0
    hw, hn, hv, size = _push(hw, hn, hv, 0, 0, 0, src)
    settled = 0
    while size > 0:
        w, n, v, size = _pop(hw, hn, hv, size)
        if done[v]:
            continue
        done[v] = 1
        settled += 1
        if v == dst:
            break
        for k in range(mem_ptr[v], mem_ptr[v + 1]):
            q = mem_q[k]
            i = mem_i[k]
            base = bptr[q]
            b = bptr[q + 1] - base
            row = moff[q] + i * b
            for j in range(b):
                if j == i:
                    continue
                ew = dw[row + j]
                if ew < 0:
                    continue
                u = bverts[base + j]
                if not mask[u] or done[u]:
                    continue
                nw = w + ew
                nn = n + dn[row + j]
                if distw[u] < 0 or nw < distw[u] or (nw == distw[u] and nn < distn[u]):
                    distw[u] = nw
                    distn[u] = nn
                    pv[u] = v
                    pq[u] = q
                    pa[u] = i
                    pb[u] = j
                    hw, hn, hv, size = _push(hw, hn, hv, size, nw, nn, u)
        for k in range(sptr[v], sptr[v + 1]):
            u = sdst[k]
            if not mask[u] or done[u]:
                continue
            nw = w + sw[k]
            nn = n + sn[k]
            if distw[u] < 0 or nw < distw[u] or (nw == distw[u] and nn < distn[u]):
                distw[u] = nw
                distn[u] = nn
                pv[u] = v
                pq[u] = -1
                pa[u] = k
                pb[u] = 0
                hw, hn, hv, size = _push(hw, hn, hv, size, nw, nn, u)
    if not done[dst]:
        e = np.empty(0, I64)
        return -1, 0, e, e, e, e, settled
    cnt = 0
    x = dst
    while x != src:
        cnt += 1
        x = pv[x]
    verts = np.empty(cnt + 1, I64)
    sq = np.empty(cnt, I64)
    sa = np.empty(cnt, I64)
    sb = np.empty(cnt, I64)
    x = dst
    k = cnt
    verts[k] = dst
    while x != src:
        k -= 1
        sq[k] = pq[x]
        sa[k] = pa[x]
        sb[k] = pb[x]
        x = pv[x]
        verts[k] = x
    return distw[dst], distn[dst], verts, sq, sa, sb, settled


@njit(cache=True)
def scope_degrees(scope, mem_ptr, mem_q, mem_i, bptr, bverts, moff, dw, mask, stamp, cap):
    """Number of distinct masked neighbours of each scope vertex, capped at ``cap``."""
    out = np.zeros(scope.shape[0], I64)
    for s in range(scope.shape[0]):
        v = scope[s]
        c = 0
        for k in range(mem_ptr[v], mem_ptr[v + 1]):
            q = mem_q[k]
            i = mem_i[k]
            base = bptr[q]
            b = bptr[q + 1] - base
            row = moff[q] + i * b
            for j in range(b):
                if j == i or dw[row + j] < 0:
                    continue
                u = bverts[base + j]
                if u == v or not mask[u] or stamp[u] == s:
                    continue
                stamp[u] = s
                c += 1
                if c >= cap:
                    break
            if c >= cap:
                break
        out[s] = c
    for s in range(scope.shape[0]):
        v = scope[s]
        for k in range(mem_ptr[v], mem_ptr[v + 1]):
            q = mem_q[k]
            base = bptr[q]
            for j in range(bptr[q + 1] - base):
                stamp[bverts[base + j]] = -1
    return out


@njit(cache=True)
def neighbours(v, mem_ptr, mem_q, mem_i, bptr, bverts, moff, dw, dn, mask):
    """Best dense-distance-graph segment from ``v`` to each masked neighbour.

    Returns parallel arrays ``(u, w, n, q, i, j)``, one row per neighbour.
    """
    tot = 0
    for k in range(mem_ptr[v], mem_ptr[v + 1]):
        q = mem_q[k]
        tot += bptr[q + 1] - bptr[q]
    ou = np.empty(tot, I64)
    ow = np.empty(tot, I64)
    on = np.empty(tot, I64)
    oq = np.empty(tot, I64)
    oi = np.empty(tot, I64)
    oj = np.empty(tot, I64)
    c = 0
    for k in range(mem_ptr[v], mem_ptr[v + 1]):
        q = mem_q[k]
        i = mem_i[k]
        base = bptr[q]
        b = bptr[q + 1] - base
        row = moff[q] + i * b
        for j in range(b):
            if j == i or dw[row + j] < 0:
                continue
            u = bverts[base + j]
            if u == v or not mask[u]:
                continue
            w = dw[row + j]
            n = dn[row + j]
            hit = -1
            for t in range(c):
                if ou[t] == u:
                    hit = t
                    break
            if hit < 0:
                ou[c], ow[c], on[c], oq[c], oi[c], oj[c] = u, w, n, q, i, j
                c += 1
            elif w < ow[hit] or (w == ow[hit] and n < on[hit]):
                ow[hit], on[hit], oq[hit], oi[hit], oj[hit] = w, n, q, i, j
    return ou[:c], ow[:c], on[:c], oq[:c], oi[:c], oj[:c]


@njit(cache=True)
def flood(rot_ptr, rot_darts, tail, allowed, blocked, seeds):
    """Vertices reachable from ``seeds`` through allowed, unblocked vertices."""
    nv = allowed.shape[0]
    reached = np.zeros(nv, np.uint8)
    stack = np.empty(nv, I64)
    top = 0
    for s in seeds:
        if allowed[s] and not blocked[s] and not reached[s]:
            reached[s] = 1
            stack[top] = s
            top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        for k in range(rot_ptr[v], rot_ptr[v + 1]):
            u = tail[rot_darts[k] ^ 1]
            if allowed[u] and not blocked[u] and not reached[u]:
                reached[u] = 1
                stack[top] = u
                top += 1
    return reached
