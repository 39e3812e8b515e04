"""Pure-Python message-update sweeps.

These are the fallback twins of the compiled kernels in _kernels_c.pyx.  The
two implementations perform the same floating-point operations in the same
order, so for equal inputs they produce bit-identical trajectories.  Any
change here must be mirrored there.

Edges are stored clause-major: edge e belongs to clause edge_clause[e] and
variable edge_var[e], and the edges of clause a are the contiguous range
clause_ptr[a]:clause_ptr[a+1].  var_edge lists edge ids grouped by variable
via var_ptr.
"""

CLAMP = 1e-12


def bp_sweep(edge_var, edge_clause, edge_sign, var_ptr, var_edge, clause_ptr,
             u, psi, order, damping):
    """One asynchronous sweep of the two BP message families.

    For each edge e = (i, a) in the given order: recompute the variable
    message psi[e] from the clause messages reaching i, then the clause
    message u[e] from the variable messages reaching a.  Returns the largest
    absolute message change.
    """
    residual = 0.0
    for e in order:
        i = edge_var[e]
        a = edge_clause[e]
        se = edge_sign[e]
        # products over i's other occurrences, split by agreement with e's sign
        s_u = 1.0
        s_m = 1.0
        o_u = 1.0
        o_m = 1.0
        for k in range(var_ptr[i], var_ptr[i + 1]):
            f = var_edge[k]
            if f == e:
                continue
            uf = u[f]
            if uf < CLAMP:
                uf = CLAMP
            elif uf > 1.0 - CLAMP:
                uf = 1.0 - CLAMP
            if edge_sign[f] == se:
                s_u *= uf
                s_m *= 1.0 - uf
            else:
                o_u *= uf
                o_m *= 1.0 - uf
        num = s_u * o_m
        new_psi = num / (num + o_u * s_m)
        d = new_psi - psi[e]
        if d < 0.0:
            d = -d
        if d > residual:
            residual = d
        psi[e] = new_psi
        prod = 1.0
        for g in range(clause_ptr[a], clause_ptr[a + 1]):
            if g == e:
                continue
            prod *= psi[g]
        new_u = (1.0 - prod) / (2.0 - prod)
        if damping > 0.0:
            new_u = damping * u[e] + (1.0 - damping) * new_u
        d = new_u - u[e]
        if d < 0.0:
            d = -d
        if d > residual:
            residual = d
        u[e] = new_u
    return residual


def sp_sweep(edge_var, edge_clause, edge_sign, var_ptr, var_edge, clause_ptr,
             u, psi_u, psi_s, psi_star, order, damping):
    """One asynchronous SP sweep.

    Each edge carries a normalized warning triple (psi_u, psi_s, psi_star)
    and a clause message u.  Only a lower clamp is applied when reading u so
    the all-ones trivial fixed point is preserved exactly.  Returns
    (largest absolute change, number of all-zero triples normalized to the
    joker state).
    """
    residual = 0.0
    jokers = 0
    for e in order:
        i = edge_var[e]
        a = edge_clause[e]
        se = edge_sign[e]
        s_p = 1.0
        o_p = 1.0
        for k in range(var_ptr[i], var_ptr[i + 1]):
            f = var_edge[k]
            if f == e:
                continue
            uf = u[f]
            if uf < CLAMP:
                uf = CLAMP
            if edge_sign[f] == se:
                s_p *= uf
            else:
                o_p *= uf
        w_u = (1.0 - o_p) * s_p
        w_s = (1.0 - s_p) * o_p
        w_j = s_p * o_p
        tot = w_u + w_s + w_j
        if tot == 0.0:
            n_u = 0.0
            n_s = 0.0
            n_j = 1.0
            jokers += 1
        else:
            n_u = w_u / tot
            n_s = w_s / tot
            n_j = w_j / tot
        d = n_u - psi_u[e]
        if d < 0.0:
            d = -d
        if d > residual:
            residual = d
        d = n_s - psi_s[e]
        if d < 0.0:
            d = -d
        if d > residual:
            residual = d
        d = n_j - psi_star[e]
        if d < 0.0:
            d = -d
        if d > residual:
            residual = d
        psi_u[e] = n_u
        psi_s[e] = n_s
        psi_star[e] = n_j
        prod = 1.0
        for g in range(clause_ptr[a], clause_ptr[a + 1]):
            if g == e:
                continue
            prod *= psi_u[g]
        new_u = 1.0 - prod
        if damping > 0.0:
            new_u = damping * u[e] + (1.0 - damping) * new_u
        d = new_u - u[e]
        if d < 0.0:
            d = -d
        if d > residual:
            residual = d
        u[e] = new_u
    return residual, jokers
