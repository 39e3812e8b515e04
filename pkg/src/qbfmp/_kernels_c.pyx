# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled message-update sweeps.

Mirror of _kernels_py: same operations in the same order, so trajectories
are bit-identical to the pure-Python kernels (the build disables
floating-point contraction).  Any change here must be mirrored there.
"""

from libc.stdint cimport int8_t, int32_t, int64_t

DEF CLAMP = 1e-12


def bp_sweep(const int32_t[::1] edge_var, const int32_t[::1] edge_clause,
             const int8_t[::1] edge_sign, const int32_t[::1] var_ptr,
             const int32_t[::1] var_edge, const int32_t[::1] clause_ptr,
             double[::1] u, double[::1] psi, const int64_t[::1] order,
             double damping):
    """One asynchronous BP sweep; returns the largest message change."""
    cdef double residual = 0.0
    cdef double s_u, s_m, o_u, o_m, uf, num, new_psi, prod, new_u, d
    cdef Py_ssize_t idx, k, g
    cdef int64_t e
    cdef int32_t i, a, f
    cdef int8_t se
    cdef Py_ssize_t n = order.shape[0]
    for idx in range(n):
        e = order[idx]
        i = edge_var[e]
        a = edge_clause[e]
        se = edge_sign[e]
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


def sp_sweep(const int32_t[::1] edge_var, const int32_t[::1] edge_clause,
             const int8_t[::1] edge_sign, const int32_t[::1] var_ptr,
             const int32_t[::1] var_edge, const int32_t[::1] clause_ptr,
             double[::1] u, double[::1] psi_u, double[::1] psi_s,
             double[::1] psi_star, const int64_t[::1] order, double damping):
    """One asynchronous SP sweep; returns (largest change, joker count)."""
    cdef double residual = 0.0
    cdef long jokers = 0
    cdef double s_p, o_p, uf, w_u, w_s, w_j, tot, n_u, n_s, n_j, prod, new_u, d
    cdef Py_ssize_t idx, k, g
    cdef int64_t e
    cdef int32_t i, a, f
    cdef int8_t se
    cdef Py_ssize_t n = order.shape[0]
    for idx in range(n):
        e = order[idx]
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
