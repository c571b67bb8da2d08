# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled chromatic-number kernel (bitmask graphs on at most 64 vertices).

Twin of ``_kernel_py``: same branching rule, same symmetry breaking, same
return convention (chi, colouring, completed).
"""

from libc.stdlib cimport free, malloc
from libc.stdint cimport int64_t, uint64_t
from libc.time cimport CLOCKS_PER_SEC, clock

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #define HC_POPCNT64(x) __builtin_popcountll(x)
    #define HC_CTZ64(x) __builtin_ctzll(x)
    #else
    static int HC_POPCNT64(unsigned long long x){int c=0;while(x){x&=x-1;c++;}return c;}
    static int HC_CTZ64(unsigned long long x){int c=0;while(!(x&1ULL)){x>>=1;c++;}return c;}
    #endif
    """
    int HC_POPCNT64(uint64_t x) nogil
    int HC_CTZ64(uint64_t x) nogil

IMPLEMENTATION = "cython"


cdef struct State:
    int n
    int k
    uint64_t* adj
    int* col
    uint64_t* sat
    int64_t nodes
    int64_t deadline
    bint timed_out


cdef bint _dfs(State* st, int depth, int maxused) noexcept nogil:
    cdef int v, w, c, s, d, limit
    cdef int best_v = -1, best_sat = -1, best_deg = -1
    cdef uint64_t a, bit, touched

    st.nodes += 1
    if st.deadline > 0 and (st.nodes & 8191) == 0:
        if <int64_t>clock() > st.deadline:
            st.timed_out = True
            return False
    if depth == st.n:
        return True
    for v in range(st.n):
        if st.col[v] < 0:
            s = HC_POPCNT64(st.sat[v])
            if s > best_sat:
                best_sat = s
                best_deg = HC_POPCNT64(st.adj[v])
                best_v = v
            elif s == best_sat:
                d = HC_POPCNT64(st.adj[v])
                if d > best_deg:
                    best_deg = d
                    best_v = v
    v = best_v
    limit = maxused + 1
    if limit > st.k:
        limit = st.k
    for c in range(limit):
        if not (st.sat[v] >> c) & 1:
            st.col[v] = c
            bit = (<uint64_t>1) << c
            touched = 0
            a = st.adj[v]
            while a:
                w = HC_CTZ64(a)
                a &= a - 1
                if st.col[w] < 0 and not (st.sat[w] & bit):
                    st.sat[w] |= bit
                    touched |= (<uint64_t>1) << w
            if _dfs(st, depth + 1, maxused if c < maxused else c + 1):
                return True
            st.col[v] = -1
            a = touched
            while a:
                w = HC_CTZ64(a)
                a &= a - 1
                st.sat[w] &= ~bit
            if st.timed_out:
                return False
    return False


def solve_chromatic(adj, long long time_cap_ms=0):
    """Exact chromatic number of a bitmask-adjacency graph (n <= 64)."""
    cdef int n = len(adj)
    cdef uint64_t* cadj
    cdef int* order
    cdef int* col
    cdef int* best
    cdef uint64_t* sat
    cdef int i, j, v, w, c, tmp, lb, ub, k
    cdef uint64_t cand, a, used
    cdef State st

    if n == 0:
        return 0, [], True
    if n > 64:
        raise ValueError("compiled kernel is limited to 64 vertices")

    cadj = <uint64_t*> malloc(n * sizeof(uint64_t))
    order = <int*> malloc(n * sizeof(int))
    col = <int*> malloc(n * sizeof(int))
    best = <int*> malloc(n * sizeof(int))
    sat = <uint64_t*> malloc(n * sizeof(uint64_t))
    if cadj == NULL or order == NULL or col == NULL or best == NULL or sat == NULL:
        free(cadj); free(order); free(col); free(best); free(sat)
        raise MemoryError()

    try:
        for i in range(n):
            cadj[i] = <uint64_t> adj[i]
            order[i] = i
        # order by degree descending, id ascending (selection sort, n <= 64)
        for i in range(n):
            v = i
            for j in range(i + 1, n):
                if HC_POPCNT64(cadj[order[j]]) > HC_POPCNT64(cadj[order[v]]) or (
                    HC_POPCNT64(cadj[order[j]]) == HC_POPCNT64(cadj[order[v]])
                    and order[j] < order[v]
                ):
                    v = j
            tmp = order[i]; order[i] = order[v]; order[v] = tmp

        # greedy clique lower bound
        cand = ~(<uint64_t>0) if n == 64 else ((<uint64_t>1) << n) - 1
        lb = 0
        for i in range(n):
            v = order[i]
            if (cand >> v) & 1:
                lb += 1
                cand &= cadj[v]

        # greedy colouring upper bound
        for i in range(n):
            best[i] = -1
        ub = 0
        for i in range(n):
            v = order[i]
            used = 0
            a = cadj[v]
            while a:
                w = HC_CTZ64(a)
                a &= a - 1
                if best[w] >= 0:
                    used |= (<uint64_t>1) << best[w]
            c = 0
            while (used >> c) & 1:
                c += 1
            best[v] = c
            if c + 1 > ub:
                ub = c + 1

        if lb >= ub:
            return ub, [best[i] for i in range(n)], True

        st.n = n
        st.adj = cadj
        st.col = col
        st.sat = sat
        st.nodes = 0
        st.deadline = 0
        st.timed_out = False
        if time_cap_ms > 0:
            st.deadline = <int64_t>clock() + (time_cap_ms * <int64_t>CLOCKS_PER_SEC) // 1000

        k = ub - 1
        while k >= lb:
            st.k = k
            st.timed_out = False
            for i in range(n):
                col[i] = -1
                sat[i] = 0
            if _dfs(&st, 0, 0):
                ub = 0
                for i in range(n):
                    best[i] = col[i]
                    if col[i] + 1 > ub:
                        ub = col[i] + 1
                k = ub - 1
            elif st.timed_out:
                return ub, [best[i] for i in range(n)], False
            else:
                break
        return ub, [best[i] for i in range(n)], True
    finally:
        free(cadj); free(order); free(col); free(best); free(sat)
