"""Independent brute-force oracles.

Nothing here touches the library's Gröbner engine or sparse linear
algebra: spans are built from explicit monomial multiples and ranks come
from a dense Fraction elimination written from scratch.
"""

from fractions import Fraction
from itertools import product
from math import comb


def dense_rank(rows, p=None):
    """Rank of a list of equal-length rows (Fractions, or residues mod p)."""
    if p:
        rows = [[a % p for a in r] for r in rows]
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        inv = pow(pr[c], p - 2, p) if p else 1 / Fraction(pr[c])
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [(a - f * b) % p if p else a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def monomials(weights, d):
    """All exponent vectors of weighted degree d, by brute force."""
    if d < 0:
        return []
    ranges = [range(d // w + 1) for w in weights]
    return [e for e in product(*ranges) if sum(a * w for a, w in zip(e, weights)) == d]


def weighted_count(weights, d):
    """Number of monomials of weighted degree d via the generating-function recursion."""
    if d < 0:
        return 0
    ways = [1] + [0] * d
    for w in weights:
        for s in range(w, d + 1):
            ways[s] += ways[s - w]
    return ways[d]


def terms_of(f):
    """Polynomial -> {exponent tuple: Fraction}."""
    return {e: Fraction(c) for e, c in f.terms.items()}


def _deg(e, weights):
    return sum(a * w for a, w in zip(e, weights))


def _mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def module_span_rows(gens, shifts, weights, d, ideal=()):
    """Rows spanning (submodule generated by gens + ideal*F) in degree d.

    ``gens`` are lists of component dicts {exps: coeff}; the basis of F_d is
    (t, monomial) ordered lexicographically.
    """
    basis = [(t, m) for t, s in enumerate(shifts) for m in monomials(weights, d - s)]
    index = {b: i for i, b in enumerate(basis)}
    vectors = list(gens)
    for g in ideal:
        for t in range(len(shifts)):
            comp = [dict() for _ in shifts]
            comp[t] = g
            vectors.append(comp)
    rows = []
    for v in vectors:
        degs = {_deg(e, weights) + shifts[t] for t, c in enumerate(v) for e in c}
        if not degs:
            continue
        (vd,) = degs
        for m in monomials(weights, d - vd):
            row = [Fraction(0)] * len(basis)
            for t, c in enumerate(v):
                for e, a in c.items():
                    row[index[(t, _mul(e, m))]] += a
            rows.append(row)
    return basis, rows


def ideal_span_dim(gens, weights, d):
    """dim of (ideal generated by gens)_d for polynomial dicts."""
    _, rows = module_span_rows([[g] for g in gens], (0,), weights, d)
    return dense_rank(rows)


def in_ideal_span(f, gens, weights):
    """Degreewise membership test of homogeneous f in (gens)."""
    if not f:
        return True
    d = _deg(next(iter(f)), weights)
    basis, rows = module_span_rows([[g] for g in gens], (0,), weights, d)
    index = {b: i for i, b in enumerate(basis)}
    v = [Fraction(0)] * len(basis)
    for e, c in f.items():
        v[index[(0, e)]] = Fraction(c)
    return dense_rank(rows + [v]) == dense_rank(rows)


def quotient_piece_dim(relations, shifts, weights, d, ideal=()):
    basis, rows = module_span_rows(relations, shifts, weights, d, ideal)
    return len(basis) - dense_rank(rows)


def colon_dim_oracle(gens, f, weights, d):
    """dim {g in A_d : f*g in (gens)} by solving a linear system."""
    df = _deg(next(iter(f)), weights)
    src = monomials(weights, d)
    basis, rows = module_span_rows([[g] for g in gens], (0,), weights, d + df)
    index = {b: i for i, b in enumerate(basis)}
    images = []
    for m in src:
        v = [Fraction(0)] * len(basis)
        for e, c in f.items():
            v[index[(0, _mul(e, m))]] += c
        images.append(v)
    # kernel of A_d -> A_{d+df}/(gens) has dim |src| - (rank(rows + images) - rank(rows))
    return len(src) - (dense_rank(rows + images) - dense_rank(rows))


# ---------------------------------------------------------------------------
# local cohomology oracles


def inverse_monomial_count(n, d):
    """dim H^n_m(k[x_1..x_n])_d: monomials x^{-a} with all a_i >= 1 and -sum a = d."""
    if n == 0:
        return 1 if d == 0 else 0
    s = -d
    return comb(s - 1, n - 1) if s >= n else 0


def laurent_xy_h1(d):
    """dim H^1_(x,y)(k[x,y]/(xy))_d from the Laurent pieces.

    M_x = k[x, 1/x] and M_y = k[y, 1/y] have one monomial per degree,
    M_xy = 0, so H^1 = coker(M -> M_x + M_y) with dim M_d counted by hand.
    """
    lx = 1
    ly = 1
    md = 0 if d < 0 else (1 if d == 0 else 2)
    return lx + ly - md


def cech_level_h_free(n, d, delta):
    """Level-δ homology at the top spot of the Čech model of k[x_1..x_n] for the variables.

    Counts monomials of degree d + nδ with every exponent below δ.
    """
    total = d + n * delta
    if total < 0:
        return 0
    return sum(1 for e in product(range(delta), repeat=n) if sum(e) == total)


def cech_brute_tables(n, window, delta):
    """Homology dimensions of the level-δ Čech complex of k[x_1..x_n] w.r.t. the variables.

    Builds every differential from scratch with dense rows.
    """
    from itertools import combinations
    weights = (1,) * n
    subsets = [list(combinations(range(n), k)) for k in range(n + 1)]

    def space(k, d):
        out = []
        for S in subsets[k]:
            for m in monomials(weights, d + delta * len(S)):
                out.append((S, m))
        return out

    def matrix(k, d):
        src, tgt = space(k, d), space(k + 1, d)
        index = {b: i for i, b in enumerate(tgt)}
        rows = []
        for S, m in src:
            row = [0] * len(tgt)
            for j in range(n):
                if j in S:
                    continue
                T = tuple(sorted(S + (j,)))
                sign = -1 if T.index(j) % 2 else 1
                e = list(m)
                e[j] += delta
                row[index[(T, tuple(e))]] += sign
            rows.append(row)
        return rows, len(src), len(tgt)

    table = {}
    for d in window:
        for k in range(n + 1):
            rows_k, ns, _ = matrix(k, d) if k < n else ([], len(space(k, d)), 0)
            rk = dense_rank([[Fraction(a) for a in r] for r in rows_k]) if rows_k else 0
            if k > 0:
                prev, _, _ = matrix(k - 1, d)
                rprev = dense_rank([[Fraction(a) for a in r] for r in prev]) if prev else 0
            else:
                rprev = 0
            table[(k, d)] = ns - rk - rprev
    return table
