"""Four-point hard-core correlations and the noise-correlation map.

Strategy
--------
Operators at different sites commute, so any four-operator string is first
brought to site-ordered form a <= b <= c <= d by a stable sort that keeps the
relative order of same-site operators.  A sign pattern (alpha, beta, gamma,
delta), +1 for annihilation and -1 for creation, travels along.  Strings that
do not conserve particle number vanish on the fixed-N ground state and are
rejected before any determinant is touched.

The site-ordered value is a small determinant expression in the signed
propagator G = 2g - I plus two-point corrections.  Same-site products
b b+ pick up the virtual double-occupancy contribution 1 + b+ b, which is why
the coefficient of the two-point term is 3/2 when the first operator of a
same-site pair annihilates and 1/2 when it creates.  Every branch below is
validated to machine precision against the exact-diagonalization oracle
(see tests/test_fourpoint.py).

The noise map

    Delta(q1, q2) = (1/L^2) sum_{n m l j} e^{i 2pi q1 (n-m)/L} e^{i 2pi q2 (l-j)/L}
                    <b+_n b_m b+_l b_j>  -  <n_q1><n_q2>

is assembled in O(L^2) memory: four-point values are accumulated into
buckets T[(n-m) mod L, (l-j) mod L], and the double Fourier sum collapses to
P^T T P with P the L x L phase matrix.  Determinants of equal shape are
gathered into stacked arrays and evaluated in one batched LAPACK call.
"""

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import ComplexResidueError, IndexRangeError

CONJUGATION_TOL = 1e-9

# cap on stacked determinant batch size (elements) to bound resident memory
_MAX_BATCH_ELEMENTS = 2_000_000

_SIGNS_STANDARD = (-1, +1, -1, +1)

CASE_QUAD = "quad"
CASE_TRIPLE = "triple"
CASE_TWO_PAIRS = "two_pairs"
CASE_PAIR_LEFT = "pair_left"
CASE_PAIR_MID = "pair_mid"
CASE_PAIR_RIGHT = "pair_right"
CASE_ALL_DISTINCT = "all_distinct"


@dataclass(frozen=True)
class OrderedCase:
    pattern: str
    sites: tuple    # ascending
    signs: tuple    # permuted with the sites, same-site order preserved


@dataclass
class NoiseMap:
    delta: np.ndarray          # (L, L) complex
    s4: np.ndarray             # raw four-point transform before subtraction
    normalization: str
    meta: dict = field(default_factory=dict)

    @property
    def L(self) -> int:
        return self.delta.shape[0]


def site_order(sites, signs=_SIGNS_STANDARD) -> OrderedCase:
    """Stable sort by site; classify the coincidence pattern of the result."""
    order = sorted(range(4), key=lambda k: sites[k])
    s = tuple(sites[k] for k in order)
    sg = tuple(signs[k] for k in order)
    a, b, c, d = s
    if a == d:
        pattern = CASE_QUAD
    elif a == c or b == d:
        pattern = CASE_TRIPLE
    elif a == b and c == d:
        pattern = CASE_TWO_PAIRS
    elif a == b:
        pattern = CASE_PAIR_LEFT
    elif b == c:
        pattern = CASE_PAIR_MID
    elif c == d:
        pattern = CASE_PAIR_RIGHT
    else:
        pattern = CASE_ALL_DISTINCT
    return OrderedCase(pattern=pattern, sites=s, signs=sg)


# ---------------------------------------------------------------------------
# determinant building blocks (single-shot reference forms)
# ---------------------------------------------------------------------------

def matrix_M(G, x, y, z) -> float:
    """det over rows x..z-1 and columns x+1..z, both skipping y; empty -> 1."""
    rows = [r for r in range(x, z) if r != y]
    cols = [c for c in range(x + 1, z + 1) if c != y]
    if not rows:
        return 1.0
    return float(np.linalg.det(G[np.ix_(rows, cols)]))


def matrix_S(G, p, u, v) -> float:
    """det over rows (p, u..v-1) and columns (p, u+1..v), in that order."""
    rows = [p] + list(range(u, v))
    cols = [p] + list(range(u + 1, v + 1))
    return float(np.linalg.det(G[np.ix_(rows, cols)]))


def matrix_X(G, a, b, c, d) -> float:
    """det over rows (b, a+1..b-1, c+1..d) and columns (a..b-1, c+1..d-1, c)."""
    rows = [b] + list(range(a + 1, b)) + list(range(c + 1, d + 1))
    cols = list(range(a, b)) + list(range(c + 1, d)) + [c]
    return float(np.linalg.det(G[np.ix_(rows, cols)]))


def matrix_Y(G, a, b, c, d) -> float:
    """det over rows (a+1..b-1, c+1..d-1, c, d) and columns (a, b, a+1..b-1, c+1..d-1)."""
    rows = list(range(a + 1, b)) + list(range(c + 1, d)) + [c, d]
    cols = [a, b] + list(range(a + 1, b)) + list(range(c + 1, d))
    return float(np.linalg.det(G[np.ix_(rows, cols)]))


# ---------------------------------------------------------------------------
# site-ordered evaluation
# ---------------------------------------------------------------------------

def _pair_coeff(first_sign) -> float:
    # b b+ = 1 + b+ b on the physical space, so the annihilate-first pair
    # carries an extra unit of two-point weight
    return 1.5 if first_sign == +1 else 0.5


def chi_ordered(case: OrderedCase, G, B, g) -> float:
    """Evaluate a site-ordered four-operator expectation value."""
    if sum(case.signs) != 0:
        return 0.0
    a, b, c, d = case.sites
    alpha, beta, gamma, delta = case.signs
    if case.pattern == CASE_ALL_DISTINCT:
        parity = -1.0 if (b + d - c - a) % 2 else 1.0
        coeff_x = (2 - gamma * delta - alpha * beta) / 16.0
        coeff_y = (beta / 4.0) * ((gamma == -1) - (alpha == -1))
        total = 0.0
        if coeff_x:
            total += coeff_x * matrix_X(G, a, b, c, d)
        if coeff_y:
            total += coeff_y * matrix_Y(G, a, b, c, d)
        return parity * total
    if case.pattern == CASE_PAIR_MID:
        if beta * gamma != -1:
            return 0.0
        return -0.25 * matrix_M(G, a, b, d) + _pair_coeff(beta) * B[a, d]
    if case.pattern == CASE_PAIR_LEFT:
        if alpha * beta != -1:
            return 0.0
        return 0.25 * matrix_S(G, a, c, d) + _pair_coeff(alpha) * B[c, d]
    if case.pattern == CASE_PAIR_RIGHT:
        if gamma * delta != -1:
            return 0.0
        return 0.25 * matrix_S(G, c, a, b) + _pair_coeff(gamma) * B[a, b]
    if case.pattern == CASE_QUAD:
        # <b+ b b+ b> = <n>; every other conserving same-site string either
        # contains b^2 / b+^2 or ends outside the physical space
        return g[a, a] if case.signs == (-1, +1, -1, +1) else 0.0
    if case.pattern == CASE_TRIPLE:
        t, e = (a, d) if a == c else (d, a)
        trip = tuple(s for site, s in zip(case.sites, case.signs) if site == t)
        single = next(s for site, s in zip(case.sites, case.signs) if site == e)
        if (trip, single) in (((-1, +1, -1), +1), ((+1, -1, +1), -1)):
            return B[t, e]
        return 0.0
    # two pairs: number pairs give density-density, an annihilate-first pair
    # adds the density of the other (number-pair) site
    p1 = (alpha, beta)
    p2 = (gamma, delta)
    base = g[a, a] * g[c, c] - g[a, c] ** 2
    if p1 == (-1, +1) and p2 == (-1, +1):
        return base
    if p1 == (-1, +1) and p2 == (+1, -1):
        return base + g[a, a]
    if p1 == (+1, -1) and p2 == (-1, +1):
        return base + g[c, c]
    return 0.0


def four_point(sites, G, B, g, signs=_SIGNS_STANDARD) -> float:
    """<b^(s1)_n b^(s2)_m b^(s3)_l b^(s4)_j>, default signs give <b+ b b+ b>."""
    L = G.shape[0]
    for s in sites:
        if not (0 <= s < L):
            raise IndexRangeError(f"site {s} out of range for L={L}")
    return chi_ordered(site_order(sites, signs), G, B, g)


# ---------------------------------------------------------------------------
# dispatch tables for the bucketed sweep
# ---------------------------------------------------------------------------

def _classify_arrangement(ranks, signs=_SIGNS_STANDARD):
    """Stable-sort a symbolic tuple of sorted-site ranks; return ordered signs."""
    order = sorted(range(4), key=lambda k: ranks[k])
    return tuple(ranks[k] for k in order), tuple(signs[k] for k in order)


def _distinct_perm_table():
    """24 arrangements of 4 distinct sites -> which X/Y combination applies.

    Returns list of (perm, kind) with kind in {"x", "xy", "y", None}:
        x  -> chi = parity/4 * |X|
        xy -> chi = parity/4 * (|X| - |Y|)
        y  -> chi = parity/4 * |Y|
    """
    table = []
    for perm in itertools.permutations(range(4)):
        _, sg = _classify_arrangement(perm)
        alpha, beta, gamma, delta = sg
        coeff_x = (2 - gamma * delta - alpha * beta) / 16.0
        coeff_y = (beta / 4.0) * ((gamma == -1) - (alpha == -1))
        if coeff_x and coeff_y:
            kind = "xy"
        elif coeff_x:
            kind = "x"
        elif coeff_y:
            kind = "y"
        else:
            kind = None
        table.append((perm, kind))
    return table


def _pair_perm_table(doubled_rank):
    """12 arrangements of a doubled site among {0,1,2}; kind in {"mov","num",None}."""
    ranks_base = {0: (0, 0, 1, 2), 1: (0, 1, 1, 2), 2: (0, 1, 2, 2)}[doubled_rank]
    table = []
    for perm in sorted(set(itertools.permutations(ranks_base))):
        ss, sg = _classify_arrangement(perm)
        if sum(sg) != 0:
            table.append((perm, None))
            continue
        pair = tuple(s for r, s in zip(ss, sg) if r == doubled_rank)
        if pair == (+1, -1):
            kind = "mov"
        elif pair == (-1, +1):
            kind = "num"
        else:
            kind = None
        table.append((perm, kind))
    return table


def _two_site_tables():
    """Arrangements over two distinct sites: (ranks, value-id) lists."""
    out = []
    for ranks_base in ((0, 0, 0, 1), (0, 1, 1, 1), (0, 0, 1, 1)):
        for perm in sorted(set(itertools.permutations(ranks_base))):
            ss, sg = _classify_arrangement(perm)
            if sum(sg) != 0:
                out.append((perm, None))
                continue
            if ss.count(0) in (1, 3):
                t_rank = 0 if ss.count(0) == 3 else 1
                trip = tuple(s for r, s in zip(ss, sg) if r == t_rank)
                single = next(s for r, s in zip(ss, sg) if r != t_rank)
                ok = (trip, single) in (((-1, +1, -1), +1), ((+1, -1, +1), -1))
                out.append((perm, "B" if ok else None))
            else:
                p1 = (sg[0], sg[1])
                p2 = (sg[2], sg[3])
                if p1 == (-1, +1) and p2 == (-1, +1):
                    out.append((perm, "nn"))
                elif p1 == (-1, +1) and p2 == (+1, -1):
                    out.append((perm, "nn+x"))
                elif p1 == (+1, -1) and p2 == (-1, +1):
                    out.append((perm, "nn+y"))
                else:
                    out.append((perm, None))
    return out


_DISTINCT_TABLE = _distinct_perm_table()
_PAIR_TABLES = {dp: _pair_perm_table(dp) for dp in (0, 1, 2)}
_TWO_SITE_TABLE = _two_site_tables()


# ---------------------------------------------------------------------------
# batched determinants per gap class
# ---------------------------------------------------------------------------

def _batched_det(G, rows, cols):
    """Determinants of the stacked blocks G[rows[k], cols[k]]."""
    K, s = rows.shape
    if s == 0:
        return np.ones(K)
    out = np.empty(K)
    step = max(1, _MAX_BATCH_ELEMENTS // (s * s))
    for k0 in range(0, K, step):
        sl = slice(k0, min(k0 + step, K))
        out[sl] = np.linalg.det(G[rows[sl][:, :, None], cols[sl][:, None, :]])
    return out


def _ranges(starts, width):
    """Stacked integer ranges starts[k] .. starts[k]+width-1 as a (K, width) block."""
    return starts[:, None] + np.arange(width)[None, :]


def _quad_class_dets(G, A, C, w1, w2):
    """|X| and |Y| for quadruples (a, a+w1, c, c+w2) in one stacked batch."""
    B_ = A + w1
    x_rows = np.concatenate([B_[:, None], _ranges(A + 1, w1 - 1), _ranges(C + 1, w2)], axis=1)
    x_cols = np.concatenate([_ranges(A, w1), _ranges(C + 1, w2 - 1), C[:, None]], axis=1)
    y_rows = np.concatenate([_ranges(A + 1, w1 - 1), _ranges(C + 1, w2 - 1),
                             C[:, None], (C + w2)[:, None]], axis=1)
    y_cols = np.concatenate([A[:, None], B_[:, None], _ranges(A + 1, w1 - 1),
                             _ranges(C + 1, w2 - 1)], axis=1)
    return _batched_det(G, x_rows, x_cols), _batched_det(G, y_rows, y_cols)


def _triple_class_dets(G, T1, h1, h2):
    """M, S(left) and S(right) determinants for triples (t1, t1+h1, t1+h1+h2)."""
    T2 = T1 + h1
    T3 = T2 + h2
    m_rows = np.concatenate([_ranges(T1, h1), _ranges(T2 + 1, h2 - 1)], axis=1)
    m_cols = np.concatenate([_ranges(T1 + 1, h1 - 1), _ranges(T2 + 1, h2)], axis=1)
    sl_rows = np.concatenate([T1[:, None], _ranges(T2, h2)], axis=1)
    sl_cols = np.concatenate([T1[:, None], _ranges(T2 + 1, h2)], axis=1)
    sr_rows = np.concatenate([T3[:, None], _ranges(T1, h1)], axis=1)
    sr_cols = np.concatenate([T3[:, None], _ranges(T1 + 1, h1)], axis=1)
    return (_batched_det(G, m_rows, m_cols),
            _batched_det(G, sl_rows, sl_cols),
            _batched_det(G, sr_rows, sr_cols))


def _scatter(T_flat, L, n, m, l, j, vals):
    idx = ((n - m) % L) * L + (l - j) % L
    T_flat += np.bincount(idx, weights=vals, minlength=L * L)


def _work_items(L):
    """Deterministic list of gap classes; chunk layout is independent of threads."""
    items = [("local",)]
    for h1 in range(1, L - 1):
        for h2 in range(1, L - h1):
            items.append(("triple", h1, h2))
    for w1 in range(1, L - 2):
        for w2 in range(1, L - 1 - w1):
            if w1 + w2 > L - 2:
                continue
            items.append(("quad", w1, w2))
    return items


def _eval_item(item, G, B, g, L):
    """Partial bucket matrix T for one gap class."""
    T = np.zeros(L * L)
    kind = item[0]
    if kind == "local":
        # one and two distinct sites: pure g/B lookups
        T[0] += float(np.sum(np.diagonal(g)))
        if L >= 2:
            x, y = np.triu_indices(L, k=1)
            nn = g[x, x] * g[y, y] - g[x, y] ** 2
            vals = {"B": B[x, y], "nn": nn, "nn+x": nn + g[x, x], "nn+y": nn + g[y, y]}
            sites = np.stack([x, y], axis=1)
            for perm, vid in _TWO_SITE_TABLE:
                if vid is None:
                    continue
                n, m, l, j = (sites[:, perm[k]] for k in range(4))
                _scatter(T, L, n, m, l, j, vals[vid])
        return T
    if kind == "triple":
        _, h1, h2 = item
        T1 = np.arange(L - h1 - h2)
        detM, detSL, detSR = _triple_class_dets(G, T1, h1, h2)
        T2, T3 = T1 + h1, T1 + h1 + h2
        for dp, det, outer in ((0, detSL, (T2, T3)), (1, detM, (T1, T3)),
                               (2, detSR, (T1, T2))):
            sgn = -0.25 if dp == 1 else 0.25
            b_pair = B[outer[0], outer[1]]
            vals = {"mov": sgn * det + 1.5 * b_pair, "num": sgn * det + 0.5 * b_pair}
            sites = np.stack((T1, T2, T3), axis=1)
            for perm, vid in _PAIR_TABLES[dp]:
                if vid is None:
                    continue
                n, m, l, j = (sites[:, perm[k]] for k in range(4))
                _scatter(T, L, n, m, l, j, vals[vid])
        return T
    _, w1, w2 = item
    # quadruples a < a+w1 < c < c+w2: enumerate all (a, c) with that gap pair
    a_list, c_list = [], []
    for a in range(L - w1 - w2 - 1):
        c0 = a + w1 + 1
        c1 = L - w2
        if c1 > c0:
            a_list.append(np.full(c1 - c0, a))
            c_list.append(np.arange(c0, c1))
    if not a_list:
        return T
    A = np.concatenate(a_list)
    C = np.concatenate(c_list)
    detX, detY = _quad_class_dets(G, A, C, w1, w2)
    parity = -1.0 if (w1 + w2) % 2 else 1.0
    vals = {"x": 0.25 * parity * detX,
            "xy": 0.25 * parity * (detX - detY),
            "y": 0.25 * parity * detY}
    sites = np.stack((A, A + w1, C, C + w2), axis=1)
    for perm, vid in _DISTINCT_TABLE:
        if vid is None:
            continue
        n, m, l, j = (sites[:, perm[k]] for k in range(4))
        _scatter(T, L, n, m, l, j, vals[vid])
    return T


def _eval_item_star(args):
    return _eval_item(*args)


def noise_map(scenario, spectral, corr, threads: int = 1, batch_elements=None) -> NoiseMap:
    """Assemble Delta(q1, q2) from the determinant engine.

    The reduction order over gap classes is fixed, so the result is bitwise
    independent of the worker count.
    """
    global _MAX_BATCH_ELEMENTS
    G, B, g = spectral.G, corr.B, spectral.g
    L = spectral.L
    t0 = time.perf_counter()
    items = _work_items(L)
    old_batch = _MAX_BATCH_ELEMENTS
    if batch_elements:
        _MAX_BATCH_ELEMENTS = int(batch_elements)
    try:
        if threads > 1 and len(items) > 8:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                partials = pool.map(_eval_item_star,
                                    ((it, G, B, g, L) for it in items),
                                    chunksize=max(1, len(items) // (4 * threads)))
                T_flat = np.zeros(L * L)
                for part in partials:   # executor.map preserves submission order
                    T_flat += part
        else:
            T_flat = np.zeros(L * L)
            for it in items:
                T_flat += _eval_item(it, G, B, g, L)
    finally:
        _MAX_BATCH_ELEMENTS = old_batch
    t1 = time.perf_counter()
    T = T_flat.reshape(L, L)
    P = np.exp(2j * np.pi * np.outer(np.arange(L), np.arange(L)) / L)
    s4 = P.T @ T @ P
    nq_raw = L * corr.nq if corr.normalization == "per-site" else corr.nq
    if scenario.normalization == "per-site":
        delta = s4 / L**2 - np.outer(nq_raw / L, nq_raw / L)
    else:
        delta = s4 - np.outer(nq_raw, nq_raw)
    t2 = time.perf_counter()
    # Delta(q1,q2)* must equal Delta(-q1,-q2): the underlying values are real
    flipped = delta[np.ix_((-np.arange(L)) % L, (-np.arange(L)) % L)]
    worst = np.abs(delta.conj() - flipped).max()
    if worst > CONJUGATION_TOL:
        raise ComplexResidueError(
            f"noise map violates conjugation symmetry by {worst:g}")
    meta = {
        "tuple_count": L**4,
        "det_count": 2 * comb(L, 4) + 3 * comb(L, 3),
        "gap_classes": len(items),
        "threads": threads,
        "mode": "streamed-classes",
        "stage1_seconds": t1 - t0,
        "stage2_seconds": t2 - t1,
        "conjugation_defect": float(worst),
    }
    return NoiseMap(delta=delta, s4=s4, normalization=scenario.normalization, meta=meta)


# ---------------------------------------------------------------------------
# post-processing
# ---------------------------------------------------------------------------

def delta_cut(noise: NoiseMap, q2: int) -> np.ndarray:
    """Column Delta(q1, q2) for fixed q2."""
    if not (0 <= q2 < noise.L):
        raise IndexRangeError(f"q2={q2} out of range for L={noise.L}")
    return noise.delta[:, q2].copy()


def mott_regularity(noise: NoiseMap):
    """Departure from a pattern that depends only on q1 - q2.

    Returns (D, delta_bar) where delta_bar[r] is the q2-average of
    Delta(q2 + r, q2) and D is the worst absolute deviation from it.
    """
    L = noise.L
    q2 = np.arange(L)
    delta_bar = np.empty(L, dtype=complex)
    for r in range(L):
        delta_bar[r] = noise.delta[(q2 + r) % L, q2].mean()
    dev = 0.0
    for r in range(L):
        dev = max(dev, np.abs(noise.delta[(q2 + r) % L, q2] - delta_bar[r]).max())
    return dev, delta_bar


def peak_contrast(signal, peak_indices, background_window) -> float:
    """Mean over the peaks divided by the median of the background.

    The background is the given window minus the peaks and minus q = 0.
    """
    signal = np.asarray(signal)
    peaks = list(peak_indices)
    for idx in itertools.chain(peaks, background_window):
        if not (0 <= idx < len(signal)):
            raise IndexRangeError(f"index {idx} out of range")
    bg = [q for q in background_window if q not in peaks and q != 0]
    if not bg:
        raise IndexRangeError("background window is empty after removing peaks")
    return float(np.mean(signal[peaks]) / np.median(signal[bg]))
