"""The sl_N Onsager algebra in its three presentations.

Canonical basis symbols after the reflection and trace reductions:

  * ``("B0", i, j)``   -- level-0 generators, 1 <= i < j <= N,
  * ``("B", i, j, n)`` -- level n >= 1, any i, j, diagonal limited to
                          i <= N-1 (index N eliminated by the trace).

Everything else (negative levels, level-0 lower triangle, diagonal
index N) reduces into this basis, so equality is decidable by
coefficient comparison.  The module's master invariant: the abstract
bracket agrees with the loop-algebra bracket through the embedding
B_ij^(n) = e_ij^(n) + (-1)^(i+j+1+nN) e_ji^(-n).
"""

from __future__ import annotations

from fractions import Fraction

from . import loop_algebra as la
from .exactnum import SpectralLaurent
from .frt import apply_theta1, build_T, theta1_matrix_image
from .report import Report, timer
from .rmatrix import cleared_rbar_pair, parity_sign
from .series import BiSeries, GeneratorMatrix, mismatch_detail, shift_bound
from .symcomb import SymbolCombination


class OnsagerElement(SymbolCombination):
    __slots__ = ()

    @staticmethod
    def symbol_str(sym) -> str:
        if sym[0] == "B0":
            return f"B[{sym[1]},{sym[2]}]^(0)"
        return f"B[{sym[1]},{sym[2]}]^({sym[3]})"


def zero(dim: int) -> OnsagerElement:
    return OnsagerElement(dim, {})


def _raw(sym):
    """Canonical symbol -> raw (i, j, n)."""
    if sym[0] == "B0":
        return sym[1], sym[2], 0
    return sym[1], sym[2], sym[3]


def canonicalize_B(dim: int, i: int, j: int, n: int) -> OnsagerElement:
    """Reduce a raw generator B_ij^(n) to canonical form."""
    if not (1 <= i <= dim and 1 <= j <= dim):
        raise ValueError(f"index out of range for N={dim}: ({i},{j})")
    out = zero(dim)
    _acc_raw(out, i, j, n, Fraction(1))
    return out


def _acc_raw(out: OnsagerElement, i: int, j: int, n: int, coeff) -> None:
    dim = out.dim
    if n < 0:
        # reflection: B_ij^(n) = (-1)^(i+j+1+nN) B_ji^(-n)
        _acc_raw(out, j, i, -n, coeff * parity_sign(i + j + 1 + n * dim))
        return
    if n == 0:
        if i == j:
            return  # B_ii^(0) = 0
        if i < j:
            out.add_term(("B0", i, j), coeff)
        else:
            out.add_term(("B0", j, i), coeff * parity_sign(i + j + 1))
        return
    if i == j == dim:
        for p in range(1, dim):
            out.add_term(("B", p, p, n), coeff * -1)
        return
    out.add_term(("B", i, j, n), coeff)


def unit(dim: int, i: int, j: int, n: int) -> OnsagerElement:
    return canonicalize_B(dim, i, j, n)


def onsager_basis(dim: int, max_level: int):
    """Canonical symbols with level <= max_level, deterministic order."""
    syms = []
    for i in range(1, dim + 1):
        for j in range(i + 1, dim + 1):
            syms.append(("B0", i, j))
    for n in range(1, max_level + 1):
        for i in range(1, dim + 1):
            for j in range(1, dim + 1):
                if i == j and i == dim:
                    continue
                syms.append(("B", i, j, n))
    return syms


def bracket_abstract(a: OnsagerElement, b: OnsagerElement) -> OnsagerElement:
    """Bilinear extension of the defining bracket, canonicalized."""
    if a.dim != b.dim:
        raise ValueError(f"rank mismatch: N={a.dim} vs N={b.dim}")
    dim = a.dim
    out = zero(dim)
    for sa, ca in a.coeffs.items():
        i, j, m = _raw(sa)
        sgn = parity_sign(i + j + 1 + m * dim)
        for sb, cb in b.coeffs.items():
            k, l, n = _raw(sb)
            c = ca * cb
            if j == k:
                _acc_raw(out, i, l, m + n, c)
            if i == l:
                _acc_raw(out, k, j, m + n, c * -1)
            if i == k:
                _acc_raw(out, j, l, n - m, c * sgn)
            if j == l:
                _acc_raw(out, k, i, n - m, c * -sgn)
    return out


def embed_symbol(dim: int, sym) -> la.LoopElement:
    i, j, n = _raw(sym)
    sgn = parity_sign(i + j + 1 + n * dim)
    return la.inject(dim, i, j, n) + la.inject(dim, j, i, -n).scale(sgn)


def embed(el: OnsagerElement) -> la.LoopElement:
    out = la.zero(el.dim)
    for sym, c in el.coeffs.items():
        out = out + embed_symbol(el.dim, sym).scale(c)
    return out


# -- presentation cross-checks -------------------------------------------------


def check_presentation_agreement(dim: int, levels: int) -> Report:
    """Abstract bracket vs loop-algebra bracket through the embedding."""
    report = Report("verify onsager", {"n": dim, "levels": levels})
    with timer(report):
        syms = onsager_basis(dim, levels)
        units = {s: OnsagerElement(dim, {s: la.ParamPoly.one()}) for s in syms}
        embeds = {s: embed(units[s]) for s in syms}
        bad = None
        for sa in syms:
            if bad:
                break
            for sb in syms:
                lhs = embed(bracket_abstract(units[sa], units[sb]))
                rhs = la.bracket(embeds[sa], embeds[sb])
                if not (lhs - rhs).is_zero():
                    bad = (
                        f"pair ({OnsagerElement.symbol_str(sa)}, "
                        f"{OnsagerElement.symbol_str(sb)}) residual {lhs - rhs}"
                    )
                    break
        report.add("embedding-oracle", bad is None, bad)
        bad = None
        for s in syms:
            im = embeds[s]
            if not (apply_theta1(im) - im).is_zero():
                bad = OnsagerElement.symbol_str(s)
                break
        report.add("theta1-fixed", bad is None, bad and f"embed({bad}) not fixed")
    return report


def _ui_theta(cond: bool) -> int:
    return 1 if cond else 0


def check_UI_relations(dim: int, levels: int) -> Report:
    """The original A/G-form relations, instantiated and checked abstractly."""
    report = Report("verify onsager-ui", {"n": dim, "levels": levels})
    with timer(report):
        rng = range(-levels, levels + 1)
        idx = [(i, j) for i in range(1, dim + 1) for j in range(1, dim + 1) if i != j]

        def A(i, j, n):
            return canonicalize_B(dim, i, j, n)

        def G(i, n):
            return canonicalize_B(dim, i, i, n) - canonicalize_B(dim, i + 1, i + 1, n)

        bad = None
        for (i, j) in idx:
            if bad:
                break
            for (k, l) in idx:
                if bad:
                    break
                for m in rng:
                    if bad:
                        break
                    for n in rng:
                        if m < n:
                            continue  # stated for m >= n; rest is antisymmetry
                        lhs = bracket_abstract(A(i, j, m), A(k, l, n))
                        rhs = zero(dim)
                        if j == k:
                            rhs = rhs + A(i, l, m + n)
                        if i == l:
                            rhs = rhs - A(k, j, m + n)
                        if i == k:
                            if _ui_theta(j < l):
                                rhs = rhs + A(j, l, n - m).scale(parity_sign(i + j + 1 + m * dim))
                            if _ui_theta(l < j):
                                rhs = rhs + A(l, j, m - n).scale(parity_sign(i + l + n * dim))
                        if j == l:
                            if _ui_theta(i < k):
                                rhs = rhs + A(i, k, m - n).scale(parity_sign(k + l + 1 + n * dim))
                            if _ui_theta(k < i):
                                rhs = rhs + A(k, i, n - m).scale(parity_sign(i + l + m * dim))
                        if i == k and j == l:
                            # telescoped sum of G_s^(m-n), s = i..j-1, either order
                            gsum = canonicalize_B(dim, i, i, m - n) - canonicalize_B(dim, j, j, m - n)
                            rhs = rhs + gsum.scale(parity_sign(i + j + 1 + n * dim))
                        if not (lhs - rhs).is_zero():
                            bad = f"[A[{i},{j}]^({m}), A[{k},{l}]^({n})] residual {lhs - rhs}"
                            break
        report.add("AA-relation", bad is None, bad)

        bad = None
        for gi in range(1, dim):
            if bad:
                break
            for (k, l) in idx:
                if bad:
                    break
                for m in rng:
                    if bad:
                        break
                    for n in rng:
                        lhs = bracket_abstract(G(gi, m), A(k, l, n))
                        w = (
                            (1 if gi == k else 0)
                            - (1 if k == gi + 1 else 0)
                            - (1 if l == gi else 0)
                            + (1 if l == gi + 1 else 0)
                        )
                        rhs = (A(k, l, m + n) - A(k, l, n - m).scale(parity_sign(m * dim))).scale(w)
                        if not (lhs - rhs).is_zero():
                            bad = f"[G[{gi}]^({m}), A[{k},{l}]^({n})] residual {lhs - rhs}"
                            break
        report.add("GA-relation", bad is None, bad)

        bad = None
        for gi in range(1, dim):
            for gj in range(1, dim):
                for m in rng:
                    for n in rng:
                        if not bracket_abstract(G(gi, m), G(gj, n)).is_zero():
                            bad = f"[G[{gi}]^({m}), G[{gj}]^({n})] nonzero"
                            break
        report.add("GG-commute", bad is None, bad)
    return report


def oan_generators(dim: int):
    gens = [canonicalize_B(dim, i, i + 1, 0) for i in range(1, dim)]
    gens.append(canonicalize_B(dim, 1, dim, -1))
    return gens


def check_OAn_presentation(dim: int) -> Report:
    """N-generator cyclic presentation under the standard identification."""
    if dim < 3:
        raise ValueError("the N-generator presentation check needs N >= 3")
    report = Report("verify onsager-oan", {"n": dim})
    with timer(report):
        gens = oan_generators(dim)
        bad = None
        for i in range(dim):
            for j in range(dim):
                if i == j:
                    continue
                adjacent = (abs(i - j) == 1) or (abs(i - j) == dim - 1)
                if adjacent:
                    resid = bracket_abstract(gens[i], bracket_abstract(gens[i], gens[j])) - gens[j]
                    label = f"[[e{i+1},[e{i+1},e{j+1}]] - e{j+1}"
                else:
                    resid = bracket_abstract(gens[i], gens[j])
                    label = f"[e{i+1},e{j+1}]"
                if not resid.is_zero():
                    bad = f"{label} residual {resid}"
                    break
            if bad:
                break
        report.add("n-generator-presentation", bad is None, bad)
    return report


# -- the generating matrix B(x) and its relations ------------------------------


def build_B_matrix(dim: int, cutoff: int) -> GeneratorMatrix:
    """B(x): entry (i, j) holds 2 B_ji^(n) per exponent, constants above
    the diagonal only."""
    if cutoff < 1:
        raise ValueError("need D >= 1")
    out = GeneratorMatrix(dim, cutoff)
    m0 = [[zero(dim) for _ in range(dim)] for _ in range(dim)]
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            if i < j:
                m0[i - 1][j - 1] = canonicalize_B(dim, j, i, 0).scale(2)
    out.coeffs[0] = m0
    for n in range(1, cutoff + 1):
        mat = [[canonicalize_B(dim, j, i, n).scale(2) for j in range(1, dim + 1)]
               for i in range(1, dim + 1)]
        out.coeffs[n] = mat
    return out


def check_Bxg(dim: int, cutoff: int) -> Report:
    """embed(B(x)) == T+(x) + theta1(T+(x)), the latter in matrix form."""
    report = Report("verify onsager-bxg", {"n": dim, "cutoff": cutoff})
    with timer(report):
        lhs = build_B_matrix(dim, cutoff).map_entries(embed)
        rhs = build_T(1, dim, cutoff) + theta1_matrix_image(build_T(-1, dim, cutoff))
        mism = lhs.first_mismatch(rhs, (0, cutoff))
        detail = None
        if mism:
            e, i, j, a, b = mism
            detail = f"exponent {e} entry ({i},{j}): {a} vs {b}"
        report.add("frt-form-of-B", mism is None, detail)
    return report


def reflection_mismatch(dim: int, cutoff: int, r12=None, r21=None):
    """Window mismatch of the reflection relation for B(x), or None."""
    clearing, r12c, r21c = cleared_rbar_pair(dim)
    if r12 is not None:
        r12c = r12
    if r21 is not None:
        r21c = r21
    b = build_B_matrix(dim, cutoff)
    multipliers = [clearing] + list(r12c.values()) + list(r21c.values())
    window = cutoff - shift_bound(multipliers, ("x", "y"))
    if window < 0:
        raise ValueError("cutoff too small: empty comparison window")
    lhs = BiSeries.bracket_cross(b, b, bracket_abstract).convolve(clearing, "x", "y")
    b1 = BiSeries.from_leg(b, 1, 0)
    b2 = BiSeries.from_leg(b, 2, 1)
    # [r21, B1] = -[B1, r21];  [B2, r12]
    rhs = (-b1.commutator_scalar(r21c, "x", "y")) + b2.commutator_scalar(r12c, "x", "y")
    return lhs.first_mismatch(rhs, window), window


def check_reflection(dim: int, cutoff: int) -> Report:
    report = Report("verify reflection", {"n": dim, "cutoff": cutoff})
    with timer(report):
        mism, window = reflection_mismatch(dim, cutoff)
        detail = None if mism is None else mismatch_detail(mism)
        report.add(f"reflection [window {window}]", mism is None, detail)
        # tr_1 B(x) = 0 holds structurally through the trace reduction
        b = build_B_matrix(dim, cutoff)
        bad = None
        for e, m in b.coeffs.items():
            tr = zero(dim)
            for i in range(dim):
                tr = tr + m[i][i]
            if not tr.is_zero():
                bad = f"exponent {e}: trace {tr}"
                break
        report.add("tracelessness", bad is None, bad)
    return report


# -- the current presentation ---------------------------------------------------


def _H(k: int) -> Fraction:
    if k > 0:
        return Fraction(1)
    if k == 0:
        return Fraction(1, 2)
    return Fraction(0)


def current_modes(dim: int, i: int, j: int, cutoff: int) -> dict:
    """Modes of the current 2 sum x^n B_ij^(n); constant only for i > j."""
    start = 0 if i > j else 1
    return {n: canonicalize_B(dim, i, j, n).scale(2) for n in range(start, cutoff + 1)}


def _series_convolve(series: dict, slot: int, scal: SpectralLaurent, out: dict) -> None:
    """Accumulate series (in slot 0=x, 1=y) times a scalar (x,y)-polynomial."""
    from .series import laurent_xy_terms

    for ex, ey, coeff in laurent_xy_terms(scal, "x", "y"):
        for n, elem in series.items():
            key = (n + ex, ey) if slot == 0 else (ex, n + ey)
            cur = out.get(key)
            v = elem.scale(coeff)
            s = v if cur is None else cur + v
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s


def currents_mismatch(dim: int, cutoff: int):
    """Check every current exchange relation; returns (mismatch, window)."""
    from .series import laurent_xy_terms

    sigma = parity_sign(dim)
    x = SpectralLaurent.variable("x")
    y = SpectralLaurent.variable("y")
    dxy = x - y
    dprod = x * y - SpectralLaurent.const(sigma)
    clearing = dxy * dprod
    # the cleared kernels have the same per-variable degree as the clearing
    window = cutoff - shift_bound([clearing], ("x", "y"))
    cur = {
        (i, j): current_modes(dim, i, j, cutoff)
        for i in range(1, dim + 1)
        for j in range(1, dim + 1)
    }
    for (i, j) in sorted(cur):
        for (k, l) in sorted(cur):
            lhs: dict = {}
            for a, ea in cur[(i, j)].items():
                for b, eb in cur[(k, l)].items():
                    br = bracket_abstract(ea, eb)
                    if not br.is_zero():
                        key = (a, b)
                        curv = lhs.get(key)
                        lhs[key] = br if curv is None else curv + br
            lhs_c: dict = {}
            for ex, ey, coeff in laurent_xy_terms(clearing, "x", "y"):
                for (a, b), elem in lhs.items():
                    key = (a + ex, b + ey)
                    v = elem.scale(coeff)
                    curv = lhs_c.get(key)
                    s = v if curv is None else curv + v
                    if s.is_zero():
                        lhs_c.pop(key, None)
                    else:
                        lhs_c[key] = s

            rhs: dict = {}
            wx = x * _H(k - l) + y * _H(l - k)
            wy = y * _H(i - j) + x * _H(j - i)
            if j == k:
                _series_convolve(cur[(i, l)], 0, dprod * wx * 2, rhs)
                _series_convolve(cur[(i, l)], 1, dprod * wy * -2, rhs)
            if i == l:
                _series_convolve(cur[(k, j)], 0, dprod * wx * -2, rhs)
                _series_convolve(cur[(k, j)], 1, dprod * wy * 2, rhs)
            ux = (x * y * _H(l - k) + SpectralLaurent.const(sigma * _H(k - l))) * parity_sign(k + l)
            uy = (x * y * _H(j - i) + SpectralLaurent.const(sigma * _H(i - j))) * parity_sign(i + j)
            if i == k:
                _series_convolve(cur[(l, j)], 0, dxy * ux * -2, rhs)
                _series_convolve(cur[(j, l)], 1, dxy * uy * 2, rhs)
            if j == l:
                _series_convolve(cur[(i, k)], 0, dxy * ux * 2, rhs)
                _series_convolve(cur[(k, i)], 1, dxy * uy * -2, rhs)

            keys = set(lhs_c) | set(rhs)
            bad = []
            for (a, b) in keys:
                if max(abs(a), abs(b)) > window or min(a, b) < 0:
                    continue
                ea = lhs_c.get((a, b))
                eb = rhs.get((a, b))
                diff = ea if eb is None else (eb if ea is None else ea - eb)
                if diff is not None and not diff.is_zero():
                    bad.append((a, b, diff))
            if bad:
                a, b, diff = min(bad, key=lambda t: (t[0], t[1]))
                return ((i, j, k, l), a, b, diff), window
    return None, window


def check_currents(dim: int, cutoff: int) -> Report:
    report = Report("verify currents", {"n": dim, "cutoff": cutoff})
    with timer(report):
        mism, window = currents_mismatch(dim, cutoff)
        detail = None
        if mism is not None:
            pair, a, b, diff = mism
            detail = f"currents {pair} monomial x^{a} y^{b} residual {diff}"
        report.add(f"current-relations [window {window}]", mism is None, detail)
    return report
