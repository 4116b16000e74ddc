"""Generating matrices T+-(x), their exchange relations, and the two
involutive automorphisms of the Yang-Baxter presentation.

All relation checks run on truncated series: both sides of a relation are
multiplied by the minimal clearing polynomial and compared coefficient by
coefficient inside the contamination-free window |a|, |b| <= D - s, where
s is the computed per-variable shift bound of the multipliers.
"""

from __future__ import annotations

from fractions import Fraction

from . import loop_algebra as la
from .exactnum import ParamPoly, SpectralLaurent
from .report import Report, timer
from .rmatrix import TensorOperator, build_r, build_r_single, parity_sign, u_signs
from .series import BiSeries, GeneratorMatrix, mismatch_detail, shift_bound


def build_T(sign: int, dim: int, cutoff: int) -> GeneratorMatrix:
    """T+(x) for sign=+1 (exponents 0..D), T-(x) for sign=-1 (-D..0).

    The exponent-0 part of T+ is upper triangular with e_ii on the diagonal,
    of T- lower triangular with -e_ii; level-n parts are 2 e_ji^(n) at (i, j).
    """
    if dim < 2 or cutoff < 1:
        raise ValueError("need N >= 2 and D >= 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    out = GeneratorMatrix(dim, cutoff)
    z = [[la.zero(dim) for _ in range(dim)] for _ in range(dim)]
    m0 = [list(row) for row in z]
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            if i == j:
                m0[i - 1][j - 1] = la.inject(dim, i, i, 0).scale(sign)
            elif (i < j) == (sign == 1) and i != j:
                m0[i - 1][j - 1] = la.inject(dim, j, i, 0).scale(2 * sign)
    out.coeffs[0] = m0
    for n in range(1, cutoff + 1):
        lev = sign * n
        mat = [list(row) for row in z]
        for i in range(1, dim + 1):
            for j in range(1, dim + 1):
                mat[i - 1][j - 1] = la.inject(dim, j, i, lev).scale(2 * sign)
        out.coeffs[lev] = mat
    return out


# -- automorphism actions on generators ---------------------------------------


def apply_theta1(el: la.LoopElement) -> la.LoopElement:
    """theta1: e_ij^(n) -> (-1)^(Nn+i+j+1) e_ji^(-n), c -> -c.

    Cartan symbols go through their diagonal expansion and are re-injected.
    """
    dim = el.dim
    out = la.zero(dim)
    for sym, coeff in el.coeffs.items():
        if sym == la.CENTRAL:
            out.add_term(la.CENTRAL, -coeff)
            continue
        for i, j, n, f in la._as_e_terms(dim, sym):
            sgn = parity_sign(dim * n + i + j + 1)
            la._add_e(out, j, i, -n, coeff * (f * sgn))
    return out


def _half_index(i: int, dim: int) -> int:
    h = dim // 2
    return i + h if i <= h else i - h


def apply_theta2(el: la.LoopElement, eps) -> la.LoopElement:
    """theta2 (N even): block-swapping involution with a central shift.

    eps may be +1, -1, or the symbolic involutive parameter.
    """
    dim = el.dim
    if dim % 2:
        raise ValueError("theta2 requires even N")
    h = dim // 2
    out = la.zero(dim)
    for sym, coeff in el.coeffs.items():
        if sym == la.CENTRAL:
            out.add_term(la.CENTRAL, -coeff)
            continue
        for i, j, n, f in la._as_e_terms(dim, sym):
            c = coeff * f
            ib, jb = _half_index(i, dim), _half_index(j, dim)
            if (i <= h) == (j <= h):
                la._add_e(out, jb, ib, -n, -c)
                if i == j and n == 0:
                    alpha_bar = 1 if i <= h else -1
                    out.add_term(la.CENTRAL, c * Fraction(alpha_bar, 2))
            elif i <= h:
                la._add_e(out, jb, ib, -n + 1, -(c * eps))
            else:
                la._add_e(out, jb, ib, -n - 1, -(c * eps))
    return out


def eps_symbol() -> ParamPoly:
    return ParamPoly.variable("eps")


def _theta_fn(which: str, eps=None):
    if which == "theta1":
        return apply_theta1
    if which == "theta2":
        e = eps if eps is not None else eps_symbol()
        return lambda el: apply_theta2(el, e)
    raise ValueError(f"unknown automorphism {which!r}")


def check_automorphism(which: str, dim: int, levels: int, eps=None) -> Report:
    """Involution and bracket-morphism checks over all basis pairs."""
    report = Report(
        "verify automorphism",
        {"which": which, "n": dim, "levels": levels, "epsilon": _eps_label(eps)},
    )
    with timer(report):
        theta = _theta_fn(which, eps)
        syms = la.basis_symbols(dim, levels)
        bad = None
        for s in syms:
            u = la.unit(dim, s)
            if not (theta(theta(u)) - u).is_zero():
                bad = la.LoopElement.symbol_str(s)
                break
        report.add("involution", bad is None, bad and f"theta^2 != id at {bad}")
        bad = None
        for sa in syms:
            if bad:
                break
            ua = la.unit(dim, sa)
            ta = theta(ua)
            for sb in syms:
                ub = la.unit(dim, sb)
                lhs = theta(la.bracket(ua, ub))
                rhs = la.bracket(ta, theta(ub))
                if not (lhs - rhs).is_zero():
                    bad = (
                        f"pair ({la.LoopElement.symbol_str(sa)}, "
                        f"{la.LoopElement.symbol_str(sb)}) residual {lhs - rhs}"
                    )
                    break
        report.add("bracket-morphism", bad is None, bad)
    return report


def _eps_label(eps) -> str:
    if eps is None:
        return "sym"
    return f"{eps:+d}" if isinstance(eps, int) else str(eps)


# -- matrix forms of the automorphisms ----------------------------------------


def theta1_matrix_image(t_opposite: GeneratorMatrix) -> GeneratorMatrix:
    """U T_opp((-1)^N / x)^t U from the opposite-sign generator matrix."""
    dim = t_opposite.dim
    sigma = parity_sign(dim)
    sub = t_opposite.shift_scale(
        lambda e: -e, lambda e: Fraction(sigma) ** (e % 2)
    )
    sub = sub.transpose()
    signs = u_signs(dim)
    out = {}
    for e, m in sub.coeffs.items():
        out[e] = [
            [m[i][j].scale(signs[i] * signs[j]) for j in range(dim)]
            for i in range(dim)
        ]
    return GeneratorMatrix(dim, t_opposite.cutoff, out)


def _smat_mul(a: dict, b: dict, dim: int) -> dict:
    """Product of scalar s-exponent series matrices {exp -> NxN ParamPoly}."""
    out: dict = {}
    for ea, ma in a.items():
        for eb, mb in b.items():
            e = ea + eb
            tgt = out.setdefault(e, [[ParamPoly.zero() for _ in range(dim)] for _ in range(dim)])
            for i in range(dim):
                row = ma[i]
                for k in range(dim):
                    c = row[k]
                    if c.is_zero():
                        continue
                    for j in range(dim):
                        w = mb[k][j]
                        if not w.is_zero():
                            tgt[i][j] = tgt[i][j] + c * w
    return out


def _smat_on_gm(s: dict, g: GeneratorMatrix, side: str) -> GeneratorMatrix:
    dim = g.dim
    out = GeneratorMatrix(dim, g.cutoff)
    for es, ms in s.items():
        for eg, mg in g.coeffs.items():
            e = es + eg
            tgt = out.coeffs.setdefault(
                e, [[la.zero(dim) for _ in range(dim)] for _ in range(dim)]
            )
            for i in range(dim):
                for j in range(dim):
                    for k in range(dim):
                        if side == "left":
                            c = ms[i][k]
                            v = mg[k][j]
                        else:
                            c = ms[k][j]
                            v = mg[i][k]
                        if not c.is_zero() and not v.is_zero():
                            tgt[i][j] = tgt[i][j] + v.scale(c)
    # drop all-zero exponent slices for cleanliness
    for e in [e for e, m in out.coeffs.items() if all(v.is_zero() for r in m for v in r)]:
        del out.coeffs[e]
    return out


def _v_matrices(dim: int, eps) -> tuple:
    """V(x), V(x)^-1 and x V'(x) V(x)^-1 on the doubled lattice s^2 = x."""
    h = dim // 2
    epsp = eps if isinstance(eps, ParamPoly) else ParamPoly.const(eps)
    zero = ParamPoly.zero()

    def blank():
        return [[zero for _ in range(dim)] for _ in range(dim)]

    v_lo, v_hi = blank(), blank()
    for j in range(1, h + 1):
        v_lo[j - 1][h + j - 1] = ParamPoly.one()       # (1/sqrt x) E_{j, h+j}
        v_hi[h + j - 1][j - 1] = epsp                  # eps sqrt(x) E_{h+j, j}
    v = {-1: v_lo, 1: v_hi}
    # V^2 = eps * Id, so V^-1 = eps * V
    vinv = {
        e: [[c * epsp for c in row] for row in m] for e, m in v.items()
    }
    # derivative in x on the s-lattice: s^e -> (e/2) s^(e-2); times x = s^2 is +2
    xvp = {
        e: [[c * Fraction(e, 2) for c in row] for row in m]
        for e, m in v.items()
    }
    xvp_vinv = _smat_mul(xvp, vinv, dim)
    return v, vinv, xvp_vinv


def theta2_matrix_image(t_opposite: GeneratorMatrix, sign: int, eps) -> GeneratorMatrix:
    """V(x) T_opp(1/x)^t V(x)^-1 -+ c x V'(x) V(x)^-1, on the s-lattice.

    ``sign`` is the sign of the generator matrix being mapped (+1 for T+).
    Returns an x-exponent GeneratorMatrix; raises if any odd s-exponent
    survives (it never does: the two V factors always shift by +-2 or 0).
    """
    dim = t_opposite.dim
    # T_opp(1/x): exponent e -> -e in x, i.e. -2e on the s-lattice
    sub = t_opposite.shift_scale(lambda e: -2 * e).transpose()
    v, vinv, xvp_vinv = _v_matrices(dim, eps)
    img = _smat_on_gm(v, sub, "left")
    img = _smat_on_gm(vinv, img, "right")
    cterm = GeneratorMatrix(dim, t_opposite.cutoff)
    for e, m in xvp_vinv.items():
        cterm.coeffs[e] = [
            [la.central(dim, c).scale(-sign) if not c.is_zero() else la.zero(dim) for c in row]
            for row in m
        ]
    img = img + cterm
    out = GeneratorMatrix(dim, t_opposite.cutoff)
    for e, m in img.coeffs.items():
        if all(v.is_zero() for row in m for v in row):
            continue
        if e % 2:
            raise AssertionError(f"odd half-integer exponent {e}/2 survived")
        out.coeffs[e // 2] = m
    return out


def check_theta_matrix_form(which: str, dim: int, cutoff: int, eps=None) -> Report:
    """Matrix form of the automorphism agrees with its generator action."""
    report = Report(
        "verify automorphism-matrix",
        {"which": which, "n": dim, "cutoff": cutoff, "epsilon": _eps_label(eps)},
    )
    with timer(report):
        for sign, name in ((1, "T+"), (-1, "T-")):
            t = build_T(sign, dim, cutoff)
            t_opp = build_T(-sign, dim, cutoff)
            if which == "theta1":
                image = theta1_matrix_image(t_opp)
                gen = t.map_entries(apply_theta1)
                window = (-cutoff, cutoff)
            else:
                e = eps if eps is not None else eps_symbol()
                image = theta2_matrix_image(t_opp, sign, e)
                gen = t.map_entries(lambda v: apply_theta2(v, e))
                window = (-(cutoff - 1), cutoff - 1)
            mism = image.first_mismatch(gen, window)
            detail = None
            if mism:
                ex, i, j, lft, rgt = mism
                detail = f"exponent {ex} entry ({i},{j}): matrix {lft} vs generator {rgt}"
            report.add(f"{which}-matrix-form-{name}", mism is None, detail)
    return report


# -- the exchange relations ---------------------------------------------------


def _cleared_r(dim: int, clearing: SpectralLaurent) -> dict:
    return build_r(dim, "x", "y").cleared(clearing)


def _r_prime_term(dim: int) -> TensorOperator:
    """-2 r'(x/y) (x/y) as a tensor operator (the c-coefficient in the
    mixed relation); derivative taken in the single-variable realization."""
    rp = build_r_single(dim, "_z").derivative("_z")
    rp = rp.substitute("_z", 1, {"x": 1, "y": -1})
    xy = SpectralLaurent.monomial(1, {"x": 1, "y": -1})
    return rp.scale(xy * -2)


def frt_relation_mismatch(dim: int, cutoff: int, sign_a: int, sign_b: int,
                          include_central: bool = True):
    """Window mismatch of one exchange relation, or None.

    sign_a == sign_b checks the like-sign relation; the mixed relation
    includes the central derivative term unless disabled (negative control).
    """
    ta = build_T(sign_a, dim, cutoff)
    tb = build_T(sign_b, dim, cutoff)
    x = SpectralLaurent.variable("x")
    y = SpectralLaurent.variable("y")
    mixed = sign_a != sign_b
    clearing = (y - x) * (y - x) if mixed else (y - x)
    r_clear = _cleared_r(dim, clearing)
    multipliers = [clearing] + list(r_clear.values())
    central_bis = None
    if mixed:
        cterm = _r_prime_term(dim)
        c_clear = cterm.cleared(clearing)
        multipliers += list(c_clear.values())
        if include_central:
            central_bis = BiSeries.from_scalar(
                dim, c_clear, "x", "y", la.central(dim)
            )
    window = cutoff - shift_bound(multipliers, ("x", "y"))
    if window < 0:
        raise ValueError("cutoff too small: empty comparison window")
    lhs = BiSeries.bracket_cross(ta, tb, la.bracket).convolve(clearing, "x", "y")
    tsum = BiSeries.from_leg(ta, 1, 0) + BiSeries.from_leg(tb, 2, 1)
    rhs = tsum.commutator_scalar(r_clear, "x", "y")
    if central_bis is not None:
        rhs = rhs + central_bis
    return lhs.first_mismatch(rhs, window), window


def check_frt(dim: int, cutoff: int) -> Report:
    """All exchange relations at the given truncation."""
    report = Report("verify frt", {"n": dim, "cutoff": cutoff})
    with timer(report):
        for sa, sb, name in ((1, 1, "like-sign (+,+)"), (-1, -1, "like-sign (-,-)"),
                             (1, -1, "mixed-sign with central term")):
            mism, window = frt_relation_mismatch(dim, cutoff, sa, sb)
            detail = None if mism is None else mismatch_detail(mism)
            report.add(f"exchange {name} [window {window}]", mism is None, detail)
        # centrality: bracket of every entry with c vanishes
        bad = None
        cel = la.central(dim)
        for sign in (1, -1):
            t = build_T(sign, dim, cutoff)
            for e, m in t.coeffs.items():
                for row in m:
                    for v in row:
                        if not la.bracket(v, cel).is_zero():
                            bad = f"exponent {e}"
                            break
        report.add("centrality", bad is None, bad)
        # tracelessness is structural: diagonal sums canonicalize to zero
        bad = None
        for sign in (1, -1):
            t = build_T(sign, dim, cutoff)
            for e, m in t.coeffs.items():
                tr = la.zero(dim)
                for i in range(dim):
                    tr = tr + m[i][i]
                if not tr.is_zero():
                    bad = f"sign {sign:+d} exponent {e}: trace {tr}"
                    break
        report.add("tracelessness", bad is None, bad)
    return report
