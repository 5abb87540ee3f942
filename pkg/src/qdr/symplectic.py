"""Symplectic linear algebra and the deformed Lefschetz operator family.

Conventions pinned here and used everywhere else:

  w = matrix inverse of the symplectic matrix (standard block gives
  w^{12} = -1); contraction by w inserts e_i then e_j into the first two
  slots and sums over i < j; the star operator solves b ^ *a =
  lambda(w)(b, a) v_w exactly and flips the sign of every h exponent;
  the deformed adjoint is L_h* = -(* L_h *).
"""

from __future__ import annotations

from fractions import Fraction

from .blades import Blade, blade_degree, indices_of_mask, masks_of_degree, \
    wedge_masks
from .exterior import Bivector, QForm, insert_first, quantum_wedge, wedge
from .linalg import (
    CharPolynomial,
    char_poly as _char_poly_rows,
    det_field,
    mat_inv,
    poly_det,
)
from .scalars import HPoly, as_fraction


class SymplecticForm:
    """A nondegenerate antisymmetric matrix and its derived structures."""

    def __init__(self, dim: int, rows=None):
        if dim % 2:
            raise ValueError("symplectic form needs even dimension")
        self.dim = dim
        self.n = dim // 2
        if rows is None:
            rows = [[Fraction(0)] * dim for _ in range(dim)]
            for a in range(self.n):
                rows[2 * a][2 * a + 1] = Fraction(1)
                rows[2 * a + 1][2 * a] = Fraction(-1)
        else:
            rows = [[as_fraction(x) for x in row] for row in rows]
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise ValueError("matrix shape mismatch")
        for i in range(dim):
            for j in range(dim):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError("matrix is not antisymmetric")
        self.matrix = rows
        inv = mat_inv(rows)  # raises on singular input
        self._winv = inv
        self._bivector = None
        self._volume = None

    @staticmethod
    def standard(dim: int) -> "SymplecticForm":
        return SymplecticForm(dim)

    @property
    def form(self) -> QForm:
        terms = {}
        for i in range(1, self.dim + 1):
            for j in range(i + 1, self.dim + 1):
                c = self.matrix[i - 1][j - 1]
                if c:
                    terms[(i, j)] = c
        return QForm(self.dim, terms)

    @property
    def bivector(self) -> Bivector:
        if self._bivector is None:
            self._bivector = bivector_of(self)
        return self._bivector

    @property
    def volume(self) -> QForm:
        """The normalized volume form: n-th wedge power over n factorial."""
        if self._volume is None:
            out = QForm.scalar(self.dim, 1)
            fact = 1
            for k in range(1, self.n + 1):
                out = wedge(out, self.form)
                fact *= k
            self._volume = out / fact
        return self._volume

    @property
    def volume_coeff(self) -> Fraction:
        top = (1 << self.dim) - 1
        return self.volume.coeff(top).constant()


def _coerce_symplectic(omega, dim=None) -> SymplecticForm:
    if isinstance(omega, SymplecticForm):
        return omega
    if omega is None:
        if dim is None:
            raise ValueError("no dimension to build a standard form from")
        return SymplecticForm(dim)
    return SymplecticForm(len(omega), omega)


def bivector_of(omega: SymplecticForm) -> Bivector:
    """The inverse-matrix pairing: w^{ij} ω_{jk} = δ^i_k."""
    omega = _coerce_symplectic(omega)
    inv = mat_inv(omega.matrix)
    entries = {}
    for i in range(omega.dim):
        for j in range(i + 1, omega.dim):
            if inv[i][j]:
                entries[(i + 1, j + 1)] = inv[i][j]
    return Bivector(omega.dim, entries)


def sharp(omega: SymplecticForm, phi) -> dict:
    """Raise a 1-form to a vector: sharp(e^k) = w^{lk} e_l."""
    omega = _coerce_symplectic(omega)
    if isinstance(phi, QForm):
        comps = {}
        for m, c in phi.terms.items():
            if blade_degree(m) != 1:
                raise ValueError("sharp needs a 1-form")
            comps[indices_of_mask(m)[0]] = c.constant()
    else:
        comps = dict(phi)
    w = omega.bivector
    out = {}
    for k, ck in comps.items():
        if not ck:
            continue
        for l in range(1, omega.dim + 1):
            c = w.entry(l, k) * ck
            if c:
                out[l] = out.get(l, Fraction(0)) + c
    return {l: c for l, c in out.items() if c}


def flat(omega: SymplecticForm, v) -> QForm:
    """Lower a vector to a 1-form; inverse of sharp."""
    omega = _coerce_symplectic(omega)
    comps = dict(v) if isinstance(v, dict) else {
        i: c for i, c in enumerate(v, start=1) if c}
    out = {}
    for j, cj in comps.items():
        if not cj:
            continue
        for i in range(1, omega.dim + 1):
            c = omega.matrix[i - 1][j - 1] * cj
            if c:
                out[(i,)] = out.get((i,), Fraction(0)) + c
    return QForm(omega.dim, out)


def contract_bivector(w: Bivector, form: QForm) -> QForm:
    """Insert the pairing into the first two slots: i < j, e_i then e_j."""
    if w.dim != form.dim:
        raise ValueError("dimension mismatch")
    out = QForm.zero(form.dim, laurent=form.laurent)
    for i, j, c in w.upper_entries():
        out = out + c * insert_first(j, insert_first(i, form))
    return out


def lambda_pairing(w: Bivector, amask: int, bmask: int) -> Fraction:
    """The degree-k extension of the pairing: det [w(a_u, b_v)]."""
    ai = indices_of_mask(amask)
    bi = indices_of_mask(bmask)
    if len(ai) != len(bi):
        raise ValueError("pairing needs equal degrees")
    if not ai:
        return Fraction(1)
    rows = [[w.entry(a, b) for b in bi] for a in ai]
    return det_field(rows)


def symplectic_star(form: QForm, omega=None) -> QForm:
    """The star solving b ^ *a = lambda(w)(b, a) v_w, with *h = h^{-1}."""
    omega = _coerce_symplectic(omega, form.dim)
    w = omega.bivector
    vol = omega.volume_coeff
    top = (1 << omega.dim) - 1
    out = {}
    for m, c in form.terms.items():
        flipped = HPoly({-e: q for e, q in c.terms.items()}, laurent=True)
        k = blade_degree(m)
        for amask in masks_of_degree(omega.dim, k):
            val = lambda_pairing(w, amask, m)
            if not val:
                continue
            cm = (top ^ amask)
            s, _ = wedge_masks(amask, cm)
            coeff = flipped * (val * vol / s)
            prev = out.get(cm)
            out[cm] = coeff if prev is None else prev + coeff
    return QForm(form.dim, {m: c for m, c in out.items() if c}, laurent=True)


def apply_L(form: QForm, omega=None) -> QForm:
    omega = _coerce_symplectic(omega, form.dim)
    return wedge(omega.form, form)


def _require_homogeneous(form: QForm) -> int:
    degs = form.blade_degrees()
    if len(degs) > 1:
        raise ValueError("operator needs a blade-homogeneous form")
    return degs[0] if degs else 0


def apply_K(form: QForm, omega=None) -> QForm:
    """Degree counting operator, realized as sum of e^j ^ (e_j insertion)."""
    _require_homogeneous(form)
    out = QForm.zero(form.dim, laurent=form.laurent)
    for j in range(1, form.dim + 1):
        out = out + wedge(QForm.one_form(form.dim, j),
                          insert_first(j, form))
    return out


def apply_Lstar(form: QForm, omega=None) -> QForm:
    omega = _coerce_symplectic(omega, form.dim)
    return contract_bivector(omega.bivector, form)


def apply_A(form: QForm, omega=None) -> QForm:
    omega = _coerce_symplectic(omega, form.dim)
    k = _require_homogeneous(form)
    return form * (omega.n - k)


def _apply_A_graded(form: QForm, omega: SymplecticForm) -> QForm:
    # linear extension of A across blade degrees, for operator composition
    out = QForm.zero(form.dim, laurent=form.laurent)
    for k in form.blade_degrees():
        out = out + form.grade(k) * (omega.n - k)
    return out


def apply_Lh(form: QForm, omega=None) -> QForm:
    omega = _coerce_symplectic(omega, form.dim)
    return quantum_wedge(omega.form, form, omega.bivector)


def apply_Lhstar(form: QForm, omega=None) -> QForm:
    omega = _coerce_symplectic(omega, form.dim)
    return -symplectic_star(apply_Lh(symplectic_star(form, omega), omega),
                            omega)


def apply_Ah(form: QForm, omega=None) -> QForm:
    """Counting operator on total degree: (n - deg - 2j) per h^j blade."""
    omega = _coerce_symplectic(omega, form.dim)
    out = {}
    for m, c in form.terms.items():
        k = blade_degree(m)
        acc = HPoly(laurent=True)
        for e, q in c.terms.items():
            acc = acc + HPoly({e: q * (omega.n - k - 2 * e)}, laurent=True)
        if acc:
            out[m] = acc
    return QForm(form.dim, out, laurent=True)


def kstar_op(form: QForm, omega=None) -> QForm:
    """K* := -(* K *)."""
    omega = _coerce_symplectic(omega, form.dim)
    return -symplectic_star(apply_K(symplectic_star(form, omega)), omega)


def _solve_small(columns, rhs):
    """Solve sum_j x_j columns[j] = rhs exactly; None if inconsistent."""
    ncols = len(columns)
    rows = len(rhs)
    aug = [[columns[j][i] for j in range(ncols)] + [rhs[i]]
           for i in range(rows)]
    piv_cols = []
    r = 0
    for c in range(ncols):
        piv = None
        for rr in range(r, rows):
            if aug[rr][c]:
                piv = rr
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for rr in range(rows):
            if rr != r and aug[rr][c]:
                f = aug[rr][c]
                aug[rr] = [x - f * y for x, y in zip(aug[rr], aug[r])]
        piv_cols.append(c)
        r += 1
    for rr in range(r, rows):
        if aug[rr][ncols]:
            return None
    sol = [Fraction(0)] * ncols
    for idx, c in enumerate(piv_cols):
        sol[c] = aug[idx][ncols]
    return sol


def decomposition_report(n: int):
    """Constants (c0, c1, c2) with L_h = c0 L + c1 h K + c2 h^2 (w-insertion).

    Solved over the full blade basis; raises if no constant solution fits.
    """
    omega = SymplecticForm(2 * n)
    cols = [[], [], []]
    rhs = []
    for mask in range(1 << omega.dim):
        base = QForm(omega.dim, {mask: 1})
        lh = apply_Lh(base, omega)
        l0 = apply_L(base, omega)
        kk = apply_K(base, omega).h_shift(1)
        iw = apply_Lstar(base, omega).h_shift(2)
        keys = set()
        for f in (lh, l0, kk, iw):
            for m, c in f.terms.items():
                keys.update((m, e) for e in c.terms)
        for key in sorted(keys):
            m, e = key
            cols[0].append(l0.coeff(m).coeff(e))
            cols[1].append(kk.coeff(m).coeff(e))
            cols[2].append(iw.coeff(m).coeff(e))
            rhs.append(lh.coeff(m).coeff(e))
    sol = _solve_small(cols, rhs)
    if sol is None:
        raise AssertionError("no constant decomposition exists")
    return tuple(sol)


def relation_report(n: int):
    """Constants (a, b) with L_h* = a h^-2 L_h + b h^-1 Id on the basis."""
    omega = SymplecticForm(2 * n)
    cols = [[], []]
    rhs = []
    for mask in range(1 << omega.dim):
        base = QForm(omega.dim, {mask: 1})
        lhs = apply_Lhstar(base, omega)
        t1 = apply_Lh(base, omega).h_shift(-2)
        t2 = base.h_shift(-1)
        keys = set()
        for f in (lhs, t1, t2):
            for m, c in f.terms.items():
                keys.update((m, e) for e in c.terms)
        for key in sorted(keys):
            m, e = key
            cols[0].append(t1.coeff(m).coeff(e))
            cols[1].append(t2.coeff(m).coeff(e))
            rhs.append(lhs.coeff(m).coeff(e))
    sol = _solve_small(cols, rhs)
    if sol is None:
        raise AssertionError("no affine relation exists")
    return tuple(sol)


def family_ops(n: int, sign: int = -1, p=None, q=None, r=0):
    """The deformed operator family: X + (sign) h H + h^2 Y + p h, etc.

    X, Y, H are realized as L, the w-insertion, and A. Returns the three
    operators as callables after verifying the bracket relations
    [F, A_r] = 2F, [F*, A_r] = -2F*, [F, F*] = 0 on a graded basis, and
    the ladder relations [D, h^{+-1}] = +-2 h^{+-1} for the degree
    operator D = -A_h.
    """
    omega = SymplecticForm(2 * n)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    p = as_fraction(n if p is None else p)
    q = as_fraction(-n if q is None else q)
    r = as_fraction(r)

    def fam_L(form: QForm) -> QForm:
        return (apply_L(form, omega)
                + sign * _apply_A_graded(form, omega).h_shift(1)
                + apply_Lstar(form, omega).h_shift(2)
                + p * form.h_shift(1))

    def fam_Lstar(form: QForm) -> QForm:
        return (apply_Lstar(form, omega)
                + sign * _apply_A_graded(form, omega).h_shift(-1)
                + apply_L(form, omega).h_shift(-2)
                + q * form.h_shift(-1))

    def fam_A(form: QForm) -> QForm:
        return apply_Ah(form, omega) + r * form

    def commutator(f, g, form):
        return f(g(form)) - g(f(form))

    for mask in range(1 << omega.dim):
        for j in (-1, 0, 1):
            base = QForm(omega.dim, {mask: HPoly({j: 1}, laurent=True)},
                         laurent=True)
            if commutator(fam_L, fam_A, base) != 2 * fam_L(base):
                raise AssertionError("[F, A] = 2F fails")
            if commutator(fam_Lstar, fam_A, base) != -2 * fam_Lstar(base):
                raise AssertionError("[F*, A] = -2F* fails")
            if commutator(fam_L, fam_Lstar, base) != QForm.zero(
                    omega.dim, laurent=True):
                raise AssertionError("[F, F*] = 0 fails")
            # ladder pair: multiplication by h^{+-1} against the degree
            # operator D = -A_h (D counts blade degree plus twice h degree)
            for s in (1, -1):
                mplus = base.h_shift(s)
                lhs = -apply_Ah(mplus, omega) - (-apply_Ah(base, omega)
                                                 ).h_shift(s)
                if lhs != (2 * s) * mplus:
                    raise AssertionError("[D, h^s] = 2 s h^s fails")
    return fam_L, fam_Lstar, fam_A


class LinOp:
    """A square operator matrix over an enumerated (h-exponent, Blade) basis."""

    def __init__(self, basis, mat):
        self.basis = list(basis)
        self.mat = [[as_fraction(x) for x in row] for row in mat]
        size = len(self.basis)
        if len(self.mat) != size or any(len(r) != size for r in self.mat):
            raise ValueError("matrix shape does not match basis")

    def char_poly(self) -> CharPolynomial:
        return _char_poly_rows(self.mat)

    def det(self) -> Fraction:
        return det_field(self.mat)

    def serialize(self):
        return {
            "basis": [[e, str(Blade(bl.dim, bl.mask))] for e, bl in self.basis],
            "rows": [[str(x) for x in row] for row in self.mat],
        }


def graded_window_basis(n: int, m: int):
    """Basis of the total-degree-m window: (h-exp p, mask) with
    deg + 2p = m and 0 <= deg <= 2n; ordered by blade degree ascending,
    then blade indices lexicographically."""
    out = []
    for k in range(0, 2 * n + 1):
        if (m - k) % 2:
            continue
        p = (m - k) // 2
        for mask in masks_of_degree(2 * n, k):
            out.append((p, mask))
    out.sort(key=lambda t: (blade_degree(t[1]), indices_of_mask(t[1])))
    return out


def window_matrix(op, n: int, m_from: int, m_to: int):
    """Matrix of op mapping the degree-m_from window into degree-m_to."""
    dim = 2 * n
    dom = graded_window_basis(n, m_from)
    cod = graded_window_basis(n, m_to)
    index = {key: i for i, key in enumerate(cod)}
    cols = []
    for p, mask in dom:
        image = op(QForm(dim, {mask: HPoly({p: 1}, laurent=True)},
                         laurent=True))
        col = [Fraction(0)] * len(cod)
        for mk, c in image.terms.items():
            for e, v in c.terms.items():
                key = (e, mk)
                if key not in index:
                    raise AssertionError("image leaves the target window")
                col[index[key]] = v
        cols.append(col)
    return [[cols[j][i] for j in range(len(dom))] for i in range(len(cod))]


def lefschetz_matrix(n: int, parity) -> LinOp:
    """Matrix of h^-1 (deformed L) on the parity window, rational entries."""
    if isinstance(parity, str):
        parity = {"even": 0, "odd": 1}[parity]
    if parity not in (0, 1):
        raise ValueError("parity must be 0/'even' or 1/'odd'")
    omega = SymplecticForm(2 * n)

    def op(form):
        return apply_Lh(form, omega).h_shift(-1)

    mat = window_matrix(op, n, parity, parity)
    basis = [(p, Blade(2 * n, mask))
             for p, mask in graded_window_basis(n, parity)]
    return LinOp(basis, mat)


def char_poly(m) -> CharPolynomial:
    if isinstance(m, LinOp):
        return m.char_poly()
    return _char_poly_rows(m)


def det_recursion_check(m1, depth: int):
    """Doubling recursion for block matrices built from a seed matrix.

    Builds M_{j+1} = [[M_j, -I], [I, M_j + 2I]] and checks, as exact
    polynomial identities in t:
      (a) det(M_{j+1} + tI) = det(M_j + (t+1)I)^2 at every level, and
      (b) det(M_{k+1} + tI) = det(M_1 + (t+k)I)^(2^k) at the final level,
    plus the mirrored recursion [[M, I], [-I, M - 2I]] against
    det(M_1 + (t-k)I)^(2^k).
    """
    if depth > 4:
        raise ValueError("depth capped at 4")
    m1 = [[as_fraction(x) for x in row] for row in m1]
    size = len(m1) * (1 << depth)
    if size > 64:
        raise ValueError("final size capped at 64")

    def shifted_det(mat, shift_units: int):
        # det(mat + (t + shift_units) I) as an exact polynomial in t
        rows = [[HPoly({0: x}) for x in row] for row in mat]
        for i in range(len(rows)):
            rows[i][i] = rows[i][i] + HPoly({0: shift_units, 1: 1})
        return poly_det(rows, len(rows))

    def step(mat, flip: bool):
        k = len(mat)
        out = []
        for i in range(k):
            out.append(mat[i][:] + [Fraction(-1 if not flip else 1)
                                    if i == j else Fraction(0)
                                    for j in range(k)])
        for i in range(k):
            row = [Fraction(1 if not flip else -1) if i == j else Fraction(0)
                   for j in range(k)]
            diag = 2 if not flip else -2
            row += [mat[i][j] + (diag if i == j else 0) for j in range(k)]
            out.append(row)
        return out

    report = {"levels": [], "depth": depth, "size": size}
    mats = [m1]
    for _ in range(depth):
        mats.append(step(mats[-1], flip=False))
    for j in range(depth):
        lhs = shifted_det(mats[j + 1], 0)
        inner = shifted_det(mats[j], 1)
        ok = lhs == inner * inner
        report["levels"].append(ok)
        if not ok:
            raise AssertionError("single-step determinant identity fails")
    base = shifted_det(m1, depth)
    closed = HPoly({0: 1})
    for _ in range(1 << depth):
        closed = closed * base
    report["closed_form"] = shifted_det(mats[depth], 0) == closed
    if not report["closed_form"]:
        raise AssertionError("closed-form determinant identity fails")
    mirror = [m1]
    for _ in range(depth):
        mirror.append(step(mirror[-1], flip=True))
    mbase = shifted_det(m1, -depth)
    mclosed = HPoly({0: 1})
    for _ in range(1 << depth):
        mclosed = mclosed * mbase
    report["mirror"] = shifted_det(mirror[depth], 0) == mclosed
    if not report["mirror"]:
        raise AssertionError("mirrored determinant identity fails")
    return report
