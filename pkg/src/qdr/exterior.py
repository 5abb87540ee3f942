"""Constant-coefficient exterior algebra and the deformed wedge product.

The deformed product of two forms expands the exponential of the pairing
insertion operator exactly:

    a *_h b = sum_n h^n/n! sum w^{i1 j1} ... w^{in jn}
              (a -| e_{i1} -| ... ) ^ ( ... |- e_{j1} |- b)

where -| fills the last argument slot of a and |- fills the first slot
of b, innermost insertion first on both sides. The sum terminates because
each step lowers both degrees. Everything is exact: coefficients are
polynomials (optionally Laurent) in h over the rationals.
"""

from __future__ import annotations

from fractions import Fraction

from .blades import (
    Blade,
    blade_str,
    indices_of_mask,
    insert_first_mask,
    insert_last_mask,
    mask_of_indices,
    wedge_masks,
)
from .scalars import GaussRat, HPoly, HPolyMulti, as_fraction


class PairTensor:
    """A bilinear deformation pairing phi^{ij}, not assumed antisymmetric."""

    def __init__(self, dim: int, entries=None):
        self.dim = dim
        self.entries = {}
        for (i, j), c in dict(entries or {}).items():
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise ValueError("pairing index out of range")
            if isinstance(c, (int, str)):
                c = as_fraction(c)
            if c:
                self.entries[(i, j)] = c
        self._ordered = None
        self._cache = {}

    def entry(self, i: int, j: int):
        return self.entries.get((i, j), Fraction(0))

    def ordered_entries(self):
        if self._ordered is None:
            self._ordered = sorted(self.entries.items())
            self._ordered = [(i, j, c) for (i, j), c in self._ordered]
        return self._ordered

    def is_constant(self) -> bool:
        return all(isinstance(c, (Fraction, int, GaussRat)) for _, _, c in
                   self.ordered_entries())

    def cacheable(self) -> bool:
        # function-valued entries change under composition; only constant
        # pairings get the blade-pair memo table
        return self.is_constant()

    def __eq__(self, other):
        return (isinstance(other, PairTensor) and self.dim == other.dim
                and self.entries == other.entries)

    def __str__(self):
        inner = ", ".join(f"w{i}{j}={c}" for i, j, c in self.ordered_entries())
        return f"pairing({self.dim}; {inner})"

    __repr__ = __str__


class Bivector(PairTensor):
    """Antisymmetric pairing w^{ij}; stored on i < j, looked up signed."""

    def __init__(self, dim: int, entries=None):
        upper = {}
        for (i, j), c in dict(entries or {}).items():
            if isinstance(c, (int, str)):
                c = as_fraction(c)
            if i == j:
                if c:
                    raise ValueError("diagonal entry in an antisymmetric pairing")
                continue
            if i > j:
                i, j, c = j, i, -c
            prev = upper.get((i, j))
            if prev is not None and prev != c:
                raise ValueError("inconsistent antisymmetric entries")
            upper[(i, j)] = c
        full = {}
        for (i, j), c in upper.items():
            if c:
                full[(i, j)] = c
                full[(j, i)] = -c
        super().__init__(dim, full)

    @staticmethod
    def standard(dim: int) -> "Bivector":
        """Pairing of the standard symplectic structure: w^{2a-1,2a} = -1."""
        if dim % 2:
            raise ValueError("standard pairing needs even dimension")
        return Bivector(dim, {(2 * a - 1, 2 * a): Fraction(-1)
                              for a in range(1, dim // 2 + 1)})

    def upper_entries(self):
        return [(i, j, c) for i, j, c in self.ordered_entries() if i < j]

    def scale(self, factor) -> "Bivector":
        return Bivector(self.dim, {(i, j): c * factor
                                   for i, j, c in self.upper_entries()})

    def __add__(self, other: "Bivector") -> "Bivector":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        out = {}
        for i, j, c in self.upper_entries():
            out[(i, j)] = out.get((i, j), 0) + c
        for i, j, c in other.upper_entries():
            out[(i, j)] = out.get((i, j), 0) + c
        return Bivector(self.dim, out)


def expand_blade_pair(amask: int, bmask: int, pairing: PairTensor):
    """All contraction levels of one blade pair.

    Returns a tuple of (level n, result mask, coefficient) where the
    coefficient already carries the 1/n! weight but not the h^n factor.
    """
    use_cache = pairing.cacheable()
    if use_cache:
        hit = pairing._cache.get((amask, bmask))
        if hit is not None:
            return hit
    entries = pairing.ordered_entries()
    state = {(amask, bmask): Fraction(1)}
    out = []
    n = 0
    factinv = Fraction(1)
    while state:
        for (a, b), c in state.items():
            s, m = wedge_masks(a, b)
            if s:
                out.append((n, m, c * (s * factinv)))
        nxt = {}
        for (a, b), c in state.items():
            if not a or not b:
                continue
            for i, j, wij in entries:
                sa, a2 = insert_last_mask(a, i)
                if not sa:
                    continue
                sb, b2 = insert_first_mask(j, b)
                if not sb:
                    continue
                add = (sa * sb) * c * wij
                prev = nxt.get((a2, b2))
                nxt[(a2, b2)] = add if prev is None else prev + add
        state = {k: v for k, v in nxt.items() if v}
        n += 1
        factinv = factinv / n
    result = tuple(out)
    if use_cache:
        pairing._cache[(amask, bmask)] = result
    return result


def _normalize_vector(v, dim: int):
    """Accepts a 1-based index, an index->coeff dict, or a coordinate list."""
    if isinstance(v, int):
        if not (1 <= v <= dim):
            raise ValueError("vector index out of range")
        return [(v, Fraction(1))]
    if isinstance(v, dict):
        return [(i, c) for i, c in sorted(v.items()) if c]
    if isinstance(v, (list, tuple)):
        if len(v) != dim:
            raise ValueError("coordinate vector length mismatch")
        return [(i, c) for i, c in enumerate(v, start=1) if c]
    raise TypeError(f"not a vector: {v!r}")


class QForm:
    """A form with polynomial h coefficients on a fixed R^dim frame."""

    __slots__ = ("dim", "terms", "laurent")

    def __init__(self, dim: int, terms=None, laurent: bool = False):
        self.dim = dim
        self.laurent = laurent
        self.terms = {}
        for key, val in dict(terms or {}).items():
            if isinstance(key, Blade):
                mask = key.mask
            elif isinstance(key, tuple):
                mask = mask_of_indices(key)
            else:
                mask = int(key)
            if mask >> dim:
                raise ValueError("blade index exceeds dimension")
            c = val if isinstance(val, HPoly) else HPoly(val, laurent=laurent)
            if c.laurent:
                self.laurent = True
            if c:
                prev = self.terms.get(mask)
                self.terms[mask] = c if prev is None else prev + c
        self.terms = {m: c for m, c in self.terms.items() if c}

    @staticmethod
    def zero(dim: int, laurent: bool = False) -> "QForm":
        return QForm(dim, laurent=laurent)

    @staticmethod
    def scalar(dim: int, c=1, laurent: bool = False) -> "QForm":
        return QForm(dim, {0: c}, laurent=laurent)

    @staticmethod
    def basis(dim: int, indices, coeff=1) -> "QForm":
        return QForm(dim, {tuple(indices): coeff})

    @staticmethod
    def one_form(dim: int, i: int, coeff=1) -> "QForm":
        return QForm(dim, {(i,): coeff})

    def _coerce(self, other) -> "QForm":
        if isinstance(other, QForm):
            if other.dim != self.dim:
                raise ValueError("dimension mismatch")
            return other
        return QForm(self.dim, {0: other}, laurent=self.laurent)

    def __add__(self, other):
        o = self._coerce(other)
        t = dict(self.terms)
        for m, c in o.terms.items():
            c2 = t.get(m)
            c2 = c if c2 is None else c2 + c
            if c2:
                t[m] = c2
            else:
                t.pop(m, None)
        return QForm(self.dim, t, laurent=self.laurent or o.laurent)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return QForm(self.dim, {m: -c for m, c in self.terms.items()},
                     laurent=self.laurent)

    def __mul__(self, scalar):
        if isinstance(scalar, QForm):
            raise TypeError("use wedge or quantum_wedge for form products")
        if isinstance(scalar, (int, str)):
            scalar = as_fraction(scalar)
        out = {m: c * scalar for m, c in self.terms.items()}
        laurent = self.laurent or (isinstance(scalar, HPoly) and scalar.laurent)
        return QForm(self.dim, out, laurent=laurent)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, int):
            scalar = Fraction(scalar)
        return QForm(self.dim, {m: c / scalar for m, c in self.terms.items()},
                     laurent=self.laurent)

    def h_shift(self, k: int) -> "QForm":
        """Multiply by h^k."""
        return QForm(self.dim, {m: c.shift(k) for m, c in self.terms.items()},
                     laurent=self.laurent or k < 0)

    def coeff(self, key) -> HPoly:
        if isinstance(key, Blade):
            key = key.mask
        elif isinstance(key, tuple):
            key = mask_of_indices(key)
        return self.terms.get(key, HPoly(laurent=self.laurent))

    def grade(self, k: int) -> "QForm":
        return QForm(self.dim,
                     {m: c for m, c in self.terms.items()
                      if m.bit_count() == k},
                     laurent=self.laurent)

    def blade_degrees(self):
        return sorted({m.bit_count() for m in self.terms})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, HPoly)):
            other = self._coerce(other)
        if not isinstance(other, QForm):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, tuple(sorted(
            (m, c) for m, c in self.terms.items()))))

    def items(self):
        for m in sorted(self.terms, key=lambda m: (m.bit_count(),
                                                   indices_of_mask(m))):
            yield Blade(self.dim, m), self.terms[m]

    def map_coeffs(self, fn) -> "QForm":
        out = {}
        for m, c in self.terms.items():
            c2 = fn(m, c)
            if c2:
                out[m] = c2
        laurent = self.laurent or any(c.laurent for c in out.values())
        return QForm(self.dim, out, laurent=laurent)

    def subs_h(self, value):
        """Evaluate h -> value; returns a QForm with constant coefficients."""
        return QForm(self.dim, {m: HPoly(c.subs(value))
                                for m, c in self.terms.items()})

    def classical(self) -> "QForm":
        """The h -> 0 limit (only valid for polynomial mode coefficients)."""
        return self.subs_h(Fraction(0))

    def wedge(self, other: "QForm") -> "QForm":
        o = self._coerce(other)
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in o.terms.items():
                s, m = wedge_masks(ma, mb)
                if not s:
                    continue
                add = ca * cb * s
                prev = out.get(m)
                add = add if prev is None else prev + add
                if add:
                    out[m] = add
                else:
                    out.pop(m, None)
        return QForm(self.dim, out, laurent=self.laurent or o.laurent)

    def __str__(self):
        return format_terms(
            [(m, e, c) for m, hc in sorted(
                self.terms.items(),
                key=lambda t: (-t[0].bit_count(), indices_of_mask(t[0])))
             for e, c in sorted(hc.terms.items())])

    __repr__ = __str__

    def serialize(self):
        out = {}
        for m in sorted(self.terms,
                        key=lambda m: (m.bit_count(), indices_of_mask(m))):
            out[blade_str(m)] = self.terms[m].serialize()
        return out


def format_terms(triples, letter: str = "e") -> str:
    """Render (mask, h exponent, coefficient) triples: 'e1^e2 + (-1)*h'."""
    parts = []
    for mask, e, c in triples:
        pieces = []
        if c == 1:
            if e == 0 and not mask:
                pieces.append("1")
        elif c == -1 and (e != 0 or mask):
            pieces.append("(-1)")
        else:
            s = str(c)
            if s.startswith("-") or "/" in s or not s.isdigit():
                s = f"({s})"
            pieces.append(s)
        if e == 1:
            pieces.append("h")
        elif e != 0:
            pieces.append(f"h^{e}")
        if mask:
            pieces.append(blade_str(mask, letter))
        if not pieces:
            pieces.append("1")
        parts.append("*".join(pieces))
    return " + ".join(parts) if parts else "0"


def insert_first(v, form: QForm) -> QForm:
    """Contract a vector into the first slot of each blade."""
    out = {}
    for i, ci in _normalize_vector(v, form.dim):
        for m, c in form.terms.items():
            s, m2 = insert_first_mask(i, m)
            if not s:
                continue
            add = c * (ci * s)
            prev = out.get(m2)
            add = add if prev is None else prev + add
            if add:
                out[m2] = add
            else:
                out.pop(m2, None)
    return QForm(form.dim, out, laurent=form.laurent)


def insert_last(form: QForm, v) -> QForm:
    """Contract a vector into the last slot of each blade."""
    out = {}
    for i, ci in _normalize_vector(v, form.dim):
        for m, c in form.terms.items():
            s, m2 = insert_last_mask(m, i)
            if not s:
                continue
            add = c * (ci * s)
            prev = out.get(m2)
            add = add if prev is None else prev + add
            if add:
                out[m2] = add
            else:
                out.pop(m2, None)
    return QForm(form.dim, out, laurent=form.laurent)


def wedge(a: QForm, b: QForm) -> QForm:
    return a.wedge(b)


def quantum_wedge(a: QForm, b: QForm, w: PairTensor) -> QForm:
    """The deformed wedge product a *_h b for a constant pairing w."""
    if a.dim != b.dim or a.dim != w.dim:
        raise ValueError("dimension mismatch")
    out = {}
    laurent = a.laurent or b.laurent
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            base = ca * cb
            for n, m, q in expand_blade_pair(ma, mb, w):
                add = (base * q).shift(n)
                prev = out.get(m)
                add = add if prev is None else prev + add
                if add:
                    out[m] = add
                else:
                    out.pop(m, None)
    return QForm(a.dim, out, laurent=laurent)


def quantum_power(a: QForm, k: int, w: PairTensor) -> QForm:
    """k-fold deformed product a *_h ... *_h a (k = 0 gives 1)."""
    if k < 0:
        raise ValueError("negative power")
    out = QForm.scalar(a.dim, 1, laurent=a.laurent)
    for _ in range(k):
        out = quantum_wedge(out, a, w)
    return out


def quantum_exp(a: QForm, w: PairTensor, order: int) -> QForm:
    """Deformed exponential: sum of a^k_h / k! for series order k <= order.

    The order parameter truncates the exponential series itself; powers
    beyond it are dropped wholesale. (A filter on monomial degree would
    never terminate for arguments with a scalar part.)
    """
    out = QForm.zero(a.dim, laurent=a.laurent)
    power = QForm.scalar(a.dim, 1, laurent=a.laurent)
    fact = Fraction(1)
    for k in range(order + 1):
        if k:
            power = quantum_wedge(power, a, w)
            fact = fact * k
        out = out + power / fact
    return out


def total_degree(form: QForm):
    """Total degree (blade degree + 2 per power of h); 'mixed' if not pure."""
    degs = set()
    for m, c in form.terms.items():
        k = m.bit_count()
        for e in c.terms:
            degs.add(k + 2 * e)
    if not degs:
        return 0
    if len(degs) == 1:
        return degs.pop()
    return "mixed"


class MultiForm:
    """A form whose coefficients are polynomials in several parameters."""

    __slots__ = ("dim", "nparams", "terms")

    def __init__(self, dim: int, nparams: int, terms=None):
        self.dim = dim
        self.nparams = nparams
        self.terms = {}
        for m, c in dict(terms or {}).items():
            if not isinstance(c, HPolyMulti):
                c = HPolyMulti(nparams, c)
            if c:
                self.terms[int(m)] = c

    def __eq__(self, other):
        return (isinstance(other, MultiForm) and self.dim == other.dim
                and self.nparams == other.nparams
                and self.terms == other.terms)

    def __add__(self, other):
        t = dict(self.terms)
        for m, c in other.terms.items():
            c2 = t.get(m)
            c2 = c if c2 is None else c2 + c
            if c2:
                t[m] = c2
            else:
                t.pop(m, None)
        return MultiForm(self.dim, self.nparams, t)

    def coeff(self, key) -> HPolyMulti:
        if isinstance(key, tuple):
            key = mask_of_indices(key)
        return self.terms.get(key, HPolyMulti(self.nparams))

    def specialize(self, coeffs) -> QForm:
        """Substitute parameter j -> coeffs[j-1] * t, collapsing to QForm."""
        return QForm(self.dim, {m: c.specialize(coeffs)
                                for m, c in self.terms.items()})

    def __str__(self):
        parts = []
        for m in sorted(self.terms, key=lambda m: (-m.bit_count(),
                                                   indices_of_mask(m))):
            c = self.terms[m]
            if not m:
                parts.append(f"({c})")
            else:
                parts.append(f"({c})*{blade_str(m)}")
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


def quantum_wedge_multi(a: QForm, b: QForm, ws) -> MultiForm:
    """Deformed product with one parameter per pairing in ws.

    The per-pairing insertion operators commute, so the multi-parameter
    exponential is the composition of the single-parameter ones. Inputs
    must be classical (h-free) forms.
    """
    ws = list(ws)
    r = len(ws)
    if not r:
        raise ValueError("need at least one pairing")
    for w in ws:
        if w.dim != a.dim:
            raise ValueError("dimension mismatch")
    for form in (a, b):
        for c in form.terms.values():
            if set(c.terms) - {0}:
                raise ValueError("multi-parameter product needs h-free inputs")
    out = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            state = {(ma, mb): HPolyMulti(r, ca.constant() * cb.constant())}
            for p, w in enumerate(ws, start=1):
                entries = w.ordered_entries()
                acc = {}
                level = state
                n = 0
                fact = Fraction(1)
                while level:
                    weight = HPolyMulti.h(r, p, n, Fraction(1) / fact)
                    for key, c in level.items():
                        add = c * weight
                        prev = acc.get(key)
                        acc[key] = add if prev is None else prev + add
                    nxt = {}
                    for (am, bm), c in level.items():
                        if not am or not bm:
                            continue
                        for i, j, wij in entries:
                            sa, a2 = insert_last_mask(am, i)
                            if not sa:
                                continue
                            sb, b2 = insert_first_mask(j, bm)
                            if not sb:
                                continue
                            add = c * (wij * sa * sb)
                            prev = nxt.get((a2, b2))
                            nxt[(a2, b2)] = add if prev is None else prev + add
                    level = {k: v for k, v in nxt.items() if v}
                    n += 1
                    fact = fact * n
                state = {k: v for k, v in acc.items() if v}
            for (am, bm), c in state.items():
                s, m = wedge_masks(am, bm)
                if not s:
                    continue
                add = c * s
                prev = out.get(m)
                add = add if prev is None else prev + add
                if add:
                    out[m] = add
                else:
                    out.pop(m, None)
    return MultiForm(a.dim, r, out)
