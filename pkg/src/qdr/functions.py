"""Exact coordinate functions: polynomials and torus Fourier modes.

Both rings support the handful of operations the field calculus needs:
ring arithmetic, partial derivatives, and exact equality. FourierFn keeps
a formal generator tau for the circle period so differentiation never
leaves exact arithmetic.
"""

from fractions import Fraction

from .scalars import (GaussRat, HPoly, TauNumber, _coeff_str, as_fraction,
                      frac_str)

_SCALARS = (int, Fraction, GaussRat, HPoly, str)


def _coerce_scalar(c):
    if isinstance(c, (int, str)):
        return as_fraction(c)
    if isinstance(c, (Fraction, GaussRat, HPoly)):
        return c
    raise TypeError(f"not a scalar coefficient: {c!r}")


class PolyFn:
    """Polynomial in x^1..x^dim with exact coefficients.

    Terms map exponent tuples to coefficients; coefficients may be
    rational, Gaussian rational, or h-polynomials (the Moyal product
    produces the latter).
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms=None):
        self.dim = dim
        self.terms = {}
        for expo, c in dict(terms or {}).items():
            expo = tuple(int(e) for e in expo)
            if len(expo) != dim or any(e < 0 for e in expo):
                raise ValueError(f"bad exponent tuple {expo} for dim {dim}")
            c = _coerce_scalar(c)
            if c:
                prev = self.terms.get(expo)
                c = c if prev is None else prev + c
                if c:
                    self.terms[expo] = c
                else:
                    self.terms.pop(expo, None)

    @classmethod
    def constant(cls, dim: int, c) -> "PolyFn":
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def zero(cls, dim: int) -> "PolyFn":
        return cls(dim)

    @classmethod
    def coord(cls, dim: int, j: int) -> "PolyFn":
        if not 1 <= j <= dim:
            raise ValueError(f"coordinate x{j} out of range for dim {dim}")
        expo = tuple(1 if k == j - 1 else 0 for k in range(dim))
        return cls(dim, {expo: 1})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_coeff(self):
        return self.terms.get((0,) * self.dim, Fraction(0))

    def __bool__(self):
        return bool(self.terms)

    def _binop(self, other, sign):
        if isinstance(other, _SCALARS):
            other = PolyFn.constant(self.dim, other)
        if not isinstance(other, PolyFn):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        t = dict(self.terms)
        for expo, c in other.terms.items():
            c2 = t.get(expo, 0) + sign * c
            if c2:
                t[expo] = c2
            else:
                t.pop(expo, None)
        return PolyFn(self.dim, t)

    def __add__(self, other):
        return self._binop(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, -1)

    def __rsub__(self, other):
        return (-self)._binop(other, 1)

    def __neg__(self):
        return PolyFn(self.dim, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            c = _coerce_scalar(other)
            return PolyFn(self.dim, {e: v * c for e, v in self.terms.items()})
        if not isinstance(other, PolyFn):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = t.get(e, 0) + c1 * c2
                if c:
                    t[e] = c
                else:
                    t.pop(e, None)
        return PolyFn(self.dim, t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, str)):
            other = as_fraction(other)
        if isinstance(other, Fraction):
            return self * (Fraction(1) / other)
        if isinstance(other, GaussRat):
            return self * (GaussRat(1) / other)
        raise TypeError("polynomial division limited to scalars")

    def partial(self, j: int) -> "PolyFn":
        if not 1 <= j <= self.dim:
            raise ValueError(f"coordinate x{j} out of range")
        t = {}
        for expo, c in self.terms.items():
            e = expo[j - 1]
            if e:
                down = expo[:j - 1] + (e - 1,) + expo[j:]
                t[down] = t.get(down, 0) + e * c
        return PolyFn(self.dim, t)

    def eval(self, point):
        point = [as_fraction(p) if isinstance(p, (int, str)) else p
                 for p in point]
        if len(point) != self.dim:
            raise ValueError("point dimension mismatch")
        total = Fraction(0)
        for expo, c in self.terms.items():
            v = c
            for x, e in zip(point, expo):
                v = v * x ** e
            total = total + v
        return total

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def conj(self) -> "PolyFn":
        return PolyFn(self.dim, {e: c.conj() if isinstance(c, (GaussRat,
                      HPoly)) else c for e, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, _SCALARS):
            other = PolyFn.constant(self.dim, other)
        if not isinstance(other, PolyFn):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def _mono_str(self, expo):
        parts = []
        for k, e in enumerate(expo):
            if e == 1:
                parts.append(f"x{k + 1}")
            elif e > 1:
                parts.append(f"x{k + 1}^{e}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda e: (-sum(e), e))
        parts = []
        for expo in keys:
            c = self.terms[expo]
            mono = self._mono_str(expo)
            if not mono:
                parts.append(_coeff_str(c) if not isinstance(c, HPoly)
                             else f"({c})")
            elif c == 1:
                parts.append(mono)
            else:
                cs = _coeff_str(c) if not isinstance(c, HPoly) else f"({c})"
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    __repr__ = __str__

    def serialize(self):
        keys = sorted(self.terms, key=lambda e: (sum(e), e))
        out = []
        for expo in keys:
            c = self.terms[expo]
            if isinstance(c, HPoly):
                out.append([list(expo), c.serialize()])
            elif isinstance(c, GaussRat):
                out.append([list(expo), c.serialize()])
            else:
                out.append([list(expo), frac_str(c)])
        return out


class FourierFn:
    """Trigonometric polynomial on a torus, as exact exponential modes.

    A term (k_1, ..., k_d) -> c stands for c * exp(i tau <k, x>) with tau
    the formal circle period. Coefficients are TauNumbers so derivatives
    (which multiply by i tau k_j) stay in the ring.
    """

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms=None):
        self.dim = dim
        self.terms = {}
        for mode, c in dict(terms or {}).items():
            mode = tuple(int(k) for k in mode)
            if len(mode) != dim:
                raise ValueError(f"bad mode {mode} for dim {dim}")
            c = TauNumber.coerce(c)
            if c:
                prev = self.terms.get(mode)
                c = c if prev is None else prev + c
                if c:
                    self.terms[mode] = c
                else:
                    self.terms.pop(mode, None)

    @classmethod
    def constant(cls, dim: int, c) -> "FourierFn":
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def zero(cls, dim: int) -> "FourierFn":
        return cls(dim)

    @classmethod
    def mode(cls, dim: int, ks, coeff=1) -> "FourierFn":
        return cls(dim, {tuple(ks): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_coeff(self) -> TauNumber:
        return self.terms.get((0,) * self.dim, TauNumber())

    def __bool__(self):
        return bool(self.terms)

    def _binop(self, other, sign):
        if isinstance(other, (int, Fraction, GaussRat, TauNumber)):
            other = FourierFn.constant(self.dim, other)
        if not isinstance(other, FourierFn):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        t = dict(self.terms)
        for mode, c in other.terms.items():
            c2 = t.get(mode, TauNumber()) + (c if sign > 0 else -c)
            if c2:
                t[mode] = c2
            else:
                t.pop(mode, None)
        return FourierFn(self.dim, t)

    def __add__(self, other):
        return self._binop(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, -1)

    def __rsub__(self, other):
        return (-self)._binop(other, 1)

    def __neg__(self):
        return FourierFn(self.dim, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat, TauNumber)):
            c = TauNumber.coerce(other)
            return FourierFn(self.dim,
                             {m: v * c for m, v in self.terms.items()})
        if not isinstance(other, FourierFn):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = t.get(m, TauNumber()) + c1 * c2
                if c:
                    t[m] = c
                else:
                    t.pop(m, None)
        return FourierFn(self.dim, t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussRat, TauNumber)):
            c = TauNumber.coerce(other)
            return FourierFn(self.dim,
                             {m: v / c for m, v in self.terms.items()})
        raise TypeError("mode division limited to scalars")

    def partial(self, j: int) -> "FourierFn":
        # d/dx^j exp(i tau <k, x>) = i tau k_j exp(i tau <k, x>)
        if not 1 <= j <= self.dim:
            raise ValueError(f"coordinate x{j} out of range")
        t = {}
        for mode, c in self.terms.items():
            k = mode[j - 1]
            if k:
                t[mode] = c * TauNumber.tau(1, GaussRat(0, k))
        return FourierFn(self.dim, t)

    def sup_norm(self) -> int:
        return max((max(abs(k) for k in m) if m else 0
                    for m in self.terms), default=0)

    def conj(self) -> "FourierFn":
        return FourierFn(self.dim, {tuple(-k for k in m): c.conj()
                                    for m, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussRat, TauNumber)):
            other = FourierFn.constant(self.dim, other)
        if not isinstance(other, FourierFn):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mode in sorted(self.terms):
            c = self.terms[mode]
            mono = ("" if not any(mode)
                    else "mode(" + ",".join(str(k) for k in mode) + ")")
            if not mono:
                parts.append(str(c) if c.is_monomial() else f"({c})")
            elif c == 1:
                parts.append(mono)
            else:
                cs = str(c)
                if not c.is_monomial() or not cs[0].isalnum():
                    cs = f"({cs})"
                elif "/" in cs or "*" in cs or "i" in cs:
                    cs = f"({cs})"
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    __repr__ = __str__

    def serialize(self):
        out = []
        for mode in sorted(self.terms):
            c = self.terms[mode]
            out.append([list(mode),
                        [[e, c.terms[e].serialize()] for e in sorted(c.terms)]])
        return out


def moyal_product(u: PolyFn, v: PolyFn, w) -> PolyFn:
    """Deformed product of polynomials from the derivative expansion.

    Level n contributes h^n/n! sum over index words of the pairing
    entries times matched n-th partials of u and v. Polynomials have
    finitely many nonzero partials so the sum terminates.
    """
    if u.dim != w.dim or v.dim != w.dim:
        raise ValueError("dimension mismatch")
    entries = w.ordered_entries()
    out = PolyFn.zero(u.dim)
    pairs = [(u, v, Fraction(1))]
    n = 0
    factinv = Fraction(1)
    while pairs:
        level = PolyFn.zero(u.dim)
        for a, b, c in pairs:
            level = level + (a * b) * c
        out = out + level * HPoly({n: factinv})
        nxt = []
        for a, b, c in pairs:
            for i, j, wij in entries:
                da = a.partial(i)
                if da.is_zero():
                    continue
                db = b.partial(j)
                if db.is_zero():
                    continue
                nxt.append((da, db, c * wij))
        pairs = nxt
        n += 1
        factinv = factinv / n
    return out
