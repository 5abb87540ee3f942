"""The deformed even ring generated by the symplectic form.

Ground truth is always direct expansion in the flat Darboux model: the
structure constants of omega-powers under the quantum product are read
off from full blade expansions, and the printed recursion is checked
against that table rather than assumed.
"""

from fractions import Fraction
from math import comb, factorial

from .exterior import Bivector, QForm, quantum_power, quantum_wedge
from .scalars import HPoly


def _omega(n: int) -> QForm:
    out = QForm.zero(2 * n)
    for a in range(1, n + 1):
        out = out + QForm.basis(2 * n, (2 * a - 1, 2 * a))
    return out


def _block_mask(j: int) -> int:
    # e^1 ^ e^2 ^ ... ^ e^{2j}: the first j coordinate pair blocks
    return (1 << (2 * j)) - 1


class CPnRing:
    """Structure constants of the quantum products of omega powers.

    Each product of two basis powers is stored as its expansion over
    the basis {1, omega, ..., omega^n} with h-polynomial coefficients.
    """

    __slots__ = ("n", "omega", "powers", "table")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("the ring needs n >= 1")
        self.n = n
        self.omega = _omega(n)
        powers = [QForm.scalar(2 * n, 1)]
        for _ in range(n):
            powers.append(_classical_wedge(powers[-1], self.omega))
        self.powers = powers
        w = Bivector.standard(2 * n)
        self.table = {}
        for k in range(n + 1):
            for l in range(n + 1):
                prod = quantum_wedge(powers[k], powers[l], w)
                self.table[(k, l)] = self._decompose(prod, k, l)
        self._verify_symmetry_and_layers()

    def _decompose(self, form: QForm, k: int, l: int):
        """Express a balanced form over the basis powers, exactly."""
        # omega^j carries j! on each j-block marker blade
        coeffs = []
        for j in range(self.n + 1):
            c = form.coeff(_block_mask(j)) / Fraction(factorial(j))
            coeffs.append(c)
        rebuilt = QForm.zero(2 * self.n)
        for j, c in enumerate(coeffs):
            rebuilt = rebuilt + self.powers[j] * c
        if rebuilt != form:
            raise AssertionError(
                f"product of powers {k} and {l} leaves the span of the "
                "basis powers")
        lo, hi = abs(k - l), k + l
        for j, c in enumerate(coeffs):
            if c and not lo <= j <= hi:
                raise AssertionError(
                    f"product of powers {k} and {l} has a coefficient at "
                    f"power {j}, outside {lo}..{hi}")
        return tuple(coeffs)

    def _verify_symmetry_and_layers(self):
        for k in range(self.n + 1):
            for l in range(k, self.n + 1):
                if self.table[(k, l)] != self.table[(l, k)]:
                    raise AssertionError("even powers fail to commute")
                coeffs = self.table[(k, l)]
                for j, c in enumerate(coeffs):
                    classical = c.coeff(0)
                    want = Fraction(1) if (j == k + l <= self.n) else \
                        Fraction(0)
                    if classical != want:
                        raise AssertionError(
                            "classical layer of the table is not the "
                            "truncated polynomial ring")

    def entry(self, k: int, l: int):
        return self.table[(k, l)]

    def mul_vec(self, u, v):
        """Product of two basis expansions, reduced via the table."""
        out = [HPoly() for _ in range(self.n + 1)]
        for k, a in enumerate(u):
            if not a:
                continue
            for l, b in enumerate(v):
                if not b:
                    continue
                scale = a * b
                for j, c in enumerate(self.table[(k, l)]):
                    out[j] = out[j] + c * scale
        return tuple(out)

    def serialize(self):
        return {
            "n": self.n,
            "table": {
                f"{k},{l}": [{"power": j, "coeffs": cf.serialize()}
                             for j, cf in enumerate(coeffs) if cf]
                for (k, l), coeffs in sorted(self.table.items())
            },
        }


def _classical_wedge(a: QForm, b: QForm) -> QForm:
    return quantum_wedge(a, b, Bivector(a.dim))


def cpn_structure_constants(n: int) -> CPnRing:
    if n > 5:
        raise ValueError("structure constants are tabulated for n <= 5")
    return CPnRing(n)


def verify_relation_17(n: int) -> dict:
    """(omega - n h) is nilpotent of order exactly n + 1, and the
    deformed form assembled from quantum products of the coordinate
    pairs literally equals omega - n h."""
    if n > 4:
        raise ValueError("the nilpotency check is run for n <= 4")
    dim = 2 * n
    w = Bivector.standard(dim)
    omega = _omega(n)
    assembled = QForm.zero(dim)
    for a in range(1, n + 1):
        assembled = assembled + quantum_wedge(
            QForm.one_form(dim, 2 * a - 1), QForm.one_form(dim, 2 * a), w)
    shifted = omega + QForm.scalar(dim, HPoly({1: -n}))
    if assembled != shifted:
        raise AssertionError("assembled deformed form is not omega - n h")
    top = quantum_power(shifted, n + 1, w)
    if not top.is_zero():
        raise AssertionError("the deformed form is not nilpotent at "
                             f"order {n + 1}")
    below = quantum_power(shifted, n, w)
    if below.is_zero():
        raise AssertionError("the deformed form vanishes too early")
    return {"n": n, "nilpotency_order": n + 1, "ok": True}


def omega_power_expansion(n: int) -> dict:
    """Compare the (n+1)-st quantum power of omega against the printed
    display and against the binomial consequence of the nilpotency
    relation; report which of the two matches."""
    if n > 4:
        raise ValueError("the expansion report is run for n <= 4")
    dim = 2 * n
    w = Bivector.standard(dim)
    omega = _omega(n)
    qpow = [quantum_power(omega, k, w) for k in range(n + 2)]
    value = qpow[n + 1]

    printed = QForm.zero(dim)
    for k in range(n + 1):
        sign = (-1) ** (n - k)
        printed = printed + qpow[k] * HPoly({n + 1 - k: sign * comb(n + 1,
                                                                    k)})

    binomial = QForm.zero(dim)
    for k in range(n + 1):
        c = comb(n + 1, k) * Fraction(-n) ** (n + 1 - k)
        binomial = binomial - qpow[k] * HPoly({n + 1 - k: c})

    return {
        "n": n,
        "value": value.serialize(),
        "printed_matches": value == printed,
        "binomial_matches": value == binomial,
        "classical_layer_zero": all(
            c.coeff(0) == 0 for c in value.terms.values()),
    }


def derived_recursion_report(n: int) -> dict:
    """Extract the exact three-term recursion for multiplying by omega
    and compare its coefficients against both candidate formulas."""
    ring = cpn_structure_constants(n)
    rows = []
    for k in range(1, n + 1):
        coeffs = ring.entry(1, k)
        for j, c in enumerate(coeffs):
            inside = k - 1 <= j <= k + 1
            if c and not inside:
                raise AssertionError(
                    "multiplication by omega is not three-term at power "
                    f"{k}")
        lead = coeffs[k + 1] if k + 1 <= n else HPoly()
        if k + 1 <= n and lead != HPoly(1):
            raise AssertionError("leading coefficient is not one")
        a_poly = coeffs[k]
        b_poly = coeffs[k - 1]
        if set(a_poly.terms) - {1} or set(b_poly.terms) - {2}:
            raise AssertionError(
                "recursion coefficients are not pure h and h^2 terms")
        a_k = a_poly.coeff(1)
        b_k = b_poly.coeff(2)
        rows.append({
            "k": k,
            "a": a_k,
            "b": b_k,
            "printed": (Fraction(2 * k), Fraction(-k * n)),
            "derived": (Fraction(2 * k), Fraction(-k * (n - k + 1))),
            "matches_printed": (a_k, b_k) ==
                               (Fraction(2 * k), Fraction(-k * n)),
            "matches_derived": (a_k, b_k) ==
                               (Fraction(2 * k),
                                Fraction(-k * (n - k + 1))),
        })
    return {"n": n, "rows": rows}


def _rational_roots(poly: dict):
    """All rational roots of a polynomial given as degree -> Fraction."""
    poly = {d: c for d, c in poly.items() if c}
    if not poly:
        raise ValueError("the zero polynomial has every root")
    low = min(poly)
    shifted = {d - low: c for d, c in poly.items()}
    roots = [Fraction(0)] if low > 0 else []
    if max(shifted) == 0:
        return roots
    scale = 1
    for c in list(shifted.values()):
        scale *= c.denominator
    ints = {d: int(c * scale) for d, c in shifted.items()}
    c0, cl = abs(ints[0]), abs(ints[max(ints)])
    for p in _divisors(c0):
        for q in _divisors(cl):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                val = sum(c * cand ** d for d, c in shifted.items())
                if val == 0 and cand not in roots:
                    roots.append(cand)
    return sorted(roots)


def _divisors(m: int):
    out = []
    d = 1
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            if d != m // d:
                out.append(m // d)
        d += 1
    return sorted(out)


def scalar_shift_report(n: int) -> dict:
    """The unique rational shift making omega + lambda h nilpotent.

    Expands (omega + lambda h)^{n+1} with the binomial theorem over the
    central scalar, collects each basis coefficient as a polynomial in
    lambda, and intersects the rational root sets.
    """
    ring = cpn_structure_constants(n)
    dim = 2 * n
    w = Bivector.standard(dim)
    omega = ring.omega
    qpow = [quantum_power(omega, k, w) for k in range(n + 2)]
    # coefficient of lambda^{n+1-k} is binom(n+1, k) h^{n+1-k} (omega)_h^k
    lam_polys = {}
    for k in range(n + 2):
        form = qpow[k] * HPoly({n + 1 - k: comb(n + 1, k)})
        for mask, c in form.terms.items():
            for e, v in c.terms.items():
                key = (mask, e)
                poly = lam_polys.setdefault(key, {})
                d = n + 1 - k
                poly[d] = poly.get(d, Fraction(0)) + v
    common = None
    for poly in lam_polys.values():
        if not any(poly.values()):
            continue
        roots = set(_rational_roots(poly))
        common = roots if common is None else common & roots
    if common is None or len(common) != 1:
        raise AssertionError(
            f"shift is not unique: candidates {sorted(common or ())}")
    lam = common.pop()
    return {"n": n, "lambda": lam, "unique": True}
