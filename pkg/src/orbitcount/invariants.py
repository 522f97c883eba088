"""Conjugation invariants of matrices over the quadratic etale extension.

A matrix A of rank n acts on V = E^n with a distinguished last basis
vector e0 and last-coordinate projection e0*.  The invariants are the
characteristic coefficients a_i together with the moments
b_i = e0*(A^i e0); a pair (a, b) is all the counting machinery ever
sees, so this module also hosts validation (parity and integrality),
the two discriminant-like quantities Delta and disc(P_a), and the
membership predicates for the twisted symmetric spaces.
"""

from .errors import Indeterminate, NotStronglyRegular, SchemaError
from .linalg import char_coeffs, mat_det
from .local_field import EElem, eelem_from_obj, eelem_to_obj, eta


def _vanishes(series):
    # No known nonzero digit at the available precision.  Exact zeros
    # also land here; callers that must tell the two apart check
    # is_exact separately.
    return len(series.coeffs) == 0


class MatrixE:
    """Square matrix over E with the marked vector e0 = last basis vector."""

    __slots__ = ("n", "entries", "desc")

    def __init__(self, entries, desc):
        n = len(entries)
        if n == 0 or any(len(row) != n for row in entries):
            raise ValueError("entries must form a nonempty square matrix")
        for row in entries:
            for e in row:
                assert e.desc == desc
        self.n = n
        self.entries = [list(row) for row in entries]
        self.desc = desc

    def apply(self, vec):
        zero = EElem.zero(self.desc)
        return [
            sum((e * x for e, x in zip(row, vec)), zero)
            for row in self.entries
        ]

    def apply_covector(self, cov):
        zero = EElem.zero(self.desc)
        return [
            sum((c * self.entries[i][j] for i, c in enumerate(cov)), zero)
            for j in range(self.n)
        ]

    def e0(self):
        one = EElem.one(self.desc)
        zero = EElem.zero(self.desc)
        return [zero] * (self.n - 1) + [one]

    def sigma(self):
        return MatrixE([[e.sigma() for e in row] for row in self.entries], self.desc)

    def transpose(self):
        return MatrixE([list(col) for col in zip(*self.entries)], self.desc)

    def is_integral(self):
        return all(e.is_integral() for row in self.entries for e in row)

    def to_obj(self):
        return {"n": self.n, "entries": [[eelem_to_obj(e) for e in row] for row in self.entries]}

    @classmethod
    def from_obj(cls, obj, desc, field="matrix"):
        if not isinstance(obj, dict):
            raise SchemaError(field, "expected an object")
        n = obj.get("n")
        if not isinstance(n, int) or n < 1:
            raise SchemaError(field + ".n", "expected a positive integer")
        rows = obj.get("entries")
        if not isinstance(rows, list) or len(rows) != n:
            raise SchemaError(field + ".entries", f"expected {n} rows")
        entries = []
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != n:
                raise SchemaError(field + f".entries[{i}]", f"expected {n} entries")
            entries.append([
                eelem_from_obj(cell, desc, field + f".entries[{i}][{j}]")
                for j, cell in enumerate(row)
            ])
        return cls(entries, desc)


class InvariantPair:
    """The pair (a_1..a_n, b_0..b_{n-1}) with its parity constraints.

    Both arrays live in O_E, and the i-th entry must satisfy
    sigma(x) = (-1)^i x, where a is indexed from 1 and b from 0.
    Everything downstream (orders, lattice counts, the group variant)
    consumes only this pair, never the matrix it came from.
    """

    __slots__ = ("n", "a", "b", "desc")

    def __init__(self, a, b, desc):
        if len(a) != len(b) or not a:
            raise ValueError("a and b must have equal positive length")
        self.n = len(a)
        self.a = list(a)
        self.b = list(b)
        self.desc = desc

    def validate(self):
        """Raise SchemaError naming the offending entry, or return self.

        Parity violations are only reported on digits actually known at
        the working precision; integrality requires valuation >= 0 in
        both components.
        """
        for name, arr, offset in (("a", self.a, 1), ("b", self.b, 0)):
            for idx, x in enumerate(arr):
                # subscripts follow the math convention: a_1..a_n, b_0..b_(n-1)
                sub = idx + offset
                if not x.is_integral():
                    raise SchemaError(f"{name}[{sub}]", "integrality: valuation is negative")
                bad = x.re if sub % 2 == 1 else x.im
                if not _vanishes(bad):
                    raise SchemaError(
                        f"{name}[{sub}]",
                        f"parity: sigma must act by (-1)^{sub}")
        return self

    def prec(self):
        """Shared working precision: None when every entry is exact."""
        best = None
        for x in self.a + self.b:
            p = x.prec
            if p is not None and (best is None or p < best):
                best = p
        return best

    def truncated(self, N):
        return InvariantPair(
            [x.truncated(N) for x in self.a],
            [x.truncated(N) for x in self.b],
            self.desc)

    def to_obj(self):
        return {
            "n": self.n,
            "a": [eelem_to_obj(x) for x in self.a],
            "b": [eelem_to_obj(x) for x in self.b],
        }

    @classmethod
    def from_obj(cls, obj, desc, field="invariants"):
        if not isinstance(obj, dict):
            raise SchemaError(field, "expected an object")
        n = obj.get("n")
        if not isinstance(n, int) or n < 1:
            raise SchemaError(field + ".n", "expected a positive integer")
        out = {}
        for name in ("a", "b"):
            arr = obj.get(name)
            if not isinstance(arr, list) or len(arr) != n:
                raise SchemaError(field + f".{name}", f"expected an array of {n} elements")
            out[name] = [
                eelem_from_obj(cell, desc, f"{name}[{idx}]")
                for idx, cell in enumerate(arr)
            ]
        return cls(out["a"], out["b"], desc)


class RegularityReport:
    __slots__ = ("val_disc", "val_delta", "strongly_regular", "eta_delta")

    def __init__(self, val_disc, val_delta, strongly_regular, eta_delta):
        self.val_disc = val_disc
        self.val_delta = val_delta
        self.strongly_regular = strongly_regular
        self.eta_delta = eta_delta

    def __repr__(self):
        return (f"RegularityReport(val_disc={self.val_disc}, val_delta={self.val_delta}, "
                f"strongly_regular={self.strongly_regular}, eta_delta={self.eta_delta})")


def char_poly_coeffs(A):
    """Signed characteristic coefficients a_1..a_n of the matrix A.

    det(t*id - A) = t^n + sum_i (-1)^i a_i t^(n-i).  Division-free, so
    exact entries give exact coefficients in every odd characteristic.
    """
    zero = EElem.zero(A.desc)
    one = EElem.one(A.desc)
    return char_coeffs(A.entries, zero, one)


def moment_vector(A):
    """Moments b_i = e0*(A^i e0) for i = 0..n-1; b_0 = 1 always."""
    vec = A.e0()
    out = []
    for _ in range(A.n):
        out.append(vec[A.n - 1])
        vec = A.apply(vec)
    return out


def invariants_of(A):
    return InvariantPair(char_poly_coeffs(A), moment_vector(A), A.desc)


def moment_sequence(ab, count):
    """Values b'(t^m) for m = 0..count-1.

    For m < n these are the given b_m; beyond that t^m is reduced
    modulo the characteristic polynomial, giving the linear recurrence
    s_m = sum_{i=1..n} (-1)^(i+1) a_i s_(m-i).
    """
    n = ab.n
    s = list(ab.b[:count])
    zero = EElem.zero(ab.desc)
    for m in range(n, count):
        acc = zero
        for i in range(1, n + 1):
            term = ab.a[i - 1] * s[m - i]
            acc = acc + term if i % 2 == 1 else acc - term
        s.append(acc)
    return s


def delta_invariant(ab):
    """Delta = det (b'(t^{i+j}))_{0<=i,j<n}; lands in F.

    The imaginary component cancels because sigma(s_m) = (-1)^m s_m
    makes the Gram matrix Hermitian-symmetric with real determinant;
    a nonvanishing imaginary digit would mean corrupted input, so it
    is asserted away rather than reported.
    """
    s = moment_sequence(ab, 2 * ab.n - 1)
    gram = [[s[i + j] for j in range(ab.n)] for i in range(ab.n)]
    zero = EElem.zero(ab.desc)
    one = EElem.one(ab.desc)
    delta = mat_det(gram, zero, one)
    assert _vanishes(delta.im)
    return delta


def v_invariant(A):
    """Valuation of det of the covector matrix (e0* A^i)_{i<n}.

    Raises NotStronglyRegular when the rows are dependent at the
    working precision (exact zero or zero at precision alike).
    """
    zero = EElem.zero(A.desc)
    one = EElem.one(A.desc)
    cov = [zero] * (A.n - 1) + [one]
    rows = []
    for _ in range(A.n):
        rows.append(cov)
        cov = A.apply_covector(cov)
    det = mat_det(rows, zero, one)
    v = det.val()
    if v is None:
        raise NotStronglyRegular(
            "covector rows e0*, e0*A, ... are dependent at working precision")
    return v


def strong_regularity(ab):
    """Joint regularity report for disc(P_a) and Delta_{a,b}.

    Exact zeros make the instance genuinely singular; zeros at the
    working precision are inconclusive and raise Indeterminate with a
    doubled-precision hint.
    """
    res = char_poly_disc(ab)
    delta = delta_invariant(ab)

    def classify(x, what):
        if x.val() is not None:
            return x.val()
        if x.is_zero():
            return None
        cur = ab.prec() or 0
        raise Indeterminate(f"{what} vanishes at working precision", needed=2 * max(cur, 1))

    val_disc = classify(res, "disc(P_a)")
    val_delta = classify(delta, "Delta")
    if val_disc is None or val_delta is None:
        return RegularityReport(val_disc, val_delta, False, None)
    return RegularityReport(val_disc, val_delta, True, eta(delta, ab.desc))


def char_poly_disc(ab):
    """disc(P_a) = (-1)^(n(n-1)/2) Res(P_a, P_a') for the monic P_a.

    The derivative multiplies coefficients by integers <= n < p, which
    stay invertible scalars; even when p <= n the Sylvester determinant
    still computes the right resultant since P_a is monic.
    """
    from .linalg import sylvester_resultant
    n = ab.n
    zero = EElem.zero(ab.desc)
    one = EElem.one(ab.desc)
    if n == 1:
        return one
    # P_a in descending coefficients: t^n + sum (-1)^i a_i t^(n-i).
    p = [one]
    for i in range(1, n + 1):
        p.append(ab.a[i - 1] if i % 2 == 0 else -ab.a[i - 1])
    dp = [p[i].scaled((n - i) % ab.desc.p) for i in range(n)]
    res = sylvester_resultant(p, dp, zero, one)
    return -res if (n * (n - 1) // 2) % 2 == 1 else res


def membership_check(A, which):
    """Predicates for the four twisted spaces, at working precision.

    s_n: A + sigma(A) = 0          u_n: A + sigma(A)^T = 0
    S_n: integral and A sigma(A) = 1    U_n: integral and A sigma(A)^T = 1
    The Hermitian form on V is the identity Gram matrix, so the
    adjoint A^# is simply the conjugate transpose.
    """
    n = A.n
    zero = EElem.zero(A.desc)
    one = EElem.one(A.desc)
    sa = A.sigma()
    if which in ("u_n", "U_n"):
        sa = sa.transpose()
    if which in ("s_n", "u_n"):
        return all(
            _agrees_zero(A.entries[i][j] + sa.entries[i][j])
            for i in range(n) for j in range(n))
    if which in ("S_n", "U_n"):
        if not (A.is_integral() and sa.is_integral()):
            return False
        from .linalg import mat_mul
        prod = mat_mul(A.entries, sa.entries, zero)
        return all(
            _agrees_zero(prod[i][j] - (one if i == j else zero))
            for i in range(n) for j in range(n))
    raise ValueError(f"unknown space {which!r}")


def _agrees_zero(x):
    return _vanishes(x.re) and _vanishes(x.im)


def matching_check(x, y):
    """True iff the two pairs share all invariants at the joint precision."""
    if x.n != y.n or x.desc != y.desc:
        return False
    return all(p.agrees_with(q) for p, q in zip(x.a + x.b, y.a + y.b))


def variant_transport(ab, jelem):
    """Twist real invariants into parity-correct ones: x_i -> j^i x_i.

    Input arrays must be real (the gl/h variant); j is the purely
    imaginary unit.  Delta picks up the unit factor (j^2)^(n(n-1)/2),
    so its valuation and eta class survive the twist untouched.
    """
    one = EElem.one(ab.desc)
    jp = [one]
    for _ in range(ab.n):
        jp.append(jp[-1] * jelem)
    for x in ab.a + ab.b:
        assert _vanishes(x.im), "variant_transport expects real invariants"
    a = [jp[i] * ab.a[i - 1] for i in range(1, ab.n + 1)]
    b = [jp[i] * ab.b[i] for i in range(ab.n)]
    return InvariantPair(a, b, ab.desc)
