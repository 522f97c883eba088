"""Exact arithmetic in F = F_q((pi)) and its quadratic etale extension E.

Representation conventions:

* ``TruncSeries`` holds a Laurent series sum coeffs[i] * pi^(shift+i) with
  coefficients in k = F_q (indices into a GFTable).  ``prec`` is the
  absolute precision: the value is known modulo pi^prec.  ``prec=None``
  means the series is exact, i.e. a genuine Laurent polynomial.  All
  arithmetic propagates the minimum precision and never reads unknown
  coefficients.

* E is either split (F x F) or inert (the unramified quadratic extension
  with residue field k' = k[x]/(x^2 - d), d the canonical nonresidue).
  Both cases share the decomposition E = F + F*j with j purely imaginary
  and j^2 = d (inert) or j^2 = 1 (split, j = (1,-1)).  ``EElem`` stores the
  pair (re, im) with value re + j*im; sigma is im-negation, which matches
  the coefficientwise residue Frobenius in the inert case and the swap
  (u, v) -> (v, u) in the split case.  The split components are
  u = re + im and v = re - im.

Element validity such as integrality or sigma-parity is always a check on
this normal form, so one code path serves both extension kinds.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import EtaUndefined, NotAUnit, PrecisionExhausted, SchemaError
from .gf import gf_by_order, gf_table

SPLIT = "split"
INERT = "inert"

DEFAULT_PRECISION_CAP = 256


class FieldDesc:
    """Description of the pair (F, E): residue field size and extension kind."""

    __slots__ = ("p", "m", "q", "ext", "k", "jsq")

    def __init__(self, p, m, ext):
        assert ext in (SPLIT, INERT)
        self.p = p
        self.m = m
        self.k = gf_table(p, m)
        self.q = self.k.q
        self.ext = ext
        # j^2 as a residue constant; eta of its class is -1 exactly when inert
        self.jsq = self.k.least_nonresidue() if ext == INERT else 1

    @property
    def is_split(self):
        return self.ext == SPLIT

    def __repr__(self):
        return f"FieldDesc(q={self.q}, ext={self.ext!r})"

    def __eq__(self, other):
        return (isinstance(other, FieldDesc)
                and (self.p, self.m, self.ext) == (other.p, other.m, other.ext))

    def __hash__(self):
        return hash((self.p, self.m, self.ext))


@lru_cache(maxsize=None)
def field_desc(q, ext):
    if ext not in (SPLIT, INERT):
        raise SchemaError("ext", "expected 'split' or 'inert'")
    try:
        k = gf_by_order(q)
    except (AssertionError, ValueError, TypeError) as exc:
        raise SchemaError("q", str(exc)) from None
    return FieldDesc(k.p, k.m, ext)


class TruncSeries:
    """Laurent series over k at tracked absolute precision.

    Normal form: ``coeffs`` is a tuple with nonzero first and last entries
    (leading zeros are folded into ``shift``; trailing known-zeros are
    implicit).  The zero series has ``coeffs = ()`` and ``shift = 0``.
    """

    __slots__ = ("k", "shift", "coeffs", "prec")

    def __init__(self, k, coeffs, shift=0, prec=None):
        coeffs = list(coeffs)
        if prec is not None and shift + len(coeffs) > prec:
            # coefficients at or beyond the precision are meaningless
            del coeffs[max(prec - shift, 0):]
        # strip leading zeros into the shift; trailing zeros are implicit
        i, n = 0, len(coeffs)
        while i < n and coeffs[i] == 0:
            i += 1
        j = n
        while j > i and coeffs[j - 1] == 0:
            j -= 1
        self.k = k
        self.coeffs = tuple(coeffs[i:j])
        self.shift = shift + i if j > i else 0
        self.prec = prec

    # -- constructors ------------------------------------------------

    @staticmethod
    def zero(k, prec=None):
        return TruncSeries(k, (), 0, prec)

    @staticmethod
    def const(k, c, prec=None):
        assert 0 <= c < k.q
        return TruncSeries(k, (c,), 0, prec)

    @staticmethod
    def one(k, prec=None):
        return TruncSeries(k, (1,), 0, prec)

    @staticmethod
    def pi_pow(k, e, prec=None):
        return TruncSeries(k, (1,), e, prec)

    # -- structure ---------------------------------------------------

    @property
    def is_exact(self):
        return self.prec is None

    def is_zero(self):
        """True if indistinguishable from 0 (exactly 0 when exact)."""
        return not self.coeffs

    def val(self):
        """Valuation, or None when the series is 0 to its precision.

        Exact zero also returns None (valuation +infinity).
        """
        return self.shift if self.coeffs else None

    def coeff_at(self, i):
        if self.coeffs:
            if i < self.shift:
                return 0
            if i < self.shift + len(self.coeffs):
                return self.coeffs[i - self.shift]
        if self.prec is None or i < self.prec:
            return 0
        raise PrecisionExhausted(f"coefficient of pi^{i} unknown at precision {self.prec}")

    def truncated(self, prec):
        if self.prec is not None and self.prec <= prec:
            return self
        return TruncSeries(self.k, self.coeffs, self.shift, prec)

    def shifted(self, e):
        """Multiplication by pi^e (exactness preserved)."""
        prec = None if self.prec is None else self.prec + e
        return TruncSeries(self.k, self.coeffs, self.shift + e, prec)

    def is_integral(self):
        v = self.val()
        return v is None or v >= 0

    # -- ring ops ----------------------------------------------------

    def _join_prec(self, other):
        if self.prec is None:
            return other.prec
        if other.prec is None:
            return self.prec
        return min(self.prec, other.prec)

    def __add__(self, other):
        assert self.k is other.k
        prec = self._join_prec(other)
        if not self.coeffs:
            return other if prec is None else other.truncated(prec)
        if not other.coeffs:
            return self if prec is None else self.truncated(prec)
        lo = min(self.shift, other.shift)
        hi = max(self.shift + len(self.coeffs), other.shift + len(other.coeffs))
        if prec is not None:
            hi = min(hi, prec)
        add = self.k.add
        out = [0] * max(hi - lo, 0)
        for i, c in enumerate(self.coeffs):
            p = self.shift + i - lo
            if 0 <= p < len(out):
                out[p] = c
        for i, c in enumerate(other.coeffs):
            p = other.shift + i - lo
            if 0 <= p < len(out):
                out[p] = add[out[p]][c]
        return TruncSeries(self.k, out, lo, prec)

    def __neg__(self):
        neg = self.k.neg
        return TruncSeries(self.k, tuple(neg[c] for c in self.coeffs),
                           self.shift, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        assert self.k is other.k
        # known modulo pi^min(val(x)+prec(y), val(y)+prec(x))
        if self.prec is None and other.prec is None:
            prec = None
        else:
            vx = self.shift if self.coeffs else self.prec
            vy = other.shift if other.coeffs else other.prec
            cands = []
            if other.prec is not None:
                cands.append((vx if vx is not None else 0) + other.prec)
            if self.prec is not None:
                cands.append((vy if vy is not None else 0) + self.prec)
            prec = min(cands)
        if not self.coeffs or not other.coeffs:
            return TruncSeries.zero(self.k, prec)
        add, mul = self.k.add, self.k.mul
        n = len(self.coeffs) + len(other.coeffs) - 1
        lo = self.shift + other.shift
        if prec is not None:
            n = min(n, prec - lo)
            if n <= 0:
                return TruncSeries.zero(self.k, prec)
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if a:
                row = mul[a]
                for j, b in enumerate(other.coeffs):
                    p = i + j
                    if p >= n:
                        break
                    if b:
                        out[p] = add[out[p]][row[b]]
        return TruncSeries(self.k, out, lo, prec)

    def scaled(self, c):
        """Multiplication by the residue constant c (an index into k)."""
        assert 0 <= c < self.k.q
        if c == 0:
            return TruncSeries.zero(self.k, self.prec)
        row = self.k.mul[c]
        return TruncSeries(self.k, tuple(row[a] for a in self.coeffs),
                           self.shift, self.prec)

    def inv(self, prec=None, laurent=False):
        """Multiplicative inverse.

        A unit (val 0) inverts directly; positive or negative valuation
        requires ``laurent=True`` and inverts pi^v * u as pi^(-v) * u^(-1).
        Exact inputs need ``prec`` unless they are monomials (whose inverse
        is again exact).
        """
        v = self.val()
        if v is None:
            if self.is_exact:
                raise NotAUnit("exact zero has no inverse")
            raise PrecisionExhausted("cannot invert a series that is 0 at working precision")
        if v != 0 and not laurent:
            raise NotAUnit(f"valuation {v} element inverted outside Laurent mode")
        if self.is_exact and len(self.coeffs) == 1:
            return TruncSeries(self.k, (self.k.inv[self.coeffs[0]],), -v, None)
        # rel = digits of the unit part we can produce; result prec = rel - v
        if self.is_exact:
            if prec is None:
                raise ValueError("inverting a non-monomial exact series needs a precision")
            rel = prec + v
        else:
            rel = self.prec - v
            if prec is not None:
                rel = min(rel, prec + v)
        if rel <= 0:
            raise PrecisionExhausted("no significant digits available for inversion")
        add, mul, kinv, neg = self.k.add, self.k.mul, self.k.inv, self.k.neg
        u0 = kinv[self.coeffs[0]]
        out = [u0] + [0] * (rel - 1)
        for i in range(1, rel):
            # coefficient i of u * out must vanish
            acc = 0
            for t in range(1, min(i, len(self.coeffs) - 1) + 1):
                a = self.coeffs[t]
                if a:
                    acc = add[acc][mul[a][out[i - t]]]
            out[i] = mul[u0][neg[acc]]
        return TruncSeries(self.k, out, -v, rel - v)

    # -- comparison --------------------------------------------------

    def agrees_with(self, other):
        """Equality to the shared precision (exact equality when both exact)."""
        d = self - other
        return not d.coeffs

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.k is other.k and self.shift == other.shift
                and self.coeffs == other.coeffs and self.prec == other.prec)

    def __hash__(self):
        return hash((self.shift, self.coeffs, self.prec))

    def __repr__(self):
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for i, c in enumerate(self.coeffs):
                if c:
                    e = self.shift + i
                    parts.append(f"{c}" if e == 0 else f"{c}*pi^{e}")
            body = " + ".join(parts)
        tail = "" if self.prec is None else f" + O(pi^{self.prec})"
        return f"<{body}{tail}>"


class EElem:
    """Element of E (or of F, when the imaginary part vanishes)."""

    __slots__ = ("desc", "re", "im")

    def __init__(self, desc, re, im):
        assert re.k is desc.k and im.k is desc.k
        self.desc = desc
        self.re = re
        self.im = im

    # -- constructors ------------------------------------------------

    @staticmethod
    def from_real(desc, series):
        return EElem(desc, series, TruncSeries.zero(desc.k, series.prec))

    @staticmethod
    def zero(desc, prec=None):
        z = TruncSeries.zero(desc.k, prec)
        return EElem(desc, z, z)

    @staticmethod
    def one(desc, prec=None):
        return EElem(desc, TruncSeries.one(desc.k, prec),
                     TruncSeries.zero(desc.k, prec))

    @staticmethod
    def from_split_pair(desc, u, v):
        """Element (u, v) of the split algebra F x F."""
        assert desc.is_split
        inv2 = desc.k.inv[2 % desc.q]
        re = (u + v).scaled(inv2)
        im = (u - v).scaled(inv2)
        return EElem(desc, re, im)

    def split_pair(self):
        assert self.desc.is_split
        return self.re + self.im, self.re - self.im

    # -- structure ---------------------------------------------------

    def sigma(self):
        """Galois involution: frobenius on coefficients (inert), swap (split)."""
        return EElem(self.desc, self.re, -self.im)

    def is_real(self):
        return self.im.is_zero()

    def is_imaginary(self):
        return self.re.is_zero()

    def real_series(self):
        assert self.is_real(), "element has a nonzero imaginary part"
        return self.re

    def val(self):
        """min of the component valuations; None when 0 at working precision."""
        vr, vi = self.re.val(), self.im.val()
        if vr is None:
            return vi
        if vi is None:
            return vr
        return min(vr, vi)

    def is_integral(self):
        v = self.val()
        return v is None or v >= 0

    def is_zero(self):
        return self.re.is_zero() and self.im.is_zero()

    @property
    def prec(self):
        pr, pi_ = self.re.prec, self.im.prec
        if pr is None:
            return pi_
        if pi_ is None:
            return pr
        return min(pr, pi_)

    def truncated(self, prec):
        return EElem(self.desc, self.re.truncated(prec), self.im.truncated(prec))

    # -- ring ops ----------------------------------------------------

    def __add__(self, other):
        assert self.desc == other.desc
        return EElem(self.desc, self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return EElem(self.desc, self.re - other.re, self.im - other.im)

    def __neg__(self):
        return EElem(self.desc, -self.re, -self.im)

    def __mul__(self, other):
        assert self.desc == other.desc
        d = self.desc.jsq
        rr = self.re * other.re
        ii = self.im * other.im
        ri = self.re * other.im
        ir = self.im * other.re
        return EElem(self.desc, rr + ii.scaled(d), ri + ir)

    def scaled(self, c):
        return EElem(self.desc, self.re.scaled(c), self.im.scaled(c))

    def norm(self):
        """x * sigma(x) as a real series."""
        return self.re * self.re - (self.im * self.im).scaled(self.desc.jsq)

    def inv(self, prec=None, laurent=False):
        """sigma(x) / norm(x); same unit and Laurent rules as TruncSeries.inv."""
        nm = self.norm()
        if nm.is_zero():
            if nm.is_exact:
                raise NotAUnit("zero divisor (norm is exactly 0)")
            raise PrecisionExhausted("norm is 0 at working precision")
        ninv = nm.inv(prec=prec, laurent=laurent)
        s = self.sigma()
        return EElem(self.desc, s.re * ninv, s.im * ninv)

    def agrees_with(self, other):
        return self.re.agrees_with(other.re) and self.im.agrees_with(other.im)

    def __eq__(self, other):
        if not isinstance(other, EElem):
            return NotImplemented
        return self.desc == other.desc and self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"EE({self.re!r} + j*{self.im!r})"


@dataclass(frozen=True)
class ImaginaryUnit:
    """The distinguished purely imaginary unit j with j^2 = jsq in O_F^x."""

    elem: EElem

    @property
    def square_class(self):
        return self.elem.desc.jsq


def sigma_and_imaginary(desc):
    """The involution of E/F together with the canonical imaginary unit.

    Inert: sigma is the coefficientwise residue Frobenius and j = x with
    x^2 = d, d the canonical nonresidue.  Split: sigma is the component
    swap and j = (1, -1).
    """
    j = EElem(desc, TruncSeries.zero(desc.k), TruncSeries.one(desc.k))
    return (lambda x: x.sigma()), ImaginaryUnit(j)


def eta(x, desc=None):
    """Quadratic character of F^x attached to E/F.

    Split extensions are norms everywhere: eta = +1.  Inert: eta(x) =
    (-1)^val(x) since every residue unit is a norm from the unramified
    extension.  Raises EtaUndefined when the valuation cannot be read off.
    """
    if isinstance(x, EElem):
        desc = x.desc
        x = x.real_series()
    assert desc is not None
    v = x.val()
    if v is None:
        raise EtaUndefined("element is 0 at working precision; eta needs its valuation")
    if desc.is_split:
        return 1
    return -1 if v % 2 else 1


def valuation_and_eta(x, desc=None):
    """(valuation, eta); valuation None means 0 to the working precision."""
    if isinstance(x, EElem):
        desc = x.desc
        x = x.real_series()
    v = x.val()
    if v is None:
        return None, None
    return v, eta(x, desc)


# -- serialization ---------------------------------------------------
#
# Series: {"shift": s, "coeffs": [[digits..], ..]} where each inner list is
# the base-p digit vector of one residue coefficient: length m over k,
# length 2m over k' (the k-part digits then the x-part digits).  EElem:
# {"inert": series} with k' coefficients, or {"split": [series_u, series_v]}
# with k coefficients.  Exactness is implied: serialized coefficients are
# the complete list of nonzero ones.


def series_to_obj(s):
    assert s.is_exact, "only exact series serialize losslessly"
    k = s.k
    return {"shift": s.shift if s.coeffs else 0,
            "coeffs": [k.digits(c) for c in s.coeffs]}


def series_from_obj(obj, k, field=""):
    if not isinstance(obj, dict) or "coeffs" not in obj:
        raise SchemaError(field, "expected a series object with 'coeffs'")
    shift = obj.get("shift", 0)
    if not isinstance(shift, int):
        raise SchemaError(field + ".shift", "must be an integer")
    coeffs = []
    for i, ds in enumerate(obj["coeffs"]):
        if not (isinstance(ds, list) and len(ds) == k.m
                and all(isinstance(d, int) and 0 <= d < k.p for d in ds)):
            raise SchemaError(f"{field}.coeffs[{i}]",
                              f"expected {k.m} base-{k.p} digits")
        coeffs.append(k.from_digits(ds))
    return TruncSeries(k, coeffs, shift, None)


def eelem_to_obj(x):
    desc = x.desc
    k = desc.k
    assert x.re.is_exact and x.im.is_exact, "only exact elements serialize losslessly"
    if desc.is_split:
        u, v = x.split_pair()
        return {"split": [series_to_obj(u), series_to_obj(v)]}
    # interleave (re, im) coefficient pairs as 2m-digit vectors over k'
    lo_candidates = [s.shift for s in (x.re, x.im) if s.coeffs]
    lo = min(lo_candidates) if lo_candidates else 0
    hi = max([s.shift + len(s.coeffs) for s in (x.re, x.im) if s.coeffs], default=lo)
    coeffs = []
    for i in range(lo, hi):
        coeffs.append(k.digits(x.re.coeff_at(i)) + k.digits(x.im.coeff_at(i)))
    return {"inert": {"shift": lo if coeffs else 0, "coeffs": coeffs}}


def eelem_from_obj(obj, desc, field=""):
    k = desc.k
    if desc.is_split:
        if not (isinstance(obj, dict) and "split" in obj):
            raise SchemaError(field, "expected {'split': [series, series]}")
        pair = obj["split"]
        if not (isinstance(pair, list) and len(pair) == 2):
            raise SchemaError(field + ".split", "expected two component series")
        u = series_from_obj(pair[0], k, field + ".split[0]")
        v = series_from_obj(pair[1], k, field + ".split[1]")
        return EElem.from_split_pair(desc, u, v)
    if not (isinstance(obj, dict) and "inert" in obj):
        raise SchemaError(field, "expected {'inert': series}")
    sobj = obj["inert"]
    if not isinstance(sobj, dict) or "coeffs" not in sobj:
        raise SchemaError(field + ".inert", "expected a series object")
    shift = sobj.get("shift", 0)
    if not isinstance(shift, int):
        raise SchemaError(field + ".inert.shift", "must be an integer")
    res, ims = [], []
    for i, ds in enumerate(sobj["coeffs"]):
        if not (isinstance(ds, list) and len(ds) == 2 * k.m
                and all(isinstance(d, int) and 0 <= d < k.p for d in ds)):
            raise SchemaError(f"{field}.inert.coeffs[{i}]",
                              f"expected {2 * k.m} base-{k.p} digits")
        res.append(k.from_digits(ds[:k.m]))
        ims.append(k.from_digits(ds[k.m:]))
    return EElem(desc, TruncSeries(k, res, shift, None),
                 TruncSeries(k, ims, shift, None))
