"""Dense univariate polynomials over F_p or F_{p^2}.

Coefficients are stored ascending by degree with no trailing zeros; the
zero polynomial has an empty coefficient tuple and degree -inf.  Over the
prime field coefficients are plain ints and multiplication switches to an
exact numpy convolution once operands are large; over the quadratic
extension a straightforward schoolbook path is used (extension polynomials
only ever appear in short variable-scaling computations).

The absolute value |f| = |T|^deg(f) of the ambient power series field is
represented purely by the integer degree; -inf for the zero polynomial
makes max/sum comparisons work unchanged.
"""

from typing import Iterable, Union

import numpy as np

from .fields import GF, ExtElement, PrimeField, QuadraticExt

NEG_INF = float("-inf")

_SCHOOLBOOK_CUTOFF = 64

Field = Union[PrimeField, QuadraticExt]


class Polynomial:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable = (), *, _trusted=False):
        if _trusted:
            self.field = field
            self.coeffs = coeffs
            return
        cs = [field(c) for c in coeffs]
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def _make(cls, field, cs: list) -> "Polynomial":
        # internal: cs already reduced mod p, only needs trailing-zero strip
        while cs and not cs[-1]:
            cs.pop()
        return cls(field, tuple(cs), _trusted=True)

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, field) -> "Polynomial":
        return cls(field, (), _trusted=True)

    @classmethod
    def one(cls, field) -> "Polynomial":
        return cls(field, (field.one(),), _trusted=True)

    @classmethod
    def constant(cls, field, c) -> "Polynomial":
        return cls(field, (c,))

    @classmethod
    def x(cls, field) -> "Polynomial":
        return cls(field, (field.zero(), field.one()), _trusted=True)

    @classmethod
    def monomial(cls, field, c, n: int) -> "Polynomial":
        c = field(c)
        if field.is_zero(c):
            return cls.zero(field)
        return cls(field, (field.zero(),) * n + (c,), _trusted=True)

    # -- basics ----------------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading_coefficient(self):
        if not self.coeffs:
            raise ValueError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def constant_coefficient(self):
        return self.coeffs[0] if self.coeffs else self.field.zero()

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"Polynomial({self.field!r}, {self.format()!r})"

    def __str__(self):
        return self.format()

    # -- ring operations ---------------------------------------------------------

    def __add__(self, other):
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return Polynomial(f, out)

    def __sub__(self, other):
        f = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        z = f.zero()
        out = [
            f.sub(a[i] if i < len(a) else z, b[i] if i < len(b) else z)
            for i in range(n)
        ]
        return Polynomial(f, out)

    def __neg__(self):
        f = self.field
        return Polynomial(f, tuple(f.neg(c) for c in self.coeffs), _trusted=True)

    def scaled(self, c) -> "Polynomial":
        f = self.field
        c = f(c)
        if f.is_zero(c):
            return Polynomial.zero(f)
        return Polynomial(f, [f.mul(a, c) for a in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial.zero(self.field)
        if isinstance(self.field, PrimeField):
            return self._mul_prime(other)
        return self._mul_generic(other)

    def _mul_prime(self, other):
        a, b = self.coeffs, other.coeffs
        p = self.field.p
        la, lb = len(a), len(b)
        if la + lb > _SCHOOLBOOK_CUTOFF and (p - 1) * (p - 1) * min(la, lb) < (1 << 62):
            out = np.convolve(
                np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
            ) % p
            return Polynomial._make(self.field, out.tolist())
        out = [0] * (la + lb - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return Polynomial._make(self.field, [c % p for c in out])

    def _mul_generic(self, other):
        f = self.field
        a, b = self.coeffs, other.coeffs
        out = [f.zero()] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not f.is_zero(ai):
                for j, bj in enumerate(b):
                    out[i + j] = f.add(out[i + j], f.mul(ai, bj))
        return Polynomial(f, out)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial powers are not defined")
        out = Polynomial.one(self.field)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def pow_frobenius(self) -> "Polynomial":
        """f(T)^p computed as f(T^p); valid because the coefficients lie in F_p."""
        if not isinstance(self.field, PrimeField):
            raise TypeError("Frobenius re-indexing requires prime-field coefficients")
        p = self.field.p
        if not self.coeffs:
            return self
        out = [0] * ((len(self.coeffs) - 1) * p + 1)
        for i, c in enumerate(self.coeffs):
            out[i * p] = c
        return Polynomial._make(self.field, out)

    # -- Euclidean structure --------------------------------------------------------

    def __divmod__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        f = self.field
        if len(self.coeffs) < len(other.coeffs):
            return Polynomial.zero(f), self
        if isinstance(f, PrimeField):
            return self._divmod_prime(other)
        return self._divmod_generic(other)

    def _divmod_prime(self, other):
        f = self.field
        p = f.p
        g = other.coeffs
        m = len(g) - 1
        inv_lc = f.inv(g[-1])
        rem = list(self.coeffs)
        if m >= 128 and len(rem) - m >= 64:
            return self._divmod_prime_np(other, inv_lc)
        q = [0] * (len(rem) - m)
        for i in range(len(rem) - 1, m - 1, -1):
            c = rem[i]
            if c:
                c = c * inv_lc % p
                q[i - m] = c
                for j in range(m):
                    rem[i - m + j] = (rem[i - m + j] - c * g[j]) % p
                rem[i] = 0
        return Polynomial._make(f, q), Polynomial._make(f, rem[:m])

    def _divmod_prime_np(self, other, inv_lc):
        f = self.field
        p = f.p
        g = np.asarray(other.coeffs[:-1], dtype=np.int64)
        m = len(other.coeffs) - 1
        rem = np.asarray(self.coeffs, dtype=np.int64)
        q = [0] * (len(rem) - m)
        for i in range(len(rem) - 1, m - 1, -1):
            c = int(rem[i])
            if c:
                c = c * inv_lc % p
                q[i - m] = c
                rem[i - m : i] = (rem[i - m : i] - c * g) % p
        return Polynomial._make(f, q), Polynomial._make(f, rem[:m].tolist())

    def _divmod_generic(self, other):
        f = self.field
        g = other.coeffs
        m = len(g) - 1
        inv_lc = f.inv(g[-1])
        rem = list(self.coeffs)
        q = [f.zero()] * (len(rem) - m)
        for i in range(len(rem) - 1, m - 1, -1):
            c = rem[i]
            if not f.is_zero(c):
                c = f.mul(c, inv_lc)
                q[i - m] = c
                for j in range(m):
                    rem[i - m + j] = f.sub(rem[i - m + j], f.mul(c, g[j]))
                rem[i] = f.zero()
        return Polynomial(f, q), Polynomial(f, rem[:m])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    # -- evaluation and reshaping ------------------------------------------------------

    def __call__(self, x):
        f = self.field
        acc = f.zero()
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def monic(self) -> "Polynomial":
        if self.is_zero():
            raise ValueError("the zero polynomial cannot be made monic")
        return self.scaled(self.field.inv(self.leading_coefficient()))

    def format(self, var: str = "T") -> str:
        """Human-readable form like '9*T^3 + 8*T', terms descending."""
        if not self.coeffs:
            return "0"
        parts = []
        for n in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[n]
            if self.field.is_zero(c):
                continue
            cs = _coeff_str(c)
            if n == 0:
                parts.append(cs)
            else:
                tv = var if n == 1 else f"{var}^{n}"
                parts.append(tv if cs == "1" else f"{cs}*{tv}")
        return " + ".join(parts)

    def to_json_dict(self) -> dict:
        ext = isinstance(self.field, QuadraticExt)
        if ext:
            coeffs = [[c.a0, c.a1] for c in self.coeffs]
        else:
            coeffs = list(self.coeffs)
        return {"p": self.field.p, "ext": ext, "coeffs": coeffs}

    @staticmethod
    def from_json_dict(d: dict) -> "Polynomial":
        base = GF(d["p"])
        if d.get("ext"):
            field = base.ext()
            return Polynomial(field, [ExtElement(a0, a1) for a0, a1 in d["coeffs"]])
        return Polynomial(base, d["coeffs"])


def _coeff_str(c) -> str:
    if isinstance(c, ExtElement):
        if c.a1 == 0:
            return str(c.a0)
        if c.a0 == 0:
            return f"{c.a1}*w" if c.a1 != 1 else "w"
        return f"({c.a0} + {c.a1}*w)"
    return str(c)


# -- free functions on polynomials ------------------------------------------------


def gcd_monic(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic greatest common divisor; undefined (ValueError) for (0, 0)."""
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def content(polys) -> Polynomial:
    """Monic gcd of a family of polynomials, ignoring zeros."""
    acc = None
    for f in polys:
        if f.is_zero():
            continue
        acc = f if acc is None else gcd_monic(acc, f)
        if acc.degree == 0:
            return Polynomial.one(f.field)
    if acc is None:
        raise ValueError("content of an all-zero family is undefined")
    return acc.monic()


def formal_derivative(f: Polynomial) -> Polynomial:
    fld = f.field
    return Polynomial(fld, [fld.mul(fld(n), c) for n, c in enumerate(f.coeffs)][1:])


def formal_integral(f: Polynomial) -> Polynomial:
    """The primitive of f with zero constant term.

    Each monomial c*T^n maps to c*T^(n+1)/(n+1); a monomial with p | n+1
    has no primitive in F_p[T] and raises ValueError.
    """
    fld = f.field
    if not isinstance(fld, PrimeField):
        raise TypeError("formal integration is defined over the prime field")
    p = fld.p
    out = [0] * (len(f.coeffs) + 1)
    for n, c in enumerate(f.coeffs):
        if c:
            if (n + 1) % p == 0:
                raise ValueError(f"non-integrable monomial T^{n} (p divides {n + 1})")
            out[n + 1] = c * fld.inv((n + 1) % p) % p
    return Polynomial._make(fld, out)


def scale_variable(f: Polynomial, v) -> Polynomial:
    """Substitute T -> v*T, multiplying the T^n coefficient by v^n.

    When v is an ExtElement the result lives over F_{p^2} even if f does
    not; use to_prime_field to cast back once coefficients are known to
    land in F_p.
    """
    if isinstance(v, ExtElement):
        if isinstance(f.field, QuadraticExt):
            ext = f.field
            coeffs = f.coeffs
        else:
            ext = f.field.ext()
            coeffs = [ext.lift(c) for c in f.coeffs]
        if ext.is_zero(v):
            raise ValueError("degenerate scaling by v = 0")
        out, power = [], ext.one()
        for c in coeffs:
            out.append(ext.mul(c, power))
            power = ext.mul(power, v)
        return Polynomial(ext, out)
    fld = f.field
    v = fld(v)
    if fld.is_zero(v):
        raise ValueError("degenerate scaling by v = 0")
    out, power = [], fld.one()
    for c in f.coeffs:
        out.append(fld.mul(c, power))
        power = fld.mul(power, v)
    return Polynomial(fld, out)


def to_prime_field(f: Polynomial) -> Polynomial:
    """Cast an F_{p^2} polynomial known to have base-field coefficients down to F_p."""
    if isinstance(f.field, PrimeField):
        return f
    ext = f.field
    for n, c in enumerate(f.coeffs):
        if c.a1 % ext.p != 0:
            raise ValueError(
                f"coefficient of T^{n} is {c.a0} + {c.a1}*w, not in GF({ext.p})"
            )
    return Polynomial(ext.base, [c.a0 for c in f.coeffs])


def lift_to_ext(f: Polynomial) -> Polynomial:
    if isinstance(f.field, QuadraticExt):
        return f
    ext = f.field.ext()
    return Polynomial(ext, [ext.lift(c) for c in f.coeffs], _trusted=True)


def is_odd_polynomial(f: Polynomial) -> bool:
    """True when every monomial of f has odd exponent (vacuously for 0)."""
    return all(f.field.is_zero(c) for c in f.coeffs[0::2])


def is_even_polynomial(f: Polynomial) -> bool:
    return all(f.field.is_zero(c) for c in f.coeffs[1::2])
