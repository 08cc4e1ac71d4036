"""Perfect hyperquadratic continued fractions and the polynomial families
that drive them.

The central objects, for an odd prime p, 1 <= k < p/2 and a in F_p^*:

  P_{k,a} = (T^2 + a)^k       Q_{k,a} = integral_0^T P_{k-1,a},

with P_k, Q_k the normalized a = -1 pair, and the building blocks

  A_{0,k} = T,   A_{i+1,k} = [A_{i,k}^p / P_k]   (polynomial part).

A continued fraction is "of type (p, l, k)" when its first l quotients are
prescribed multiples lambda_j * A_{i(j),k} and its tail satisfies

  alpha^p = eps1 * P_k * alpha_{l+1} + eps2 * Q_k.

When the scalar continued fractions delta_n all exist in F_p^* and the
last one equals 2k*eps1/eps2 (the existence and anchor conditions on the
prefix data), every partial quotient
is lambda_n * A_{i(n),k} and the lambda/delta sequences extend by explicit
recurrences; generate_perfect_expansion implements that generator.  verify_prop1
and verify_prop2 check the exact continued fraction identities satisfied
by the P/Q pairs against independent Euclidean expansions.
"""

from dataclasses import dataclass, field as dc_field
from typing import NamedTuple, Optional, Sequence

from .cf import ContinuedFraction, ScalarCFUndefined, eval_scalar_cf, rational_to_cf
from .fields import PrimeField
from .laurent import Laurent, rational_series
from .polynomials import (
    Polynomial,
    formal_integral,
    is_odd_polynomial,
)


class DeltaUndefinedError(ValueError):
    """Some delta_n of the prefix data does not exist in F_p^*."""

    def __init__(self, index: int, message: str):
        super().__init__(message)
        self.index = index


class DeltaMismatchError(ValueError):
    """The anchor condition fails: delta_l != 2k*eps1/eps2."""


def pq_polynomials(field: PrimeField, k: int, a: Optional[int] = None):
    """The pair (P_{k,a}, Q_{k,a}); a defaults to -1 (the normalized family).

    Q requires 2k < p so that every monomial of (T^2+a)^(k-1) integrates.
    """
    p = field.p
    if not 1 <= k or not 2 * k < p:
        raise ValueError(f"need 1 <= k < p/2, got k={k}, p={p}")
    a = field(-1 if a is None else a)
    if a == 0:
        raise ValueError("the family parameter a must be nonzero")
    base = Polynomial(field, [a, 0, 1])  # T^2 + a
    P = base**k
    Q = formal_integral(base ** (k - 1))
    return P, Q


def power_p_family(field: PrimeField, k: int, a: Optional[int] = None) -> Polynomial:
    """(T^2+a)^k by plain exponentiation, with no 2k < p restriction.

    Used for the left side P_{kp-i} of the product-family expansion, whose
    exponent kp-i exceeds p/2 by design; only Q needs the integration bound.
    """
    a = field(-1 if a is None else a)
    if a == 0:
        raise ValueError("the family parameter a must be nonzero")
    return Polynomial(field, [a, 0, 1]) ** k


class FamilyConstants(NamedTuple):
    theta: int
    v: tuple  # v[i-1] is v_{i,k}, i = 1..2k


def family_constants(field: PrimeField, k: int) -> FamilyConstants:
    """theta_k = (-1)^k prod_{j<=k} (1 - 1/(2j)) and the v_{i,k} sequence
    (v_1 = 2k-1, v_{i+1} v_i = (2k-2i-1)(2k-2i+1) / (i(2k-i)))."""
    p = field.p
    if not 1 <= k or not 2 * k < p:
        raise ValueError(f"need 1 <= k < p/2, got k={k}, p={p}")
    theta = 1
    for j in range(1, k + 1):
        theta = theta * (1 - field.inv(2 * j % p)) % p
    if k % 2 == 1:
        theta = -theta % p
    v = [(2 * k - 1) % p]
    for i in range(1, 2 * k):
        num = (2 * k - 2 * i - 1) * (2 * k - 2 * i + 1) % p
        den = i * (2 * k - i) % p
        v.append(num * field.inv(den) % p * field.inv(v[-1]) % p)
    return FamilyConstants(theta, tuple(v))


def a_sequence(field: PrimeField, k: int, count: int) -> list:
    """A_{0,k} .. A_{count,k} over the normalized family P_k."""
    P, _ = pq_polynomials(field, k)
    seq = [Polynomial.x(field)]
    for _ in range(count):
        seq.append(seq[-1].pow_frobenius() // P)
    return seq


# -- index sequences ------------------------------------------------------------


def index_table(l: int, k: int, initial: Sequence[int], n: int) -> list:
    """i(1..n) from the block recurrence: i given on 1..l, i(f(m)) = i(m)+1
    for f(m) = (2k+1)m + l - 2k, and 0 elsewhere past l.  Entry [0] unused."""
    if len(initial) != l:
        raise ValueError(f"need {l} initial indices, got {len(initial)}")
    idx = [0] * (n + 1)
    for j in range(1, min(l, n) + 1):
        idx[j] = initial[j - 1]
    m = 1
    while True:
        pos = (2 * k + 1) * m + l - 2 * k
        if pos > n:
            break
        idx[pos] = idx[m] + 1
        m += 1
    return idx


def quartic_index(p: int, n: int) -> int:
    """i(n) for the quartic's expansion at p = 1 mod 3: the exact power of
    (2p+1)/3 dividing (p-1)(4n-1)/6."""
    if p % 3 != 1:
        raise ValueError(f"index formula needs p = 1 mod 3, got p = {p}")
    if n < 1:
        raise ValueError("index is defined for n >= 1")
    m = (2 * p + 1) // 3
    val = (p - 1) * (4 * n - 1) // 6
    count = 0
    while val % m == 0:
        val //= m
        count += 1
    return count


# -- the generator -------------------------------------------------------------


class FrobeniusRelation(NamedTuple):
    """alpha^p = eps1 * P * alpha_{l+1} + eps2 * Q."""

    l: int
    eps1: int
    eps2: int
    P: Polynomial
    Q: Polynomial


@dataclass(frozen=True)
class ExpansionSpec:
    """Defining data of a type (p, l, k) expansion with prescribed prefix."""

    field: PrimeField
    l: int
    k: int
    eps1: int
    eps2: int
    lambdas: tuple
    indices: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(self.field(x) for x in self.lambdas))
        idx = tuple(self.indices) if self.indices else (0,) * self.l
        object.__setattr__(self, "indices", idx)
        if len(self.lambdas) != self.l or len(idx) != self.l:
            raise ValueError("prefix data must have length l")
        if self.l < 1 or not 1 <= self.k or not 2 * self.k < self.field.p:
            raise ValueError("need l >= 1 and 1 <= k < p/2")
        if any(x == 0 for x in self.lambdas) or self.field(self.eps1) == 0 or self.field(self.eps2) == 0:
            raise ValueError("lambdas and epsilons must be nonzero")

    def validate(self) -> list:
        """Check the existence and anchor conditions; return
        [delta_1..delta_l] on success.

        delta_n = [theta^i(n) lambda_n, ..., theta^i(1) lambda_1, 2k theta/eps2]
        must exist in F_p^* for every n <= l, and delta_l must equal
        2k*eps1/eps2.
        """
        f = self.field
        theta, _ = family_constants(f, self.k)
        anchor = f.div(2 * self.k * theta % f.p, f(self.eps2))
        deltas = []
        prev = anchor
        for n in range(1, self.l + 1):
            if prev == 0:
                raise DeltaUndefinedError(
                    n, f"delta undefined at n={n}: zero tail in the scalar continued fraction"
                )
            head = f.mul(f.pow(theta, self.indices[n - 1]), self.lambdas[n - 1])
            prev = f.add(head, f.inv(prev))
            if prev == 0 and n < self.l:
                raise DeltaUndefinedError(n, f"delta undefined at n={n}: delta_{n} = 0")
            deltas.append(prev)
        if deltas[-1] == 0:
            raise DeltaUndefinedError(self.l, f"delta_{self.l} = 0, not in F_p^*")
        target = f.div(2 * self.k * f(self.eps1) % f.p, f(self.eps2))
        if deltas[-1] != target:
            raise DeltaMismatchError(
                f"not a perfect-expansion spec: delta_l = {deltas[-1]} != 2k*eps1/eps2 = {target}"
            )
        return deltas

    def relation(self) -> FrobeniusRelation:
        P, Q = pq_polynomials(self.field, self.k)
        return FrobeniusRelation(self.l, self.field(self.eps1), self.field(self.eps2), P, Q)


class GenerationResult(NamedTuple):
    cf: ContinuedFraction
    lambdas: list  # lambdas[n] for n = 1..N ([0] unused)
    deltas: list
    indices: list


def generate_perfect_expansion(spec: ExpansionSpec, n: int) -> GenerationResult:
    """First n partial quotients a_m = lambda_m * A_{i(m),k} of the perfect
    expansion determined by the spec, together with the extended lambda and
    delta sequences.

    Recurrences, for f(m) = (2k+1)m + l - 2k and 1 <= i <= 2k:
      lambda_{f(m)}   = eps1^((-1)^m) lambda_m
      lambda_{f(m)+i} = -v_i eps1^((-1)^(m+i)) (2k theta delta_m)^((-1)^i)
      delta_{f(m)}    = eps1^((-1)^m) delta_m theta
      delta_{f(m)+i}  = eps1^((-1)^(m+i)) (i v_i / (2k-2i+1)) (2k theta delta_m)^((-1)^i)
    """
    f = spec.field
    p = f.p
    base_deltas = spec.validate()
    theta, v = family_constants(f, spec.k)
    k, l = spec.k, spec.l
    lam = [0] * (n + 1)
    dl = [0] * (n + 1)
    idx = [0] * (n + 1)
    for j in range(1, min(l, n) + 1):
        lam[j] = spec.lambdas[j - 1]
        dl[j] = base_deltas[j - 1]
        idx[j] = spec.indices[j - 1]
    eps1 = f(spec.eps1)
    eps1_inv = f.inv(eps1)
    two_k_theta = 2 * k * theta % p
    m = 1
    while True:
        base = (2 * k + 1) * m + l - 2 * k  # f(m)
        if base > n:
            break
        if m > n or lam[m] == 0:
            raise ArithmeticError(f"generation order broken at block f({m})")
        e = eps1 if m % 2 == 0 else eps1_inv
        lam[base] = f.mul(e, lam[m])
        dl[base] = f.mul(f.mul(e, dl[m]), theta)
        idx[base] = idx[m] + 1
        w = f.mul(two_k_theta, dl[m])
        w_inv = f.inv(w)
        for i in range(1, 2 * k + 1):
            pos = base + i
            if pos > n:
                break
            e = eps1 if (m + i) % 2 == 0 else eps1_inv
            ww = w_inv if i % 2 == 1 else w
            lam[pos] = f.neg(f.mul(f.mul(v[i - 1], e), ww))
            coef = f.div(i * v[i - 1] % p, (2 * k - 2 * i + 1) % p)
            dl[pos] = f.mul(f.mul(e, coef), ww)
            idx[pos] = 0
            if lam[pos] == 0 or dl[pos] == 0:
                raise ArithmeticError(
                    f"internal contradiction: zero lambda/delta generated at index {pos}"
                )
        m += 1
    max_i = max(idx[1 : n + 1], default=0)
    A = a_sequence(f, k, max_i)
    quotients = [A[idx[j]].scaled(lam[j]) for j in range(1, n + 1)]
    cf = ContinuedFraction(
        f, quotients, perfect_type=(p, l, k, tuple(spec.indices))
    )
    return GenerationResult(cf, lam, dl, idx)


def generate_perfect_p11(
    field: PrimeField, i1: int, eps1: int, eps2: int, n: int
) -> GenerationResult:
    """Type (p, 1, 1) perfect expansion via its specialized recurrences.

    Needs eps2^2 + 2*eps1 != 0; then lambda_1 = (eps2^2 + 2 eps1)(-2)^i1 / eps2
    and, writing the blocks as (3m-1, 3m, 3m+1):
      lambda_{3m-1} = eps1^((-1)^m) lambda_m      delta_{3m-1} = -eps1^((-1)^m) delta_m / 2
      lambda_{3m}   = -eps1^((-1)^(m+1)) / delta_m    delta_{3m} = -eps1^((-1)^(m+1)) / delta_m
      lambda_{3m+1} = -1 / lambda_{3m}            delta_{3m+1} = 2 / delta_{3m}
    with delta_1 = -2*eps1/eps2.  Agrees with generate_perfect_expansion on the same
    data (its delta convention differs by sign).
    """
    f = field
    eps1, eps2 = f(eps1), f(eps2)
    disc = f.add(f.mul(eps2, eps2), 2 * eps1 % f.p)
    if disc == 0:
        raise ValueError("excluded by hypothesis: eps2^2 + 2*eps1 = 0")
    lam1 = f.div(f.mul(disc, f.pow(f(-2), i1)), eps2)
    lam = [0] * (n + 1)
    dl = [0] * (n + 1)
    idx = [0] * (n + 1)
    if n >= 1:
        lam[1] = lam1
        dl[1] = f.div(f(-2 * eps1), eps2)
        idx[1] = i1
    eps1_inv = f.inv(eps1)
    half = f.inv(f(2))
    m = 1
    while 3 * m - 1 <= n:
        e = eps1 if m % 2 == 0 else eps1_inv
        b = 3 * m - 1
        lam[b] = f.mul(e, lam[m])
        dl[b] = f.neg(f.mul(f.mul(e, dl[m]), half))
        idx[b] = idx[m] + 1
        if b + 1 <= n:
            e2 = eps1_inv if m % 2 == 0 else eps1
            val = f.neg(f.mul(e2, f.inv(dl[m])))
            lam[b + 1] = val
            dl[b + 1] = val
            idx[b + 1] = 0
        if b + 2 <= n:
            lam[b + 2] = f.neg(f.inv(lam[b + 1]))
            dl[b + 2] = f.mul(f(2), f.inv(dl[b + 1]))
            idx[b + 2] = 0
        m += 1
    A = a_sequence(f, 1, max(idx[1 : n + 1], default=0))
    quotients = [A[idx[j]].scaled(lam[j]) for j in range(1, n + 1)]
    cf = ContinuedFraction(f, quotients, perfect_type=(f.p, 1, 1, (i1,)))
    return GenerationResult(cf, lam, dl, idx)


# -- identity verification -------------------------------------------------------


@dataclass
class Prop1Report:
    p: int
    k: int
    theta: int
    v: tuple
    cf_matches: bool
    reversal_holds: bool
    power_identity: list  # booleans for i = 0, 1, 2
    witnesses: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.cf_matches and self.reversal_holds and all(self.power_identity)


def verify_prop1(field: PrimeField, k: int) -> Prop1Report:
    """Check the three exact identities of the normalized pair (P_k, Q_k):

      P_k/Q_k = [v_1 T, ..., v_{2k} T],
      P_k/Q_k = -4 k^2 theta_k^2 [v_{2k} T, ..., v_1 T],
      A_{i,k}^p = A_{i+1,k} P_k - 2k theta_k^{i+1} Q_k   (i = 0, 1, 2).
    """
    theta, v = family_constants(field, k)
    P, Q = pq_polynomials(field, k)
    T = Polynomial.x(field)
    predicted = [T.scaled(c) for c in v]
    cf = rational_to_cf(P, Q)
    cf_matches = list(cf.quotients) == predicted

    rev = ContinuedFraction(field, list(reversed(predicted)))
    xr, yr = rev.value()
    c = field(-4 * k * k % field.p * theta % field.p * theta % field.p)
    reversal_holds = P * yr == (xr * Q).scaled(c)

    A = a_sequence(field, k, 3)
    power_identity = []
    for i in range(3):
        quo, rem = divmod(A[i].pow_frobenius(), P)
        coef = field.neg(2 * k * field.pow(theta, i + 1) % field.p)
        power_identity.append(quo == A[i + 1] and rem == Q.scaled(coef))
    return Prop1Report(
        field.p, k, theta, v, cf_matches, reversal_holds, power_identity
    )


@dataclass
class Prop2Report:
    p: int
    k: int
    i: int
    defined: bool
    reason: str
    cf_matches: bool = False
    reversal_holds: bool = False
    predicted_length: int = 0

    @property
    def passed(self) -> bool:
        return self.defined and self.cf_matches and self.reversal_holds


def prop2_predicted_quotients(field: PrimeField, k: int, i: int):
    """Predicted expansion of P_{kp-i} / Q_k^p: 2k-1 blocks, block j led by
    v_{j,k} A_{1,i} followed by 2i entries -delta_j^(-(-1)^m) v_{m,i} T
    (m = 1..2i), closed by v_{2k,k} A_{1,i}; here
    delta_j = 2i theta_i [v_{j,k}, ..., v_{1,k}].

    Raises ScalarCFUndefined if some delta_j cannot be formed or is zero.
    """
    theta_k, v_k = family_constants(field, k)
    theta_i, v_i = family_constants(field, i)
    A1 = a_sequence(field, i, 1)[1]
    T = Polynomial.x(field)
    quotients = []
    for j in range(1, 2 * k):
        bracket = eval_scalar_cf(field, list(reversed(v_k[:j])))
        delta_j = 2 * i * theta_i % field.p * bracket % field.p
        if delta_j == 0:
            raise ScalarCFUndefined(f"delta_{j} = 0 in the block construction")
        dj_inv = field.inv(delta_j)
        quotients.append(A1.scaled(v_k[j - 1]))
        for m in range(1, 2 * i + 1):
            scal = dj_inv if m % 2 == 1 else delta_j
            quotients.append(T.scaled(field.neg(field.mul(scal, v_i[m - 1]))))
    quotients.append(A1.scaled(v_k[2 * k - 1]))
    return quotients


def verify_prop2(field: PrimeField, k: int, i: int) -> Prop2Report:
    """Compare the predicted block expansion of P_{kp-i} / Q_k^p with its
    Euclidean expansion, and check the reversal identity
    [b_1..b_n] = -4 k^2 theta_k^2 [b_n..b_1]."""
    p = field.p
    if not (1 <= k and 2 * k < p and 1 <= i and 2 * i < p):
        raise ValueError("need 1 <= k, i < p/2")
    try:
        predicted = prop2_predicted_quotients(field, k, i)
    except ScalarCFUndefined as exc:
        return Prop2Report(p, k, i, False, f"construction undefined: {exc}")
    theta_k, _ = family_constants(field, k)
    Pk = power_p_family(field, k * p - i)
    _, Qk = pq_polynomials(field, k)
    Qkp = Qk.pow_frobenius()
    cf = rational_to_cf(Pk, Qkp)
    cf_matches = list(cf.quotients) == predicted

    rev = ContinuedFraction(field, list(reversed(predicted)))
    xr, yr = rev.value()
    c = field(-4 * k * k % p * theta_k % p * theta_k % p)
    reversal_holds = Pk * yr == (xr * Qkp).scaled(c)
    return Prop2Report(p, k, i, True, "", cf_matches, reversal_holds, len(predicted))


# -- relation residual ------------------------------------------------------------


def relation_residual(cf: ContinuedFraction, rel: FrobeniusRelation, precision: int):
    """Series check of alpha^p = eps1 * P * alpha_{l+1} + eps2 * Q.

    Both sides are expanded down to T^(-precision) from the continued
    fraction's convergents; the return value is the exponent of the first
    differing coefficient, or -inf when the sides agree on the whole range.
    Raises ValueError when the expansion is too short to certify the
    requested precision.
    """
    if precision < 1:
        raise ValueError("precision must be positive")
    field = cf.field
    p = field.p
    l = rel.l
    if len(cf) <= l:
        raise ValueError(
            f"insufficient expansion: need more than l = {l} partial quotients"
        )
    xs, ys = cf.continuants()
    floor_cmp = -precision - 1
    # alpha^p needs alpha down to roughly -precision/p
    floor_alpha = -(precision // p + 2)
    if 2 * ys[-1].degree < -floor_alpha:
        raise ValueError("insufficient expansion for the requested precision")
    alpha = rational_series(xs[-1], ys[-1], floor_alpha)
    lhs = alpha.frobenius().truncate(floor_cmp)

    tail = cf.tail(l)
    xt, yt = tail.continuants()
    floor_tail = floor_cmp - rel.P.degree
    if 2 * yt[-1].degree < -floor_tail:
        raise ValueError("insufficient expansion for the requested precision")
    tail_series = rational_series(xt[-1], yt[-1], floor_tail)
    Pser = Laurent.from_polynomial(rel.P)
    Qser = Laurent.from_polynomial(rel.Q)
    rhs = ((Pser * tail_series).scaled(rel.eps1) + Qser.scaled(rel.eps2)).truncate(
        floor_cmp
    )
    return lhs.first_difference(rhs)


def all_quotients_odd(cf: ContinuedFraction) -> bool:
    return all(is_odd_polynomial(q) for q in cf.quotients)
