"""Quadratic decomposition of a monic polynomial sequence.

Fix omega(x) = x^2 + p x + q and an anchor a. Every W_m splits uniquely
into even and odd parts relative to the anchor,

    W_{2n}(x)   = P_n(omega(x)) + (x - a) a_{n-1}(omega(x)),
    W_{2n+1}(x) = b_n(omega(x)) + (x - a) R_n(omega(x)),

with deg P_n = deg R_n = n (monic), deg a_n <= n, deg b_n <= n and the
sentinel a_{-1} = 0. The records (P_n, a_{n-1}; b_n, R_n) are produced
two ways that must agree exactly:

* decompose: the recurrence characterisation driven directly by the
  structure coefficients of {W_n}, never materializing W_n itself;
* decompose_oracle: change of basis on materialized W_n, by omega-adic
  long division plus synthetic division at the anchor.

All component polynomials live in the omega-variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (
    InvalidSequenceError,
    NotNormalizableError,
    ParseError,
    RangeError,
)
from .polynomials import ONE, Poly, X, ZERO, poly_from_strings, poly_to_strings
from .rationals import format_rational, parse_rational
from .sequences import StructureCoefficients, _validate_mps

Scalar = Fraction | int


@dataclass(frozen=True)
class QuadMap:
    """The substitution x -> x^2 + p x + q together with the anchor a."""

    p: Fraction
    q: Fraction
    a: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))
        object.__setattr__(self, "a", Fraction(self.a))

    @property
    def omega(self) -> Poly:
        return Poly((self.q, self.p, 1))

    @property
    def omega_at_anchor(self) -> Fraction:
        return self.a * self.a + self.p * self.a + self.q

    def to_json(self) -> dict:
        return {
            "p": format_rational(self.p),
            "q": format_rational(self.q),
            "a": format_rational(self.a),
        }

    @staticmethod
    def from_json(data: dict) -> "QuadMap":
        try:
            return QuadMap(
                parse_rational(data["p"]),
                parse_rational(data["q"]),
                parse_rational(data["a"]),
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed quadratic-map payload: {exc}") from exc


def _at(seq: Sequence[Poly], n: int, what: str) -> Poly:
    """Sequence access with the n = -1 zero sentinel."""
    if n < 0:
        return ZERO
    if n >= len(seq):
        raise RangeError(f"{what}_{n} not computed (limit {len(seq) - 1})")
    return seq[n]


@dataclass(frozen=True)
class QdComponents:
    """The four component sequences of one quadratic decomposition."""

    map: QuadMap
    p_seq: tuple[Poly, ...]
    a_seq: tuple[Poly, ...]
    b_seq: tuple[Poly, ...]
    r_seq: tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "p_seq", tuple(self.p_seq))
        object.__setattr__(self, "a_seq", tuple(self.a_seq))
        object.__setattr__(self, "b_seq", tuple(self.b_seq))
        object.__setattr__(self, "r_seq", tuple(self.r_seq))
        n = self.nmax
        if not (len(self.r_seq) == len(self.b_seq) == n + 1 and len(self.a_seq) == n):
            raise InvalidSequenceError(
                "component lengths must be P,R,b: nmax+1 and a: nmax"
            )

    @property
    def nmax(self) -> int:
        return len(self.p_seq) - 1

    def p_at(self, n: int) -> Poly:
        return _at(self.p_seq, n, "P")

    def a_at(self, n: int) -> Poly:
        return _at(self.a_seq, n, "a")

    def b_at(self, n: int) -> Poly:
        return _at(self.b_seq, n, "b")

    def r_at(self, n: int) -> Poly:
        return _at(self.r_seq, n, "R")

    def to_json(self) -> dict:
        records = []
        for n in range(self.nmax + 1):
            records.append(
                {
                    "n": n,
                    "P": poly_to_strings(self.p_seq[n]),
                    "a_prev": poly_to_strings(self.a_at(n - 1)),
                    "b": poly_to_strings(self.b_seq[n]),
                    "R": poly_to_strings(self.r_seq[n]),
                }
            )
        return {"map": self.map.to_json(), "nmax": self.nmax, "components": records}

    @staticmethod
    def from_json(data: dict) -> "QdComponents":
        try:
            qmap = QuadMap.from_json(data["map"])
            records = sorted(data["components"], key=lambda r: r["n"])
            p_seq = [poly_from_strings(r["P"]) for r in records]
            b_seq = [poly_from_strings(r["b"]) for r in records]
            r_seq = [poly_from_strings(r["R"]) for r in records]
            a_prev = [poly_from_strings(r["a_prev"]) for r in records]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed component payload: {exc}") from exc
        if a_prev and not a_prev[0].is_zero:
            raise ParseError("record 0 must carry the a_{-1} = 0 sentinel")
        return QdComponents(qmap, p_seq, a_prev[1:], b_seq, r_seq)


def decompose(
    sc: StructureCoefficients, qmap: QuadMap, nmax: int
) -> QdComponents:
    """Run the recurrence characterisation of the quadratic decomposition.

    Produces P_0..P_nmax, R_0..R_nmax, b_0..b_nmax and a_0..a_{nmax-1}
    from structure coefficients alone. Needs beta up to index 2*nmax and
    chi rows up to 2*nmax - 1.
    """
    if nmax < 0:
        raise RangeError("nmax must be >= 0")
    if sc.nmax < 2 * nmax:
        raise RangeError(
            f"need structure coefficients up to index {2 * nmax}, have {sc.nmax}"
        )
    a, wa = qmap.a, qmap.omega_at_anchor
    shift = X - Poly.constant(wa)  # the omega-variable factor (x - omega(a))
    p_seq = [ONE]
    r_seq = [ONE]
    b_seq = [Poly.constant(a - sc.beta_at(0))]
    a_seq: list[Poly] = []

    def a_prev(i: int) -> Poly:
        return ZERO if i < 0 else a_seq[i]

    for n in range(nmax):
        p_next = shift * r_seq[n] + (a - sc.beta_at(2 * n + 1)) * b_seq[n]
        a_cur = b_seq[n] - (a + qmap.p + sc.beta_at(2 * n + 1)) * r_seq[n]
        for nu in range(n + 1):
            c = sc.chi_at(2 * n, 2 * nu)
            if c:
                p_next = p_next - c * p_seq[nu]
                a_cur = a_cur - c * a_prev(nu - 1)
        for nu in range(n):
            c = sc.chi_at(2 * n, 2 * nu + 1)
            if c:
                p_next = p_next - c * b_seq[nu]
                a_cur = a_cur - c * r_seq[nu]
        p_seq.append(p_next)
        a_seq.append(a_cur)

        b_next = (a - sc.beta_at(2 * n + 2)) * p_next + shift * a_cur
        r_next = p_next - (a + qmap.p + sc.beta_at(2 * n + 2)) * a_cur
        for nu in range(n + 1):
            c = sc.chi_at(2 * n + 1, 2 * nu + 1)
            if c:
                b_next = b_next - c * b_seq[nu]
                r_next = r_next - c * r_seq[nu]
            c = sc.chi_at(2 * n + 1, 2 * nu)
            if c:
                b_next = b_next - c * p_seq[nu]
                r_next = r_next - c * a_prev(nu - 1)
        b_seq.append(b_next)
        r_seq.append(r_next)
    return QdComponents(qmap, p_seq, a_seq, b_seq, r_seq)


def anchor_split(f: Poly, qmap: QuadMap) -> tuple[Poly, Poly]:
    """Unique (u, v) with f(x) = u(omega(x)) + (x - a) v(omega(x)).

    Expands f omega-adically, then splits each degree-<=1 digit at the
    anchor; digit j contributes u_j + v_j (x - a) at omega-power j.
    """
    omega = qmap.omega
    u: list[Fraction] = []
    v: list[Fraction] = []
    rest = f
    while not rest.is_zero:
        rest, digit = rest.divmod_by(omega)
        quot, at_anchor = digit.divmod_linear(qmap.a)
        u.append(at_anchor)
        v.append(quot.coefficient(0))
    return Poly(u), Poly(v)


def decompose_oracle(polys: Sequence[Poly], qmap: QuadMap) -> QdComponents:
    """Recompute the decomposition by change of basis on materialized W_n.

    Completely independent of the recurrence path: only polynomial long
    division is involved. Consumes W_0..W_{2K+1} (a trailing even entry
    is ignored) and returns components up to index K.
    """
    if len(polys) < 2:
        raise InvalidSequenceError("need at least W_0 and W_1")
    _validate_mps(polys)
    kmax = (len(polys) - 2) // 2
    p_seq: list[Poly] = []
    a_seq: list[Poly] = []
    b_seq: list[Poly] = []
    r_seq: list[Poly] = []
    for n in range(kmax + 1):
        u, v = anchor_split(polys[2 * n], qmap)
        if not (u.degree == n and u.is_monic and v.degree <= n - 1):
            raise InvalidSequenceError(f"even split of W_{2 * n} has wrong shape")
        p_seq.append(u)
        if n > 0:
            a_seq.append(v)
        u, v = anchor_split(polys[2 * n + 1], qmap)
        if not (v.degree == n and v.is_monic and u.degree <= n):
            raise InvalidSequenceError(f"odd split of W_{2 * n + 1} has wrong shape")
        b_seq.append(u)
        r_seq.append(v)
    return QdComponents(qmap, p_seq, a_seq, b_seq, r_seq)


def check_reconstruction(components: QdComponents, polys: Sequence[Poly]) -> bool:
    """True iff the defining split identities rebuild every given W_m."""
    omega = components.map.omega
    anchor = X - Poly.constant(components.map.a)
    upper = min(len(polys) - 1, 2 * components.nmax + 1)
    for m in range(upper + 1):
        n = m // 2
        if m % 2 == 0:
            rebuilt = components.p_at(n).compose(omega) + anchor * components.a_at(
                n - 1
            ).compose(omega)
        else:
            rebuilt = components.b_at(n).compose(omega) + anchor * components.r_at(
                n
            ).compose(omega)
        if rebuilt != polys[m]:
            return False
    return True


@dataclass(frozen=True)
class NormalizedSecondary:
    """A secondary component rewritten as a genuine MPS.

    offset k and leadings lambda_n satisfy seq[n + k] = lambda_n * mps[n]
    with mps monic of degree n.
    """

    offset: int
    leadings: tuple[Fraction, ...]
    mps: tuple[Poly, ...]


def normalize_secondary(
    seq: Sequence[Poly], role: str = "secondary"
) -> NormalizedSecondary | None:
    """Extract the monic sequence hidden in a secondary component.

    Returns None for the all-zero input: a null component is a meaningful
    outcome of a decomposition, not an error. Raises when degrees do not
    follow n - k for any constant offset k.
    """
    offset = next((i for i, f in enumerate(seq) if not f.is_zero), None)
    if offset is None:
        return None
    for i in range(offset, len(seq)):
        if seq[i].degree != i - offset:
            raise NotNormalizableError(
                f"{role}[{i}] has degree {seq[i].degree}, expected {i - offset}"
            )
    leadings = tuple(seq[i].leading for i in range(offset, len(seq)))
    mps = tuple((1 / lam) * f for lam, f in zip(leadings, seq[offset:]))
    return NormalizedSecondary(offset, leadings, mps)


def third_order_violations(
    components: QdComponents,
    beta: Scalar,
    alpha1: Scalar,
    alpha2: Scalar,
    gamma: Scalar,
    start: int = 1,
) -> list[tuple[str, int]]:
    """Check the constant-coefficient third-order recurrences.

    For the source family whose structure coefficients are the constants
    (beta, alpha_1, alpha_2, gamma) modulo parity, each component X of its
    decomposition must satisfy, for n >= 1,

        X_{n+1} = (x - omega(a) + (a - beta)(a + p + beta)
                   - alpha_2 - alpha_1) X_n
                  - (alpha_2 alpha_1 + gamma (p + 2 beta)) X_{n-1}
                  - gamma^2 X_{n-2},

    with the P sequence shifted one index up. Returns every violating
    (component name, n); perturbed inputs are expected to violate below
    their grace index, so callers filter by `start`.
    """
    beta, gamma = Fraction(beta), Fraction(gamma)
    alpha1, alpha2 = Fraction(alpha1), Fraction(alpha2)
    qmap = components.map
    head = X - Poly.constant(
        qmap.omega_at_anchor
        - (qmap.a - beta) * (qmap.a + qmap.p + beta)
        + alpha2
        + alpha1
    )
    mid = alpha2 * alpha1 + gamma * (qmap.p + 2 * beta)
    tail = gamma * gamma
    bad: list[tuple[str, int]] = []
    accessors: list[tuple[str, Callable[[int], Poly], int, int]] = [
        ("a", components.a_at, len(components.a_seq) - 1, 0),
        ("R", components.r_at, components.nmax, 0),
        ("b", components.b_at, components.nmax, 0),
        ("P", components.p_at, components.nmax, 1),
    ]
    for name, at, top, up in accessors:
        for n in range(start, top - up):
            lhs = at(n + 1 + up)
            rhs = head * at(n + up) - mid * at(n - 1 + up) - tail * at(n - 2 + up)
            if lhs != rhs:
                bad.append((name, n))
    return bad


def mixed_relation_violations(
    components: QdComponents,
    beta: Callable[[int], Fraction],
    alpha: Callable[[int], Fraction],
    gamma: Callable[[int], Fraction],
) -> list[tuple[str, int]]:
    """Check the four seven-term identities tying components pairwise.

    They hold for the decomposition of every 2-orthogonal MPS with
    coefficients beta_n (n >= 0), alpha_n and gamma_n (n >= 1), for
    n >= 1 as far as the computed components reach. Terms whose
    polynomial factor is the zero sentinel are skipped before their
    scalar coefficient is evaluated, so gamma_0 is never consulted.
    """
    qmap = components.map
    a = qmap.a

    def head(k: int) -> Poly:
        # x - omega(a) + (a - beta_k)(a + p + beta_k) - alpha_{k+1} - alpha_k
        return X - Poly.constant(
            qmap.omega_at_anchor
            - (a - beta(k)) * (a + qmap.p + beta(k))
            + alpha(k + 1)
            + alpha(k)
        )

    def combo(pairs: list[tuple[Callable[[], Fraction], Poly]]) -> Poly:
        acc = ZERO
        for coeff, f in pairs:
            if not f.is_zero:
                acc = acc + coeff() * f
        return acc

    bad: list[tuple[str, int]] = []
    nmax = components.nmax
    alen = len(components.a_seq) - 1

    def check(label: str, n: int, lead: Poly, rest: list) -> None:
        if (lead + combo(rest)).is_zero:
            return
        bad.append((label, n))

    # primary X against partner Y: X_{n+1} - head * X_n + mid * X_{n-1}
    # + deep * X_{n-2} + three Y terms = 0
    for n in range(1, alen):
        if n + 1 > nmax:
            break
        check(
            "a-R",
            n,
            components.a_at(n + 1) - head(2 * n + 2) * components.a_at(n),
            [
                (
                    lambda n=n: alpha(2 * n + 2) * alpha(2 * n + 1)
                    + gamma(2 * n + 1) * (qmap.p + beta(2 * n + 2) + beta(2 * n)),
                    components.a_at(n - 1),
                ),
                (
                    lambda n=n: gamma(2 * n + 1) * gamma(2 * n - 1),
                    components.a_at(n - 2),
                ),
                (
                    lambda n=n: qmap.p + beta(2 * n + 3) + beta(2 * n + 2),
                    components.r_at(n + 1),
                ),
                (
                    lambda n=n: gamma(2 * n + 2)
                    + gamma(2 * n + 1)
                    + alpha(2 * n + 2) * (qmap.p + beta(2 * n + 2) + beta(2 * n + 1)),
                    components.r_at(n),
                ),
                (
                    lambda n=n: alpha(2 * n + 2) * gamma(2 * n)
                    + gamma(2 * n + 1) * alpha(2 * n),
                    components.r_at(n - 1),
                ),
            ],
        )
    for n in range(1, nmax):
        if n > alen:
            break
        check(
            "R-a",
            n,
            components.r_at(n + 1) - head(2 * n + 1) * components.r_at(n),
            [
                (
                    lambda n=n: alpha(2 * n + 1) * alpha(2 * n)
                    + gamma(2 * n) * (qmap.p + beta(2 * n + 1) + beta(2 * n - 1)),
                    components.r_at(n - 1),
                ),
                (lambda n=n: gamma(2 * n) * gamma(2 * n - 2), components.r_at(n - 2)),
                (
                    lambda n=n: qmap.p + beta(2 * n + 2) + beta(2 * n + 1),
                    components.a_at(n),
                ),
                (
                    lambda n=n: gamma(2 * n + 1)
                    + gamma(2 * n)
                    + alpha(2 * n + 1) * (qmap.p + beta(2 * n + 1) + beta(2 * n)),
                    components.a_at(n - 1),
                ),
                (
                    lambda n=n: alpha(2 * n + 1) * gamma(2 * n - 1)
                    + gamma(2 * n) * alpha(2 * n - 1),
                    components.a_at(n - 2),
                ),
            ],
        )
    for n in range(1, nmax):
        check(
            "b-P",
            n,
            components.b_at(n + 1) - head(2 * n + 1) * components.b_at(n),
            [
                (
                    lambda n=n: alpha(2 * n + 1) * alpha(2 * n)
                    + gamma(2 * n) * (qmap.p + beta(2 * n + 1) + beta(2 * n - 1)),
                    components.b_at(n - 1),
                ),
                (lambda n=n: gamma(2 * n) * gamma(2 * n - 2), components.b_at(n - 2)),
                (
                    lambda n=n: qmap.p + beta(2 * n + 2) + beta(2 * n + 1),
                    components.p_at(n + 1),
                ),
                (
                    lambda n=n: gamma(2 * n + 1)
                    + gamma(2 * n)
                    + alpha(2 * n + 1) * (qmap.p + beta(2 * n + 1) + beta(2 * n)),
                    components.p_at(n),
                ),
                (
                    lambda n=n: alpha(2 * n + 1) * gamma(2 * n - 1)
                    + gamma(2 * n) * alpha(2 * n - 1),
                    components.p_at(n - 1),
                ),
            ],
        )
    for n in range(1, nmax - 1):
        check(
            "P-b",
            n,
            components.p_at(n + 2) - head(2 * n + 2) * components.p_at(n + 1),
            [
                (
                    lambda n=n: alpha(2 * n + 2) * alpha(2 * n + 1)
                    + gamma(2 * n + 1) * (qmap.p + beta(2 * n + 2) + beta(2 * n)),
                    components.p_at(n),
                ),
                (
                    lambda n=n: gamma(2 * n + 1) * gamma(2 * n - 1),
                    components.p_at(n - 1),
                ),
                (
                    lambda n=n: qmap.p + beta(2 * n + 3) + beta(2 * n + 2),
                    components.b_at(n + 1),
                ),
                (
                    lambda n=n: gamma(2 * n + 2)
                    + gamma(2 * n + 1)
                    + alpha(2 * n + 2) * (qmap.p + beta(2 * n + 2) + beta(2 * n + 1)),
                    components.b_at(n),
                ),
                (
                    lambda n=n: alpha(2 * n + 2) * gamma(2 * n)
                    + gamma(2 * n + 1) * alpha(2 * n),
                    components.b_at(n - 1),
                ),
            ],
        )
    return bad
