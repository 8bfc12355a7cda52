"""Monic polynomial sequences and their structure coefficients.

A monic polynomial sequence (MPS) {W_n} with deg W_n = n satisfies

    W_0 = 1,   W_1 = x - beta_0,
    x W_{n+1} = W_{n+2} + beta_{n+1} W_{n+1} + sum_{nu=0}^{n} chi_{n,nu} W_nu,

so row n of the chi table expands x*W_{n+1} and carries n+1 entries.
A StructureCoefficients with limit nmax stores beta_0..beta_nmax and chi
rows 0..nmax-1; that is exactly enough data to generate W_0..W_{nmax+1},
and extracting coefficients back from W_0..W_m yields a table with limit
m-1. Keeping both directions aligned to the same nmax convention makes
the generate/extract round trip an identity on the stored range.

A sequence is d-orthogonal when the table is d-banded (chi_{n,nu} = 0
for nu < n-d+1) with the lowest band nonzero. For d = 2 the bands carry
the lighter names chi_{n,n} = alpha_{n+1} (n >= 0) and chi_{n,n-1} =
gamma_n (n >= 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

from .errors import (
    InvalidSequenceError,
    MathDomainError,
    ParseError,
    RangeError,
    RegularityError,
)
from .polynomials import ONE, Poly, X
from .rationals import format_rational, parse_rational


@dataclass(frozen=True)
class StructureCoefficients:
    """Triangular recurrence data for one MPS, exact and immutable."""

    beta: tuple[Fraction, ...]
    chi: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(Fraction(b) for b in self.beta))
        object.__setattr__(
            self, "chi", tuple(tuple(Fraction(c) for c in row) for row in self.chi)
        )
        if not self.beta:
            raise InvalidSequenceError("beta must contain at least beta_0")
        if len(self.chi) != len(self.beta) - 1:
            raise InvalidSequenceError(
                f"need {len(self.beta) - 1} chi rows for {len(self.beta)} beta entries,"
                f" got {len(self.chi)}"
            )
        for n, row in enumerate(self.chi):
            if len(row) != n + 1:
                raise InvalidSequenceError(f"chi row {n} must have {n + 1} entries")

    @property
    def nmax(self) -> int:
        """Largest beta index stored; chi rows run 0..nmax-1."""
        return len(self.beta) - 1

    def beta_at(self, n: int) -> Fraction:
        if n > self.nmax:
            raise RangeError(f"beta_{n} not stored (limit {self.nmax})")
        return self.beta[n]

    def chi_at(self, n: int, nu: int) -> Fraction:
        if not 0 <= nu <= n:
            raise RangeError(f"chi_({n},{nu}) outside the triangle")
        if n >= len(self.chi):
            raise RangeError(f"chi row {n} not stored (limit {len(self.chi) - 1})")
        return self.chi[n][nu]

    def restrict(self, nmax: int) -> "StructureCoefficients":
        if nmax > self.nmax:
            raise RangeError(f"cannot restrict to {nmax}, limit is {self.nmax}")
        return StructureCoefficients(self.beta[: nmax + 1], self.chi[:nmax])

    def to_json(self) -> dict:
        return {
            "nmax": self.nmax,
            "beta": [format_rational(b) for b in self.beta],
            "chi": [[format_rational(c) for c in row] for row in self.chi],
        }

    @staticmethod
    def from_json(data: dict) -> "StructureCoefficients":
        try:
            beta = tuple(parse_rational(b) for b in data["beta"])
            chi = tuple(tuple(parse_rational(c) for c in row) for row in data["chi"])
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed structure-coefficient payload: {exc}") from exc
        sc = StructureCoefficients(beta, chi)
        if "nmax" in data and data["nmax"] != sc.nmax:
            raise ParseError(
                f"declared nmax {data['nmax']} does not match beta length {len(beta)}"
            )
        return sc


@dataclass(frozen=True)
class BandedRule:
    """Closed-form d-banded coefficient rule, usable at any index.

    bands[k] gives chi_{n,n-k} as a function of n (0 <= k < d), so
    bands[d-1] is the regularity band of a d-orthogonal sequence.
    """

    d: int
    beta: Callable[[int], Fraction]
    bands: tuple[Callable[[int], Fraction], ...]

    def __post_init__(self):
        if self.d < 1:
            raise MathDomainError("band order d must be >= 1")
        if len(self.bands) != self.d:
            raise MathDomainError(f"need {self.d} band rules, got {len(self.bands)}")

    @staticmethod
    def two_orthogonal(
        beta: Callable[[int], Fraction],
        alpha: Callable[[int], Fraction],
        gamma: Callable[[int], Fraction],
    ) -> "BandedRule":
        """d = 2 rule from the lighter notation: alpha(n) = chi_{n-1,n-1}
        for n >= 1 and gamma(n) = chi_{n,n-1} for n >= 1."""
        return BandedRule(
            d=2,
            beta=beta,
            bands=(lambda n: alpha(n + 1), lambda n: gamma(n)),
        )

    @staticmethod
    def three_term(
        beta: Callable[[int], Fraction],
        gamma: Callable[[int], Fraction],
    ) -> "BandedRule":
        """d = 1 rule: W_{n+2} = (x - beta(n+1)) W_{n+1} - gamma(n+1) W_n."""
        return BandedRule(d=1, beta=beta, bands=(lambda n: gamma(n + 1),))

    def beta_at(self, n: int) -> Fraction:
        return Fraction(self.beta(n))

    def chi_at(self, n: int, nu: int) -> Fraction:
        if not 0 <= nu <= n:
            raise RangeError(f"chi_({n},{nu}) outside the triangle")
        k = n - nu
        if k >= self.d:
            return Fraction(0)
        return Fraction(self.bands[k](n))

    def table(self, nmax: int) -> StructureCoefficients:
        """Materialize beta_0..beta_nmax and chi rows 0..nmax-1."""
        beta = tuple(self.beta_at(n) for n in range(nmax + 1))
        chi = tuple(
            tuple(self.chi_at(n, nu) for nu in range(n + 1)) for n in range(nmax)
        )
        return StructureCoefficients(beta, chi)


MpsSpec = Union[BandedRule, StructureCoefficients]


def _coverage(spec: MpsSpec) -> int | None:
    """Largest W index generate_mps can reach, None when unbounded."""
    if isinstance(spec, StructureCoefficients):
        return spec.nmax + 1
    return None


def generate_mps(spec: MpsSpec, nmax: int) -> list[Poly]:
    """Materialize W_0..W_nmax from a rule or a stored table."""
    if nmax < 0:
        raise RangeError("nmax must be >= 0")
    limit = _coverage(spec)
    if limit is not None and nmax > limit:
        raise RangeError(f"spec covers W_0..W_{limit}, cannot reach W_{nmax}")
    polys = [ONE]
    if nmax == 0:
        return polys
    polys.append(X - Poly.constant(spec.beta_at(0)))
    for n in range(nmax - 1):
        nxt = (X - Poly.constant(spec.beta_at(n + 1))) * polys[n + 1]
        lo = max(0, n - spec.d + 1) if isinstance(spec, BandedRule) else 0
        for nu in range(lo, n + 1):
            c = spec.chi_at(n, nu)
            if c:
                nxt = nxt - c * polys[nu]
        polys.append(nxt)
    return polys


def _validate_mps(polys: Sequence[Poly]) -> None:
    for k, w in enumerate(polys):
        if w.degree != k or not w.is_monic:
            raise InvalidSequenceError(f"entry {k} is not monic of degree {k}")


def extract_sc(polys: Sequence[Poly]) -> StructureCoefficients:
    """Recover the structure coefficients of a materialized MPS prefix.

    Expands x*W_{n+1} - W_{n+2} over {W_0..W_{n+1}} by back-substitution
    from the top degree down; monicity makes each step a single
    coefficient read, no linear solve involved.
    """
    if len(polys) < 2:
        raise InvalidSequenceError("need at least W_0 and W_1")
    _validate_mps(polys)
    beta = [-polys[1].coefficient(0)]
    chi: list[tuple[Fraction, ...]] = []
    for n in range(len(polys) - 2):
        rest = X * polys[n + 1] - polys[n + 2]
        coeffs = [Fraction(0)] * (n + 2)
        for k in range(n + 1, -1, -1):
            c = rest.coefficient(k)
            coeffs[k] = c
            if c:
                rest = rest - c * polys[k]
        if not rest.is_zero:
            raise InvalidSequenceError(f"row {n} expansion left a remainder")
        beta.append(coeffs[n + 1])
        chi.append(tuple(coeffs[: n + 1]))
    return StructureCoefficients(tuple(beta), tuple(chi))


def derivative_sequence(
    polys: Sequence[Poly], sc: StructureCoefficients
) -> list[Poly]:
    """Normalized derivatives W^[1]_n = D W_{n+1} / (n+1) for n < len(polys)-1.

    Computed through the recurrence the structure coefficients induce:

        (n+1) W^[1]_n = W_n + n (x - beta_n) W^[1]_{n-1}
                        - sum_{nu=1}^{n-1} nu chi_{n-1,nu} W^[1]_{nu-1}.
    """
    count = len(polys) - 1
    if count < 1:
        raise RangeError("need at least W_0 and W_1 to differentiate")
    if sc.nmax < count - 1:
        raise RangeError(
            f"structure coefficients cover index {sc.nmax}, need {count - 1}"
        )
    _validate_mps(polys)
    out = [ONE]
    for n in range(1, count):
        acc = polys[n] + n * (X - Poly.constant(sc.beta_at(n))) * out[n - 1]
        for nu in range(1, n):
            c = sc.chi_at(n - 1, nu)
            if c:
                acc = acc - (nu * c) * out[nu - 1]
        out.append(Fraction(1, n + 1) * acc)
    return out


@dataclass(frozen=True)
class PerturbationSpec:
    """Finite modification of a banded rule near the origin.

    Shifts mu = (mu_0..mu_r) add to beta, scales lam = (lambda_1..lambda_r)
    multiply the regularity band entries gamma_1..gamma_r, and for d = 2 an
    optional eta = (eta_1..eta_r) multiplies the diagonal band entries
    alpha_1..alpha_r. Non-degeneracy at order r >= 1 demands that the index-r
    data actually changes something.
    """

    mu: tuple[Fraction, ...]
    lam: tuple[Fraction, ...] = field(default=())
    eta: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(Fraction(v) for v in self.mu))
        object.__setattr__(self, "lam", tuple(Fraction(v) for v in self.lam))
        if self.eta is not None:
            object.__setattr__(self, "eta", tuple(Fraction(v) for v in self.eta))
        if not self.mu:
            raise MathDomainError("perturbation needs at least mu_0")
        r = self.order
        if len(self.lam) != r:
            raise MathDomainError(f"need {r} lambda scales, got {len(self.lam)}")
        if self.eta is not None and len(self.eta) != r:
            raise MathDomainError(f"need {r} eta scales, got {len(self.eta)}")
        if any(s == 0 for s in self.lam):
            raise RegularityError("lambda scales must be nonzero")
        if self.eta is not None and any(s == 0 for s in self.eta):
            raise RegularityError("eta scales must be nonzero")
        if r >= 1:
            moved = self.mu[r] != 0 or self.lam[r - 1] != 1
            if self.eta is not None:
                moved = moved or self.eta[r - 1] != 1
            if not moved:
                raise MathDomainError(
                    f"degenerate perturbation: order {r} data changes nothing"
                )

    @property
    def order(self) -> int:
        return len(self.mu) - 1


def perturb(spec: BandedRule, pert: PerturbationSpec) -> BandedRule:
    """Apply a finite perturbation to a banded rule; indices beyond the
    perturbation order are untouched."""
    if not isinstance(spec, BandedRule):
        raise MathDomainError("only banded rules can be perturbed")
    if spec.d > 2:
        raise MathDomainError("perturbation is defined for band orders d <= 2 only")
    if pert.eta is not None and spec.d == 1:
        raise MathDomainError("eta scales a second band; a d = 1 rule has none")
    r = pert.order

    def beta(n: int, _base=spec.beta) -> Fraction:
        b = Fraction(_base(n))
        return b + pert.mu[n] if n <= r else b

    # regularity band carries gamma_m at row m + d - 1
    def reg_band(n: int, _base=spec.bands[spec.d - 1], _d=spec.d) -> Fraction:
        m = n - _d + 2  # gamma index at this row
        g = Fraction(_base(n))
        return pert.lam[m - 1] * g if 1 <= m <= r else g

    if spec.d == 1:
        new = BandedRule(d=1, beta=beta, bands=(reg_band,))
    else:
        eta = pert.eta if pert.eta is not None else (Fraction(1),) * r

        def diag(n: int, _base=spec.bands[0]) -> Fraction:
            m = n + 1  # alpha index at this row
            a = Fraction(_base(n))
            return eta[m - 1] * a if 1 <= m <= r else a

        new = BandedRule(d=2, beta=beta, bands=(diag, reg_band))
    for m in range(1, r + 1):
        if new.chi_at(m + spec.d - 2, m - 1) == 0:
            raise RegularityError(f"perturbed regularity band vanishes at gamma_{m}")
    return new
