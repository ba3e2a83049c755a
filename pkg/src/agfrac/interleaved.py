"""Collaborative decoding of the interleaved virtual projections.

The m downloaded rows are corrupted words of the heterogeneous interleaved
code IC(C(beta_0 P_inf), ..., C(beta_{m-1} P_inf)); every source error hits
the same column in all rows, so one locator can serve every row.  With
alpha = max_t beta_t, a locator excess t' and phi_0..phi_{s-1} the monomial
basis of L((g+t'+alpha) P_inf) whose first s' members span L((g+t') P_inf),
the decoder searches the nullspace of the stacked system

    [ V        |  W_0 ]           V    = (phi_j(P_i))        n x s
    [   V      |  W_1 ]           W    = first s' columns of V
    [     ...  |  ...  ]          W_i  = -diag(row i of pi) . W   (i < m)
    [        V |  W_{l-1} ]       W_i  = 0                        (i >= m)

A nullspace vector (v_0; ...; v_{l-1}; v_l) encodes numerators
N_t = sum_j v_{t,j} phi_j and a shared locator Lam = sum_j v_{l,j} phi_j with
N_t(P_i) = pi[t][i] * Lam(P_i) everywhere, so T_t(f) = N_t / Lam by exact
division whenever the vector is genuine.  Candidates are tried in order of
increasing locator pole order; division failures, pole-bound violations,
recovery inconsistencies and re-encode mismatches off the locator's zero set
all fall through to the next candidate, then to explicit failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import linalg
from .code import DecodeFailure
from .curve import NotDivisibleError, RingElement, exact_divide
from .fractional import FractionalSpec, project_received, recover_function


class InterleavedCode:
    """A stack of evaluation codes over one point set, decoded row by row.

    The stack is homogeneous when every component is the same code and
    heterogeneous otherwise; a stacked word belongs to it exactly when each
    row belongs to its component code.
    """

    def __init__(self, components):
        components = tuple(components)
        if not components:
            raise ValueError("at least one component code is required")
        first = components[0]
        if any(c.points != first.points for c in components):
            raise ValueError("component codes must share their evaluation points")
        self.components = components
        self.homogeneous = all(c.field == first.field and c.beta == first.beta
                               for c in components)

    @classmethod
    def of_virtual_projections(cls, spec: FractionalSpec) -> "InterleavedCode":
        """The heterogeneous stack C(beta_0 P_inf), ..., C(beta_{m-1} P_inf)
        that the downloaded rows live in."""
        return cls(spec.row_codes)

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def n(self) -> int:
        return self.components[0].n

    def contains(self, rows) -> bool:
        rows = list(rows)
        if len(rows) != self.m:
            raise ValueError(f"expected {self.m} rows")
        return all(c.is_codeword(r) for c, r in zip(self.components, rows))

    def __repr__(self):
        kind = "homogeneous" if self.homogeneous else "heterogeneous"
        return (f"InterleavedCode({kind}, m={self.m}, n={self.n}, "
                f"betas={[c.beta for c in self.components]})")


@dataclass(frozen=True)
class CollabConfig:
    """Locator excess and the derived dimensions of the nullspace system."""
    spec: FractionalSpec
    t_prime: int
    alpha: int
    s: int
    s_prime: int
    a: float
    b: float
    c: float

    @classmethod
    def for_spec(cls, spec: FractionalSpec, t_prime: int, c: float = 1.0) -> "CollabConfig":
        if t_prime < 0:
            raise ValueError("locator excess must be nonnegative")
        curve = spec.curve
        alpha = max(spec.plan.betas)
        big = curve.genus + t_prime + alpha
        if big >= spec.n:
            raise ValueError(
                f"locator excess {t_prime} pushes the numerator space to degree "
                f"{big} >= n = {spec.n}")
        ql = float(spec.tower.ext.order)
        a = math.log(ql - 1.0) / math.log(ql)
        return cls(spec=spec, t_prime=t_prime, alpha=alpha,
                   s=curve.rr_dim(big), s_prime=curve.rr_dim(curve.genus + t_prime),
                   a=a, b=spec.l * a / (spec.l * a + 1.0), c=float(c))

    @property
    def numerator_monomials(self):
        curve = self.spec.curve
        return curve.rr_monomials(curve.genus + self.t_prime + self.alpha)

    def brown_radius(self) -> float:
        """Reported reference radius (n - alpha - g) b - c / (a l + 1); never a promise."""
        spec = self.spec
        return ((spec.n - self.alpha - spec.curve.genus) * self.b
                - self.c / (self.a * spec.l + 1.0))


def build_collab_system(config: CollabConfig, pi) -> list[list[int]]:
    """The (l n) x (l s + s') matrix whose nullspace holds locator candidates."""
    spec = config.spec
    pi = [list(r) for r in pi]
    if len(pi) != spec.m or any(len(r) != spec.n for r in pi):
        raise ValueError(f"expected an {spec.m} x {spec.n} projected matrix")
    base = spec.base
    monos = config.numerator_monomials
    s, sp, l, n = config.s, config.s_prime, spec.l, spec.n
    phi_vals = [[RingElement.monomial(spec.curve, base, a, b).evaluate(p)
                 for (a, b) in monos]
                for p in spec.code.points]
    rows = []
    width = l * s + sp
    for i in range(l):
        for r in range(n):
            row = [base.zero] * width
            row[i * s:(i + 1) * s] = phi_vals[r]
            if i < spec.m:
                w = pi[i][r]
                if w != base.zero:
                    neg_w = base.neg(w)
                    row[l * s:] = [base.mul(neg_w, v) for v in phi_vals[r][:sp]]
            rows.append(row)
    return rows


def collab_decode(config: CollabConfig, pi) -> tuple[list[int], RingElement]:
    """Decode all rows at once through a common error locator."""
    spec = config.spec
    pi = [list(r) for r in pi]
    system = build_collab_system(config, pi)
    kernel = linalg.nullspace(spec.base, system)
    if not kernel:
        raise DecodeFailure("no nonzero locator")
    base, curve = spec.base, spec.curve
    monos = config.numerator_monomials
    loc_monos = monos[:config.s_prime]
    s, l = config.s, spec.l

    def locator_of(vec):
        tail = vec[l * s:]
        return RingElement(curve, base,
                           {m: c for m, c in zip(loc_monos, tail) if c != base.zero})

    candidates = []
    for vec in kernel:
        lam = locator_of(vec)
        if not lam.is_zero():
            candidates.append((lam.pole_order(), vec, lam))
    if not candidates:
        raise DecodeFailure("no nonzero locator")
    candidates.sort(key=lambda item: item[0])

    last_reason = "locator does not divide numerator"
    for _, vec, lam in candidates:
        rows_f = []
        ok = True
        for t in range(spec.m):
            chunk = vec[t * s:(t + 1) * s]
            numerator = RingElement(curve, base,
                                    {m: c for m, c in zip(monos, chunk) if c != base.zero})
            try:
                f_t = exact_divide(numerator, lam)
            except NotDivisibleError:
                ok = False
                last_reason = "locator does not divide numerator"
                break
            if not f_t.is_zero() and f_t.pole_order() > spec.plan.betas[t]:
                ok = False
                last_reason = "quotient leaves the projected function space"
                break
            rows_f.append(f_t)
        if not ok:
            continue
        try:
            f = recover_function(spec, rows_f)
        except DecodeFailure as exc:
            last_reason = str(exc)
            continue
        word = [f.evaluate(p) for p in spec.code.points]
        check = project_received(spec, word)
        mismatch = [i for i in range(spec.n)
                    if any(check[t][i] != pi[t][i] for t in range(spec.m))]
        if any(lam.evaluate(spec.code.points[i]) != base.zero for i in mismatch):
            last_reason = "re-encode mismatch outside the locator's zero set"
            continue
        return word, f
    raise DecodeFailure(last_reason)


def sweep_locator_excess(spec: FractionalSpec, pi, t_values, c: float = 1.0):
    """Try locator excesses in the given order; first success wins.

    Returns (codeword, function, t_prime_used).
    """
    t_values = list(t_values)
    if not t_values:
        raise ValueError("empty locator-excess range")
    failures = []
    for t_prime in t_values:
        try:
            config = CollabConfig.for_spec(spec, t_prime, c)
        except ValueError as exc:
            failures.append(f"t'={t_prime}: {exc}")
            continue
        try:
            word, f = collab_decode(config, pi)
            return word, f, t_prime
        except DecodeFailure as exc:
            failures.append(f"t'={t_prime}: {exc}")
    raise DecodeFailure("all locator excesses failed: " + "; ".join(failures))
