"""Fractional decoding via virtual projections.

A received word w over F = F_{Q^l} is never read in full.  For a partition
A_1, ..., A_m of (part of) the evaluation points with annihilators p_t and a
tower basis zeta with dual basis nu, each storage coordinate i ships only the
m base-field symbols (0-based s and t throughout)

    w_i^t = tr(zeta_{l-m+t} w_i) p_t(P_i)^(l-m)
            + sum_{s=0}^{l-m-1} tr(zeta_s w_i) p_t(P_i)^s,

the m x n matrix of which is ``project_received``.  For an error-free word
these rows are evaluations of the virtual projections

    T_t(f) = f_{l-m+t} p_t^(l-m) + sum_{s<l-m} f_s p_t^s,

base-field functions of pole order at most beta_t = beta + (l-m) deg(p_t)_inf,
where f_s is the coefficient-wise trace projection of f.  Each row is decoded
in the base-field code C(beta_t P_inf) and the message function is rebuilt by
``recover_function``: peeling off f_0, f_1, ... by evaluating the residue on
annihilated points of an information set, dividing by p_t exactly, and lifting
the l projections through the dual basis.  A joint linear solve over all
m*n projection constraints runs as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .code import (BRUTE_FORCE_LIMIT, DecodeFailure, EvalCode,
                   MiscorrectionDetected, NoInformationSetError)
from .curve import NotDivisibleError, RingElement, exact_divide


class InconsistentRows(MiscorrectionDetected):
    """The row functions cannot all be virtual projections of one message."""


@dataclass(frozen=True)
class PartitionPlan:
    """Parts, annihilators and the information set driving the recovery."""
    z: str
    value_parts: tuple            # tuple of tuples of base-field indices
    parts: tuple                  # tuple of tuples of point indices
    annihilators: tuple           # tuple of RingElement over the base field
    fiber_size: int
    n_prime: int
    info_set: tuple               # point indices, subset of the union of parts
    betas: tuple                  # projected divisor degrees beta_t

    @property
    def m(self) -> int:
        return len(self.parts)


def build_partition(code: EvalCode, ext_degree: int, z: str, value_parts) -> PartitionPlan:
    """Assemble fiber parts A_t and annihilators p_t = prod (z - a), a in A'_t.

    Every chosen value must have a full, unramified fiber (exactly rho_z
    distinct points) contained in the evaluation points, so that
    deg(p_t)_inf = rho_z * |A'_t|.
    """
    curve = code.curve
    base = curve.field
    value_parts = tuple(tuple(int(a) for a in part) for part in value_parts)
    m = len(value_parts)
    if m < 1:
        raise ValueError("at least one part is required")
    if m >= ext_degree:
        raise ValueError("the number of parts must be smaller than the extension degree")
    flat = [a for part in value_parts for a in part]
    if len(set(flat)) != len(flat):
        raise ValueError("value parts must be pairwise disjoint")
    if any(not part for part in value_parts):
        raise ValueError("value parts must be nonempty")
    for a in flat:
        if not (0 <= a < base.order):
            raise ValueError(f"value {a} outside the base field")

    sigma = curve.rho(z)
    point_index = {p: i for i, p in enumerate(code.points)}
    parts = []
    annihilators = []
    betas = []
    for part_values in value_parts:
        indices = []
        for a in part_values:
            fib = curve.fiber(z, a)
            if len(fib) != sigma:
                raise ValueError(
                    f"value {a} has a degenerate fiber of size {len(fib)} "
                    f"(expected {sigma})")
            for p in fib:
                if p not in point_index:
                    raise ValueError(f"fiber point {p} is not an evaluation point")
                indices.append(point_index[p])
        part_set = frozenset(indices)
        ann = RingElement.constant(curve, base, base.one)
        for a in part_values:
            ann = ann * RingElement.coordinate_shift(curve, base, z, a)
        for i, p in enumerate(code.points):
            vanishes = ann.evaluate(p) == base.zero
            if vanishes and i not in part_set:
                raise ValueError("annihilator vanishes outside its part")
            if not vanishes and i in part_set:
                raise ValueError("annihilator fails to vanish on its part")  # pragma: no cover
        beta_t = code.beta + (ext_degree - m) * ann.pole_order()
        if beta_t >= code.n:
            raise ValueError(
                f"projected divisor degree {beta_t} is not below n = {code.n}")
        parts.append(tuple(sorted(indices)))
        annihilators.append(ann)
        betas.append(beta_t)

    union = sorted(set().union(*parts))
    try:
        info = code.find_information_set(within=union)
    except NoInformationSetError:
        raise ValueError("no information set within parts") from None
    return PartitionPlan(z=z, value_parts=value_parts, parts=tuple(parts),
                         annihilators=tuple(annihilators), fiber_size=sigma,
                         n_prime=len(union), info_set=tuple(info), betas=tuple(betas))


class FractionalSpec:
    """Everything fixed before a download: code, tower, plan, row codes, radii."""

    def __init__(self, tower, code: EvalCode, z: str, value_parts):
        if code.field != tower.ext:
            raise ValueError("the code must live over the tower's extension field")
        self.tower = tower
        self.code = code
        self.curve = code.curve
        self.base = tower.base
        self.l = tower.degree
        self.plan = build_partition(code, tower.degree, z, value_parts)
        self.m = self.plan.m
        self.row_codes = tuple(EvalCode(self.curve, self.base, code.points, bt)
                               for bt in self.plan.betas)
        self.basis_base = self.curve.rr_basis(code.beta, self.base)

        # p_t(P_i)^s for s = 0..l-m, with 0^0 = 1
        lm = self.l - self.m
        self._ann_pows = []
        for ann in self.plan.annihilators:
            rows = []
            for p in code.points:
                v = ann.evaluate(p)
                rows.append([self.base.pow(v, s) for s in range(lm + 1)])
            self._ann_pows.append(rows)

        # inverse of the information-set block, for the peel-step solves
        info = self.plan.info_set
        square = [[code.matrix[j][c] for j in range(code.k)] for c in info]
        inv = linalg.invert(self.base, square)
        if inv is None:  # pragma: no cover - build_partition already checked rank
            raise ValueError("information set block is singular")
        self._info_inverse = inv
        self._part_of_point = {}
        for t, part in enumerate(self.plan.parts):
            for i in part:
                self._part_of_point[i] = t

        # joint-solve system: m*n equations in l*k unknowns c[s][j]
        k = code.k
        rows = []
        for t in range(self.m):
            for i in range(self.n):
                row = [self.base.zero] * (self.l * k)
                pw = self._ann_pows[t][i]
                for j in range(k):
                    hj = code.matrix[j][i]
                    for s in range(lm):
                        row[s * k + j] = self.base.mul(hj, pw[s])
                    row[(lm + t) * k + j] = self.base.mul(hj, pw[lm])
                rows.append(row)
        self._joint_matrix = rows

        max_beta = max(self.plan.betas)
        g = self.curve.genus
        self.radii = {
            "designed": (self.n - max_beta) // 2,
            "half_distance": (self.n - max_beta - 1) // 2,
            "guaranteed": min((self.n - bt - 1 - g) // 2 for bt in self.plan.betas),
        }
        self._ann_power_cache = [None] * self.m

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def k(self) -> int:
        return self.code.k

    def annihilator_power(self, t: int, e: int) -> RingElement:
        if self._ann_power_cache[t] is None:
            lm = self.l - self.m
            pows = [RingElement.constant(self.curve, self.base, self.base.one)]
            for _ in range(lm):
                pows.append(pows[-1] * self.plan.annihilators[t])
            self._ann_power_cache[t] = pows
        return self._ann_power_cache[t][e]

    def project_offset(self, position: int, offset: int) -> list[int]:
        """Column increment of the download map for an error of ``offset`` at
        ``position``: by linearity, adding the offset to that coordinate adds
        exactly this column to pi(w)."""
        if not (0 <= position < self.n):
            raise ValueError("position out of range")
        base, tower = self.base, self.tower
        lm = self.l - self.m
        projections = [tower.trace_to_base(tower.ext.mul(z, offset))
                       for z in tower.zeta]
        column = []
        for t in range(self.m):
            pw = self._ann_pows[t][position]
            acc = base.mul(projections[lm + t], pw[lm])
            for s in range(lm):
                acc = base.add(acc, base.mul(projections[s], pw[s]))
            column.append(acc)
        return column

    def __repr__(self):
        return (f"FractionalSpec(n={self.n}, beta={self.code.beta}, l={self.l}, "
                f"m={self.m}, betas={list(self.plan.betas)})")


def s_projection(tower, f: RingElement, s: int) -> RingElement:
    """Coefficient-wise trace projection f_s = sum_j tr(zeta_s a_j) h_j.

    Projections are taken w.r.t. the canonical monomial basis, so they act
    directly on the stored coefficients; f = sum_s (f_s) nu_s as functions.
    """
    if not (0 <= s < tower.degree):
        raise ValueError("projection index out of range")
    if f.field != tower.ext:
        raise ValueError("function does not live over the tower's extension field")
    zs = tower.zeta[s]
    ext = tower.ext
    coeffs = {m: tower.trace_to_base(ext.mul(zs, c)) for m, c in f.coeffs.items()}
    return RingElement(f.curve, tower.base, coeffs)


def apply_T(spec: FractionalSpec, f: RingElement, t: int) -> RingElement:
    """Virtual projection T_t(f), a base-field function in L(beta_t P_inf)."""
    if not (0 <= t < spec.m):
        raise ValueError("row index out of range")
    lm = spec.l - spec.m
    out = s_projection(spec.tower, f, lm + t) * spec.annihilator_power(t, lm)
    for s in range(lm):
        out = out + s_projection(spec.tower, f, s) * spec.annihilator_power(t, s)
    return out


def project_received(spec: FractionalSpec, word) -> list[list[int]]:
    """The m x n downloaded matrix pi(w); the only data the decoder may read."""
    if len(word) != spec.n:
        raise ValueError(f"expected a length-{spec.n} received word")
    ext, base, tower = spec.tower.ext, spec.base, spec.tower
    lm = spec.l - spec.m
    projections = []
    for wi in word:
        if not (0 <= wi < ext.order):
            raise ValueError("received symbol outside the extension field")
        projections.append([tower.trace_to_base(ext.mul(z, wi)) for z in tower.zeta])
    rows = []
    for t in range(spec.m):
        pw = spec._ann_pows[t]
        row = []
        for i in range(spec.n):
            acc = base.mul(projections[i][lm + t], pw[i][lm])
            for s in range(lm):
                acc = base.add(acc, base.mul(projections[i][s], pw[i][s]))
            row.append(acc)
        rows.append(row)
    return rows


def recover_function(spec: FractionalSpec, rows, cross_check: bool = True) -> RingElement:
    """Rebuild f in L_l(beta P_inf) from its m virtual projections.

    Peels the projections f_0, ..., f_{l-m-1} one at a time: on annihilated
    points every p_t term vanishes, so the current residue evaluates to the
    projection being peeled; the information set pins its coefficients, and
    the residue is stepped by exact division by p_t.  The leftover residues
    are the top projections f_{l-m+t}.  A joint linear solve over all m*n
    projection constraints independently reproduces f; any division failure
    or disagreement raises InconsistentRows.
    """
    rows = list(rows)
    if len(rows) != spec.m:
        raise ValueError(f"expected {spec.m} row functions")
    for t, r in enumerate(rows):
        if not isinstance(r, RingElement) or r.field != spec.base:
            raise ValueError("row functions must live over the base field")
        if not r.is_zero() and r.pole_order() > spec.plan.betas[t]:
            raise ValueError(
                f"row {t} has pole order {r.pole_order()} beyond beta_t = "
                f"{spec.plan.betas[t]}")

    base, curve, k = spec.base, spec.curve, spec.k
    info = spec.plan.info_set
    lm = spec.l - spec.m
    residues = list(rows)
    components = []
    for _ in range(lm):
        values = []
        for c in info:
            t = spec._part_of_point[c]
            values.append(residues[t].evaluate(spec.code.points[c]))
        coeffs = linalg.matvec(base, spec._info_inverse, values)
        f_s = RingElement.zero(curve, base)
        for cj, hj in zip(coeffs, spec.basis_base):
            f_s = f_s + hj.scale(cj)
        components.append(f_s)
        stepped = []
        for t in range(spec.m):
            try:
                stepped.append(exact_divide(residues[t] - f_s, spec.plan.annihilators[t]))
            except NotDivisibleError:
                raise InconsistentRows(
                    f"inconsistent rows: residue of row {t} is not divisible "
                    "by its annihilator") from None
        residues = stepped
    for t, r in enumerate(residues):
        if not r.is_zero() and r.pole_order() > spec.code.beta:
            raise InconsistentRows(
                f"inconsistent rows: peeled projection of row {t} leaves "
                "L(beta P_inf)")
    components.extend(residues)

    tower, ext = spec.tower, spec.tower.ext
    monos = sorted(set().union(*(c.coeffs.keys() for c in components)) if components else ())
    lifted = {}
    for mono in monos:
        lifted[mono] = tower.lift_projections(
            [c.coefficient(mono) for c in components])
    f = RingElement(curve, ext, lifted)

    if cross_check and recover_function_joint(spec, rows) != f:
        raise InconsistentRows(
            "inconsistent rows: peeling and joint solutions disagree")  # pragma: no cover
    return f


def recover_function_joint(spec: FractionalSpec, rows) -> RingElement:
    """Independent recovery path: one linear solve over all projection constraints."""
    rows = list(rows)
    if len(rows) != spec.m:
        raise ValueError(f"expected {spec.m} row functions")
    rhs = []
    for t in range(spec.m):
        for p in spec.code.points:
            rhs.append(rows[t].evaluate(p))
    sol = linalg.solve(spec.base, spec._joint_matrix, rhs)
    if sol is None:
        raise InconsistentRows("inconsistent rows: projection constraints unsolvable")
    k = spec.k
    coeffs = [spec.tower.lift_projections([sol[s * k + j] for s in range(spec.l)])
              for j in range(k)]
    f = RingElement.zero(spec.curve, spec.tower.ext)
    for cj, hj in zip(coeffs, spec.code.basis):
        f = f + hj.scale(cj)
    return f


def fractional_decode(spec: FractionalSpec, pi) -> tuple[list[int], RingElement]:
    """Decode from the downloaded matrix alone: rows, then recovery, then guard."""
    pi = [list(r) for r in pi]
    if len(pi) != spec.m or any(len(r) != spec.n for r in pi):
        raise ValueError(f"expected an {spec.m} x {spec.n} projected matrix")
    row_functions = []
    for t in range(spec.m):
        rc = spec.row_codes[t]
        try:
            _, f_t = rc.decode_basic(pi[t])
        except DecodeFailure as exc:
            f_t = None
            if rc.field.order ** rc.k <= BRUTE_FORCE_LIMIT:
                try:
                    word = rc.decode_bruteforce(pi[t])
                    f_t = rc.function_from_codeword(word)
                except DecodeFailure:
                    f_t = None
            if f_t is None:
                raise DecodeFailure(f"row decode failure({t}): {exc}") from None
        row_functions.append(f_t)
    f = recover_function(spec, row_functions)
    word = [f.evaluate(p) for p in spec.code.points]
    check = project_received(spec, word)
    mismatched = sum(1 for i in range(spec.n)
                     if any(check[t][i] != pi[t][i] for t in range(spec.m)))
    if mismatched > spec.radii["half_distance"]:
        raise MiscorrectionDetected(
            f"re-encoded projection differs from the download in {mismatched} "
            "columns, beyond the half-distance radius")
    return word, f


def radius_report(spec: FractionalSpec) -> dict:
    """All radii side by side, plus the download accounting.

    ``designed`` is floor((n - max beta_t)/2), half the designed distance of
    the worst row code; ``half_distance`` subtracts the unique-decoding 1,
    floor((n - max beta_t - 1)/2); ``guaranteed`` additionally pays the genus
    penalty of the implemented row decoder, min_t floor((n - beta_t - 1 - g)/2).
    The first two differ by at most one; only ``guaranteed`` is a promise.
    """
    return {
        "designed": spec.radii["designed"],
        "half_distance": spec.radii["half_distance"],
        "guaranteed": spec.radii["guaranteed"],
        "downloaded_symbols": spec.m * spec.n,
        "baseline_symbols": spec.l * spec.n,
        "fraction": spec.m / spec.l,
    }
