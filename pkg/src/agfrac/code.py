"""One-point evaluation codes C(D, beta*P_inf) and their unique decoders.

Two decoders are provided.  ``decode_basic`` is the classical error-locator
(key equation) algorithm: find a nonzero pair (lam, mu) with lam in
L(tau*P_inf), mu in L((tau+beta)*P_inf) and lam(P_i) w_i = mu(P_i) for every
coordinate, then recover the message function as mu / lam by exact division.
With tau = floor((n-beta-1+g)/2) it is guaranteed up to

    e_basic = tau - g = floor((n - beta - 1 - g) / 2)

errors; beyond that it may still return a codeword within the half-distance
radius floor((n-beta-1)/2) or fail explicitly.  ``decode_bruteforce`` is the
exhaustive nearest-codeword oracle for tiny instances, realizing the
half-distance radius exactly.
"""

from __future__ import annotations

from itertools import product

from . import linalg
from .curve import NotDivisibleError, RingElement, exact_divide

BRUTE_FORCE_LIMIT = 2 ** 20


class DecodeFailure(Exception):
    """The decoder could not produce a codeword it is willing to vouch for."""


class MiscorrectionDetected(DecodeFailure):
    """A consistency guard caught an (otherwise silent) wrong answer."""


class NoInformationSetError(ValueError):
    """The requested column subset spans no information set."""


class EvalCode:
    """Evaluation code: rows of the generator matrix are ev(h_i) for the
    monomial basis h_1..h_k of L(beta*P_inf)."""

    def __init__(self, curve, field, points, beta: int):
        points = [p if hasattr(p, "x") else _as_point(p) for p in points]
        n = len(points)
        if not (0 <= beta < n):
            raise ValueError("divisor degree must satisfy 0 <= beta < n")
        if len(set(points)) != n:
            raise ValueError("evaluation points must be distinct")
        for p in points:
            if not curve.on_curve(p):
                raise ValueError(f"{p} is not on the curve")
        self.curve = curve
        self.field = field
        self.points = tuple(points)
        self.beta = beta
        self.basis = curve.rr_basis(beta, field)
        self.k = len(self.basis)
        self.n = n
        self.matrix = [[h.evaluate(p) for p in points] for h in self.basis]
        if linalg.rank(field, self.matrix) != self.k:
            raise ValueError("generator matrix is rank deficient")  # pragma: no cover
        self._codeword_cache = None

    # -- radii ---------------------------------------------------------------

    @property
    def half_distance_radius(self) -> int:
        return (self.n - self.beta - 1) // 2

    @property
    def locator_pole_bound(self) -> int:
        return (self.n - self.beta - 1 + self.curve.genus) // 2

    @property
    def guaranteed_radius(self) -> int:
        return (self.n - self.beta - 1 - self.curve.genus) // 2

    # -- encoding ------------------------------------------------------------

    def encode(self, coefficients) -> list[int]:
        coefficients = list(coefficients)
        if len(coefficients) != self.k:
            raise ValueError(f"expected {self.k} coefficients")
        fld = self.field
        word = [fld.zero] * self.n
        for c, row in zip(coefficients, self.matrix):
            if c != fld.zero:
                word = [fld.add(w, fld.mul(c, r)) for w, r in zip(word, row)]
        return word

    def function_of(self, coefficients) -> RingElement:
        f = RingElement.zero(self.curve, self.field)
        for c, h in zip(coefficients, self.basis):
            f = f + h.scale(c)
        return f

    def is_codeword(self, word) -> bool:
        self._check_word(word)
        return linalg.rank(self.field, self.matrix + [list(word)]) == self.k

    def find_information_set(self, within=None) -> list[int]:
        """Greedy information set, columns scanned in ascending index order."""
        cols = sorted(within) if within is not None else list(range(self.n))
        _, pivots = linalg.rref(self.field, self.matrix, columns=cols)
        if len(pivots) != self.k:
            raise NoInformationSetError("no information set in given subset")
        return sorted(pivots)

    def coefficients_from_codeword(self, word, info_set=None) -> list[int]:
        """Coefficient extraction: invert encoding on an information set."""
        self._check_word(word)
        info = list(info_set) if info_set is not None else self.find_information_set()
        square = [[self.matrix[j][c] for j in range(self.k)] for c in info]
        rhs = [word[c] for c in info]
        coeffs = linalg.solve(self.field, square, rhs)
        if coeffs is None or self.encode(coeffs) != list(word):
            raise ValueError("word is not a codeword")
        return coeffs

    def function_from_codeword(self, word, info_set=None) -> RingElement:
        return self.function_of(self.coefficients_from_codeword(word, info_set))

    # -- decoding ------------------------------------------------------------

    def decode_basic(self, word) -> tuple[list[int], RingElement]:
        """Error-locator decoding; returns (codeword, message function)."""
        self._check_word(word)
        curve, fld, n = self.curve, self.field, self.n
        tau = self.locator_pole_bound
        if tau < curve.genus:
            raise DecodeFailure("locator pole bound is below the genus")
        lam_monos = curve.rr_monomials(tau)
        mu_monos = curve.rr_monomials(tau + self.beta)
        lam_cols = [[fld.mul(word[i], RingElement.monomial(curve, fld, a, b).evaluate(p))
                     for (a, b) in lam_monos]
                    for i, p in enumerate(self.points)]
        mu_cols = [[fld.neg(RingElement.monomial(curve, fld, a, b).evaluate(p))
                    for (a, b) in mu_monos]
                   for p in self.points]
        system = [lc + mc for lc, mc in zip(lam_cols, mu_cols)]
        kernel = linalg.nullspace(fld, system)
        if not kernel:
            raise DecodeFailure("key equation has no nonzero solution")

        def lam_pole(vec):
            orders = [curve.monomial_pole_order(a, b)
                      for (a, b), c in zip(lam_monos, vec) if c != fld.zero]
            return max(orders) if orders else -1

        split = len(lam_monos)
        for vec in sorted(kernel, key=lam_pole):
            lam = RingElement(curve, fld,
                              {m: c for m, c in zip(lam_monos, vec[:split]) if c != fld.zero})
            if lam.is_zero():
                continue
            mu = RingElement(curve, fld,
                             {m: c for m, c in zip(mu_monos, vec[split:]) if c != fld.zero})
            try:
                f = exact_divide(mu, lam)
            except NotDivisibleError:
                continue
            if not f.is_zero() and f.pole_order() > self.beta:
                continue
            decoded = [f.evaluate(p) for p in self.points]
            dist = sum(1 for a, b in zip(decoded, word) if a != b)
            if dist <= self.half_distance_radius:
                return decoded, f
        raise DecodeFailure("no codeword within the key-equation radius")

    def decode_bruteforce(self, word) -> list[int]:
        """Nearest-codeword oracle; ambiguous ties fail explicitly."""
        self._check_word(word)
        best = None
        best_dist = self.n + 1
        tie = False
        for cw in self._all_codewords():
            d = sum(1 for a, b in zip(cw, word) if a != b)
            if d < best_dist:
                best, best_dist, tie = cw, d, False
            elif d == best_dist:
                tie = True
        if tie:
            raise DecodeFailure("ambiguous: several codewords at minimal distance")
        return list(best)

    def min_distance_bruteforce(self) -> int:
        weights = [sum(1 for c in cw if c != self.field.zero)
                   for cw in self._all_codewords()]
        return min(w for w in weights if w > 0)

    def _all_codewords(self):
        if self.field.order ** self.k > BRUTE_FORCE_LIMIT:
            raise ValueError("instance too large for exhaustive codeword search")
        if self._codeword_cache is None:
            self._codeword_cache = [self.encode(list(c))
                                    for c in product(self.field.elements(), repeat=self.k)]
        return self._codeword_cache

    def _check_word(self, word):
        if len(word) != self.n:
            raise ValueError(f"expected a length-{self.n} word")
        for c in word:
            if not (0 <= c < self.field.order):
                raise ValueError("word entry outside the field")

    def __repr__(self):
        return (f"EvalCode(n={self.n}, k={self.k}, beta={self.beta}, "
                f"field=GF({self.field.order}))")


def _as_point(p):
    from .curve import Point
    return Point(int(p[0]), int(p[1]))
