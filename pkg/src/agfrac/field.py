"""Exact arithmetic in F_Q = F_{p^e} and in towers F_{Q^l} / F_Q.

Elements are plain integer indices.  An element of an extension of degree d
over a base of order Q is the vector of its d coordinates in the polynomial
basis {1, theta, ..., theta^(d-1)}, packed little-endian:

    index = c_0 + c_1*Q + ... + c_(d-1)*Q^(d-1),   c_i a base-field index.

Consequently the base field always embeds as the indices 0..Q-1, and words
serialize as integer lists that are stable across runs.

Defining polynomials follow a published, deterministic rule: the modulus of a
degree-d extension is x^d + c_(d-1)x^(d-1) + ... + c_0 where (c_0,...,c_(d-1))
is the first coefficient vector, in ascending packed-index order, that makes
the polynomial irreducible with theta = x a generator of the multiplicative
group.  An explicit modulus may be supplied instead; it only has to be monic
and irreducible.

Every constructed field self-tests its arithmetic against the field axioms,
exhaustively when the field has at most 256 elements and on a fixed sample of
triples above that.
"""

from __future__ import annotations

import random

import numpy as np

from . import linalg

_TABLE_LIMIT = 2048      # build add/exp/log tables up to this many elements
_EXHAUSTIVE_LIMIT = 256  # axiom self-test is exhaustive up to this order
_SAMPLED_TRIPLES = 4096


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """F_p with elements 0..p-1 and arithmetic mod p."""

    zero = 0
    one = 1

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.order = p
        self.char = p
        self.degree_over_prime = 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            raise ValueError("negative exponent")
        return pow(a, e, self.p)

    def embed(self, b):
        if not (0 <= b < self.p):
            raise ValueError(f"{b} is not an element of GF({self.p})")
        return b

    def elements(self):
        return range(self.p)

    @property
    def primitive_element(self):
        for g in range(1, self.p):
            if _multiplicative_order(self, g) == self.p - 1:
                return g
        raise RuntimeError("no primitive root found")  # pragma: no cover

    def _key(self):
        return ("prime", self.p)

    def __eq__(self, other):
        return isinstance(other, (PrimeField, ExtensionField)) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"GF({self.p})"


def _multiplicative_order(field, a):
    if a == field.zero:
        return 0
    k = 1
    t = a
    while t != field.one:
        t = field.mul(t, a)
        k += 1
        if k > field.order:  # pragma: no cover
            raise RuntimeError("multiplicative order diverged")
    return k


# ---------------------------------------------------------------------------
# polynomial helpers over an arbitrary base field (ascending coefficients)

def _poly_trim(base, f):
    while f and f[-1] == base.zero:
        f.pop()
    return f


def _poly_mul(base, f, g):
    out = [base.zero] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a == base.zero:
            continue
        for j, b in enumerate(g):
            if b != base.zero:
                out[i + j] = base.add(out[i + j], base.mul(a, b))
    return _poly_trim(base, out)


def _poly_mod(base, f, m):
    f = list(f)
    dm = len(m) - 1
    inv_lead = base.inv(m[-1])
    while len(f) > dm:
        c = f[-1]
        if c != base.zero:
            factor = base.mul(c, inv_lead)
            shift = len(f) - 1 - dm
            for i, mi in enumerate(m):
                f[shift + i] = base.sub(f[shift + i], base.mul(factor, mi))
        f.pop()
    return f


def _poly_is_irreducible(base, m):
    """Trial division by all monic polynomials of degree up to deg(m)/2."""
    deg = len(m) - 1
    if deg < 1 or m[-1] == base.zero:
        return False
    if deg == 1:
        return True
    q = base.order
    for d in range(1, deg // 2 + 1):
        for idx in range(q ** d):
            div = _unpack_digits(idx, q, d) + [base.one]
            rem = _poly_mod(base, m, div)
            if all(c == base.zero for c in rem):
                return False
    return True


def _unpack_digits(index, radix, count):
    digs = []
    for _ in range(count):
        digs.append(index % radix)
        index //= radix
    return digs


def _theta_order(base, modulus):
    """Multiplicative order of x in base[x]/(modulus)."""
    deg = len(modulus) - 1
    theta = _poly_trim(base, _poly_mod(base, [base.zero, base.one], modulus))
    if not theta:
        return 0
    one = [base.one]
    t = list(theta)
    k = 1
    bound = base.order ** deg
    while _poly_trim(base, list(t)) != one:
        t = _poly_mod(base, _poly_mul(base, t, theta), modulus)
        k += 1
        if k > bound:  # pragma: no cover
            raise RuntimeError("order computation diverged")
    return k


def _find_modulus(base, degree):
    """First monic irreducible of the given degree with x primitive."""
    q = base.order
    for idx in range(q ** degree):
        m = _unpack_digits(idx, q, degree) + [base.one]
        if not _poly_is_irreducible(base, m):
            continue
        if _theta_order(base, m) == q ** degree - 1:
            return tuple(m)
    raise RuntimeError(
        f"no primitive polynomial of degree {degree} over GF({q})")  # pragma: no cover


class ExtensionField:
    """Degree-d extension of a base field, elements packed as integer indices."""

    zero = 0
    one = 1

    def __init__(self, base, degree: int, modulus=None):
        if degree < 1:
            raise ValueError("extension degree must be positive")
        self.base = base
        self.degree = degree
        self.order = base.order ** degree
        self.char = base.char
        self.degree_over_prime = degree * getattr(base, "degree_over_prime", 1)
        if modulus is None:
            self.modulus = _find_modulus(base, degree)
        else:
            modulus = tuple(modulus)
            if len(modulus) != degree + 1 or modulus[-1] != base.one:
                raise ValueError("modulus must be monic of the extension degree")
            if any(not (0 <= c < base.order) for c in modulus):
                raise ValueError("modulus coefficient outside the base field")
            if not _poly_is_irreducible(base, list(modulus)):
                raise ValueError("modulus is reducible")
            self.modulus = modulus
        self._strides = [base.order ** i for i in range(degree)]
        self._theta_reductions = self._reduction_rows()
        self._build_tables()
        self._self_test()

    # -- representation -----------------------------------------------------

    def digits(self, a: int):
        """Little-endian coordinates of ``a`` over the base field."""
        if not (0 <= a < self.order):
            raise ValueError(f"{a} is not an element index of {self!r}")
        q = self.base.order
        return tuple(_unpack_digits(a, q, self.degree))

    def from_digits(self, digs) -> int:
        digs = list(digs)
        if len(digs) != self.degree:
            raise ValueError("wrong number of digits")
        acc = 0
        for d, s in zip(digs, self._strides):
            if not (0 <= d < self.base.order):
                raise ValueError("digit outside the base field")
            acc += d * s
        return acc

    def embed(self, b: int) -> int:
        """Image of a base-field index inside this field (the identity)."""
        if not (0 <= b < self.base.order):
            raise ValueError(f"{b} is not an element of the base field")
        return b

    @property
    def theta(self) -> int:
        """The class of x, i.e. the generator adjoined by the modulus."""
        return self._strides[1] if self.degree > 1 else self.from_digits(
            [self.base.neg(self.modulus[0])])

    @property
    def primitive_element(self) -> int:
        if self._log is not None:
            return self._exp[1]
        for g in range(1, self.order):  # pragma: no cover - large fields only
            if _multiplicative_order(self, g) == self.order - 1:
                return g
        raise RuntimeError("no primitive element found")  # pragma: no cover

    def elements(self):
        return range(self.order)

    # -- arithmetic ---------------------------------------------------------

    def add(self, a, b):
        if self._add_table is not None:
            return self._add_table[a][b]
        base = self.base
        return self.from_digits(
            [base.add(x, y) for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a):
        if self._neg_table is not None:
            return self._neg_table[a]
        base = self.base
        return self.from_digits([base.neg(x) for x in self.digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_raw(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self._log is not None:
            return self._exp[self.order - 1 - self._log[a]]
        return self.pow(a, self.order - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            raise ValueError("negative exponent")
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] * e) % (self.order - 1)]
        acc = 1
        t = a
        while e:
            if e & 1:
                acc = self._mul_raw(acc, t) if acc != 1 else t
            t = self._mul_raw(t, t)
            e >>= 1
        return acc

    def _mul_raw(self, a, b):
        base = self.base
        da, db = self.digits(a), self.digits(b)
        deg = self.degree
        conv = [base.zero] * (2 * deg - 1)
        for i, x in enumerate(da):
            if x == base.zero:
                continue
            for j, y in enumerate(db):
                if y != base.zero:
                    conv[i + j] = base.add(conv[i + j], base.mul(x, y))
        out = list(conv[:deg])
        for j in range(deg, 2 * deg - 1):
            c = conv[j]
            if c != base.zero:
                row = self._theta_reductions[j - deg]
                for i in range(deg):
                    if row[i] != base.zero:
                        out[i] = base.add(out[i], base.mul(c, row[i]))
        return self.from_digits(out)

    def _reduction_rows(self):
        """Digits of theta^deg .. theta^(2*deg-2) modulo the modulus."""
        base, deg = self.base, self.degree
        rows = []
        cur = [base.neg(c) for c in self.modulus[:deg]]
        rows.append(list(cur))
        for _ in range(deg - 2):
            top = cur[-1]
            cur = [base.zero] + cur[:-1]
            if top != base.zero:
                cur = [base.add(x, base.mul(top, y)) for x, y in zip(cur, rows[0])]
            rows.append(list(cur))
        return rows

    # -- tables and self-test -------------------------------------------------

    def _build_tables(self):
        self._add_table = None
        self._neg_table = None
        self._exp = None
        self._log = None
        if self.order > _TABLE_LIMIT:
            return
        base, n = self.base, self.order
        self._neg_table = [self.from_digits([base.neg(x) for x in self.digits(a)])
                           for a in range(n)]
        add_rows = []
        all_digits = [self.digits(a) for a in range(n)]
        for da in all_digits:
            row = []
            for db in all_digits:
                row.append(self.from_digits([base.add(x, y) for x, y in zip(da, db)]))
            add_rows.append(row)
        self._add_table = add_rows
        # exp/log from a generator; theta is one by the modulus rule but a
        # user-supplied modulus may force a search.
        gen = self.theta
        if _multiplicative_order_raw(self, gen) != n - 1:
            gen = next(g for g in range(1, n)
                       if _multiplicative_order_raw(self, g) == n - 1)
        exp = [1] * (2 * (n - 1))
        log = [0] * n
        v = 1
        for i in range(n - 1):
            exp[i] = v
            log[v] = i
            v = self._mul_raw(v, gen)
        for i in range(n - 1, 2 * (n - 1)):
            exp[i] = exp[i - (n - 1)]
        self._exp = exp
        self._log = log

    def _self_test(self):
        n = self.order
        if n <= _EXHAUSTIVE_LIMIT:
            add = np.array(self._add_table, dtype=np.int16)
            mul = np.array([[self.mul(a, b) for b in range(n)] for a in range(n)],
                           dtype=np.int16)
            ok = (np.array_equal(add, add.T) and np.array_equal(mul, mul.T)
                  and np.array_equal(add[add], add[:, add])
                  and np.array_equal(mul[mul], mul[:, mul])
                  and np.array_equal(add[0], np.arange(n))
                  and np.array_equal(mul[1], np.arange(n))
                  and np.array_equal(mul[0], np.zeros(n, dtype=np.int16)))
            if ok:
                for a in range(n):
                    if not np.array_equal(mul[a][add], add[np.ix_(mul[a], mul[a])]):
                        ok = False
                        break
            if ok:
                neg = np.array(self._neg_table)
                ok = np.array_equal(add[np.arange(n), neg], np.zeros(n, dtype=np.int16))
            if ok:
                invs = np.array([self.inv(a) for a in range(1, n)])
                ok = all(self.mul(a, invs[a - 1]) == 1 for a in range(1, n))
        else:
            rng = random.Random(("field-axioms", self.order, self.modulus).__repr__())
            ok = True
            for _ in range(_SAMPLED_TRIPLES):
                a = rng.randrange(n)
                b = rng.randrange(n)
                c = rng.randrange(n)
                if self.add(a, b) != self.add(b, a) or self.mul(a, b) != self.mul(b, a):
                    ok = False
                    break
                if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)):
                    ok = False
                    break
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                    ok = False
                    break
                if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)):
                    ok = False
                    break
                if self.add(a, self.neg(a)) != 0:
                    ok = False
                    break
                if a != 0 and self.mul(a, self.inv(a)) != 1:
                    ok = False
                    break
        if not ok:
            raise RuntimeError(
                f"field axiom self-test failed for {self!r}")  # pragma: no cover

    def _key(self):
        return ("ext", self.base._key(), self.degree, self.modulus)

    def __eq__(self, other):
        return isinstance(other, (PrimeField, ExtensionField)) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"GF({self.order})"


def _multiplicative_order_raw(field, a):
    if a == 0:
        return 0
    k = 1
    t = a
    while t != 1:
        t = field._mul_raw(t, a)
        k += 1
        if k > field.order:  # pragma: no cover
            raise RuntimeError("multiplicative order diverged")
    return k


class PrimePowerField(ExtensionField):
    """F_{p^e} presented over its prime field."""

    def __init__(self, p: int, e: int, modulus=None):
        super().__init__(prime_field(p), e, modulus)


# ---------------------------------------------------------------------------
# cached constructors; fields are immutable, so sharing instances is safe

_CACHE: dict = {}


def prime_field(p: int) -> PrimeField:
    key = ("prime", p)
    if key not in _CACHE:
        _CACHE[key] = PrimeField(p)
    return _CACHE[key]


def prime_power_field(p: int, e: int, modulus=None) -> ExtensionField:
    if e == 1 and modulus is None:
        base = prime_field(p)
        key = ("ppf", p, 1, None)
        if key not in _CACHE:
            _CACHE[key] = ExtensionField(base, 1)
        return _CACHE[key]
    key = ("ppf", p, e, tuple(modulus) if modulus is not None else None)
    if key not in _CACHE:
        _CACHE[key] = PrimePowerField(p, e, modulus)
    return _CACHE[key]


def extension_field(base, degree: int, modulus=None) -> ExtensionField:
    key = ("ext", base._key(), degree, tuple(modulus) if modulus is not None else None)
    if key not in _CACHE:
        _CACHE[key] = ExtensionField(base, degree, modulus)
    return _CACHE[key]


def parse_field_spec(spec: str, modulus=None) -> ExtensionField:
    """Parse "p^e" (or "p") into a prime-power field."""
    text = spec.strip()
    if "^" in text:
        p_str, e_str = text.split("^", 1)
        p, e = int(p_str), int(e_str)
    else:
        p, e = int(text), 1
    if p < 2 or e < 1:
        raise ValueError(f"bad field spec {spec!r}")
    return prime_power_field(p, e, modulus)


class ExtensionTower:
    """F = F_{Q^l} over B = F_Q with a chosen basis and its dual.

    The dual basis nu of zeta satisfies tr(zeta_s * nu_j) = delta_{s,j}, so
    every beta in F decomposes as  beta = sum_s tr(zeta_s * beta) * nu_s,
    which is exactly what ``project_element``/``lift_projections`` compute.
    """

    def __init__(self, base, degree: int, basis=None, modulus=None):
        self.base = base
        self.degree = degree
        self.ext = extension_field(base, degree, modulus)
        self._trace_table = None
        if self.ext.order <= 4096:
            self._trace_table = [self._trace_raw(a) for a in range(self.ext.order)]
        if basis is None:
            theta = self.ext.theta
            zeta = []
            v = self.ext.one
            for _ in range(degree):
                zeta.append(v)
                v = self.ext.mul(v, theta)
        else:
            zeta = [int(z) for z in basis]
            if len(zeta) != degree:
                raise ValueError("basis must have one element per tower degree")
            for z in zeta:
                if not (0 <= z < self.ext.order):
                    raise ValueError("basis element outside the extension field")
        self.zeta = tuple(zeta)
        self.nu = tuple(self.dual_basis(self.zeta))
        for s in range(degree):
            for j in range(degree):
                want = base.one if s == j else base.zero
                if self.trace_to_base(self.ext.mul(self.zeta[s], self.nu[j])) != want:
                    raise RuntimeError("dual basis verification failed")  # pragma: no cover

    def embed(self, b: int) -> int:
        return self.ext.embed(b)

    def _trace_raw(self, beta: int) -> int:
        q = self.base.order
        acc = beta
        t = beta
        for _ in range(self.degree - 1):
            t = self.ext.pow(t, q)
            acc = self.ext.add(acc, t)
        digs = self.ext.digits(acc)
        if any(d != self.base.zero for d in digs[1:]):
            raise RuntimeError(
                "trace left the base field; tower construction is broken")  # pragma: no cover
        return digs[0]

    def trace_to_base(self, beta: int) -> int:
        """Relative trace F -> B, the sum of the Q-power Frobenius orbit."""
        if self._trace_table is not None:
            return self._trace_table[beta]
        return self._trace_raw(beta)

    def dual_basis(self, zeta):
        """Dual basis of ``zeta`` w.r.t. the trace form.

        Computed by inverting the Gram matrix (tr(zeta_s * zeta_j)) over B;
        a singular Gram matrix means ``zeta`` is linearly dependent.
        """
        zeta = list(zeta)
        if len(zeta) != self.degree:
            raise ValueError("basis must have one element per tower degree")
        ext, base = self.ext, self.base
        gram = [[self.trace_to_base(ext.mul(zs, zj)) for zj in zeta] for zs in zeta]
        inv = linalg.invert(base, gram)
        if inv is None:
            raise ValueError("basis is linearly dependent over the base field")
        nu = []
        for j in range(self.degree):
            acc = ext.zero
            for s in range(self.degree):
                acc = ext.add(acc, ext.mul(ext.embed(inv[s][j]), zeta[s]))
            nu.append(acc)
        return nu

    def project_element(self, beta: int):
        """The l base-field projections (tr(zeta_s * beta))_s of beta."""
        ext = self.ext
        return [self.trace_to_base(ext.mul(z, beta)) for z in self.zeta]

    def lift_projections(self, comps) -> int:
        """Inverse of ``project_element``: sum_s comps_s * nu_s."""
        comps = list(comps)
        if len(comps) != self.degree:
            raise ValueError("wrong number of projections")
        ext = self.ext
        acc = ext.zero
        for c, n in zip(comps, self.nu):
            acc = ext.add(acc, ext.mul(ext.embed(c), n))
        return acc

    def __repr__(self):
        return f"Tower(GF({self.ext.order})/GF({self.base.order}))"
