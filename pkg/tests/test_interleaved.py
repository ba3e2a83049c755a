import random

import pytest

from agfrac import (CollabConfig, DecodeFailure, EvalCode, InterleavedCode,
                    RingElement, apply_T, build_collab_system, collab_decode,
                    fractional_decode, project_received, sweep_locator_excess)
from agfrac.linalg import matvec


def _encode_random(desk, rng):
    coeffs = [rng.randrange(desk.ext.order) for _ in range(desk.code.k)]
    return desk.code.encode(coeffs)


def _inject(field, word, positions, rng):
    out = list(word)
    for i in positions:
        out[i] = field.add(out[i], 1 + rng.randrange(field.order - 1))
    return out


def test_interleaved_code_membership(f729):
    rng = random.Random(1)
    stack = InterleavedCode.of_virtual_projections(f729.spec)
    assert not stack.homogeneous              # betas differ: (12, 9)
    assert (stack.m, stack.n) == (2, 27)
    f = f729.code.function_of([rng.randrange(f729.ext.order) for _ in range(f729.code.k)])
    rows = [[apply_T(f729.spec, f, t).evaluate(p) for p in f729.points]
            for t in range(f729.spec.m)]
    assert stack.contains(rows)
    tampered = [list(r) for r in rows]
    tampered[0][5] = f729.base.add(tampered[0][5], 1)
    assert not stack.contains(tampered)
    same = EvalCode(f729.curve, f729.base, f729.points, 9)
    assert InterleavedCode([same, same]).homogeneous
    with pytest.raises(ValueError):
        InterleavedCode([])
    with pytest.raises(ValueError):
        stack.contains(rows[:1])


def test_system_shapes_f81(f81):
    # l = 2, n = 27, t' = 4, alpha = 15, g = 3  =>  s = 20, s' = 5, A is 54 x 45
    config = CollabConfig.for_spec(f81.spec, 4)
    assert (config.alpha, config.s, config.s_prime) == (15, 20, 5)
    system = build_collab_system(config, [[0] * 27])
    assert len(system) == 54 and len(system[0]) == 45


def test_zero_matrix_nullspace_contains_free_locator(f81):
    config = CollabConfig.for_spec(f81.spec, 4)
    system = build_collab_system(config, [[0] * 27])
    base = f81.base
    l, s, sp = f81.spec.l, config.s, config.s_prime
    # (0; ...; 0; v_{l+1}) solves the system when pi = 0
    for j in range(sp):
        vec = [base.zero] * (l * s + sp)
        vec[l * s + j] = base.one
        assert all(x == base.zero for x in matvec(base, system, vec))


def test_blocks_beyond_m_are_zero(f729):
    spec = f729.spec
    config = CollabConfig.for_spec(spec, 2)
    rng = random.Random(4)
    pi = [[rng.randrange(9) for _ in range(spec.n)] for _ in range(spec.m)]
    system = build_collab_system(config, pi)
    s, sp, n, l = config.s, config.s_prime, spec.n, spec.l
    for i in range(spec.m, l):
        for r in range(n):
            row = system[i * n + r]
            assert all(x == 0 for x in row[l * s:])
            assert any(x != 0 for x in row[i * s:(i + 1) * s])


def test_true_pair_lies_in_nullspace(f729):
    """For an errorless download, (T_t(f) * Lam ; Lam) solves the system,
    whatever locator is drawn from L((g + t') P_inf)."""
    spec = f729.spec
    base = spec.base
    config = CollabConfig.for_spec(spec, 3)   # g + t' = 6
    monos = config.numerator_monomials
    rng = random.Random(9)
    f = f729.code.function_of([rng.randrange(f729.ext.order) for _ in range(f729.code.k)])
    word = [f.evaluate(p) for p in f729.points]
    pi = project_received(spec, word)
    system = build_collab_system(config, pi)
    locators = [RingElement.constant(spec.curve, base, 2),
                RingElement.coordinate_shift(spec.curve, base, "x", 1),
                RingElement.coordinate_shift(spec.curve, base, "y", 2),
                RingElement(spec.curve, base, {(2, 0): 1, (0, 0): 5})]
    for lam in locators:
        assert lam.pole_order() <= spec.curve.genus + config.t_prime
        vec = []
        for t in range(spec.m):
            numerator = apply_T(spec, f, t) * lam
            vec.extend(numerator.coefficient(m) for m in monos)
        vec.extend([base.zero] * ((spec.l - spec.m) * config.s))
        vec.extend(lam.coefficient(m) for m in monos[:config.s_prime])
        assert all(x == base.zero for x in matvec(base, system, vec))


def test_config_validations(f729):
    with pytest.raises(ValueError):
        CollabConfig.for_spec(f729.spec, -1)
    with pytest.raises(ValueError):
        CollabConfig.for_spec(f729.spec, 1000)   # numerator space beyond n
    config = CollabConfig.for_spec(f729.spec, 5)
    assert 0.0 < config.a < 1.0 < 1.0 / (1.0 - config.b)
    assert config.brown_radius() < f729.spec.n


def test_collab_decode_errorless(f729):
    rng = random.Random(15)
    spec = f729.spec
    word = _encode_random(f729, rng)
    pi = project_received(spec, word)
    decoded, _ = collab_decode(CollabConfig.for_spec(spec, 0), pi)
    assert decoded == word


def test_collab_matches_fractional_within_radius(f729):
    spec = f729.spec
    radius = spec.radii["guaranteed"]
    assert radius == 5
    rng = random.Random(27)
    config = CollabConfig.for_spec(spec, radius)
    for _ in range(25):
        word = _encode_random(f729, rng)
        weight = rng.randrange(radius + 1)
        received = _inject(f729.ext, word, rng.sample(range(spec.n), weight), rng)
        pi = project_received(spec, received)
        got_c, _ = collab_decode(config, pi)
        got_f, _ = fractional_decode(spec, pi)
        assert got_c == got_f == word


def test_collab_beats_single_row_decoding_beyond_radius(f729):
    spec = f729.spec
    weight = spec.radii["guaranteed"] + 1
    rng = random.Random(31)
    config = CollabConfig.for_spec(spec, weight)
    collab_ok = fractional_ok = 0
    trials = 20
    for _ in range(trials):
        word = _encode_random(f729, rng)
        received = _inject(f729.ext, word, rng.sample(range(spec.n), weight), rng)
        pi = project_received(spec, received)
        try:
            got, _ = collab_decode(config, pi)
            collab_ok += got == word
        except DecodeFailure:
            pass
        try:
            got, _ = fractional_decode(spec, pi)
            fractional_ok += got == word
        except DecodeFailure:
            pass
    assert collab_ok > 0
    assert collab_ok >= fractional_ok


def test_collab_guard_is_sound(f729):
    """Whatever comes back re-encodes onto the download off a small column set."""
    spec = f729.spec
    rng = random.Random(47)
    config = CollabConfig.for_spec(spec, 6)
    bound = spec.curve.genus + 6
    for weight in (6, 9):
        for _ in range(10):
            word = _encode_random(f729, rng)
            received = _inject(f729.ext, word, rng.sample(range(spec.n), weight), rng)
            pi = project_received(spec, received)
            try:
                decoded, _ = collab_decode(config, pi)
            except DecodeFailure:
                continue
            check = project_received(spec, decoded)
            mismatch = sum(1 for i in range(spec.n)
                           if any(check[t][i] != pi[t][i] for t in range(spec.m)))
            assert mismatch <= bound


def test_sweep_errorless_succeeds_at_zero(f729):
    rng = random.Random(50)
    word = _encode_random(f729, rng)
    pi = project_received(f729.spec, word)
    decoded, _, used = sweep_locator_excess(f729.spec, pi, range(0, 7))
    assert decoded == word and used == 0


def test_sweep_finds_workable_excess(f729):
    spec = f729.spec
    rng = random.Random(53)
    g = spec.curve.genus
    word = _encode_random(f729, rng)
    received = _inject(f729.ext, word, rng.sample(range(spec.n), 5), rng)
    pi = project_received(spec, received)
    decoded, _, used = sweep_locator_excess(spec, pi, range(0, g + 4))
    assert decoded == word
    assert used <= g + 3


def test_sweep_empty_range_rejected(f729):
    with pytest.raises(ValueError):
        sweep_locator_excess(f729.spec, [[0] * 27, [0] * 27], [])
