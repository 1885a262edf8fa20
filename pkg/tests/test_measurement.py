import itertools

import numpy as np
import pytest

from cstomo.measurement import (
    MeasurementPlan,
    MeasurementRecord,
    acquire,
    adjoint_map,
    apply_map,
    expectation,
    pauli_from_index,
    pauli_index,
    pauli_matrix,
    sample_paulis,
    simulate_shots,
)
from cstomo.qstate import DensityMatrix, haar_random_pure, w_state


def random_hermitian(d, rng):
    x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (x + x.conj().T) / 2


def test_pauli_matrix_basics():
    assert np.array_equal(pauli_matrix("I"), np.eye(2))
    assert np.array_equal(pauli_matrix("ZZ"), np.diag([1.0, -1.0, -1.0, 1.0]).astype(complex))
    for p in ("X", "ZZ", "XYZ", "IXX"):
        assert abs(np.trace(pauli_matrix(p))) == 0.0
    with pytest.raises(ValueError):
        pauli_matrix("XQ")


def test_pauli_index_round_trip():
    for n in (1, 2, 3):
        for idx in range(4**n):
            assert pauli_index(pauli_from_index(idx, n)) == idx


def test_fast_map_matches_dense_exhaustively():
    rng = np.random.default_rng(0)
    for n in (1, 2):
        d = 2**n
        words = tuple(
            "".join(w) for w in itertools.product("IXYZ", repeat=n)
        )
        plan = MeasurementPlan(n, words)
        X = random_hermitian(d, rng)
        fast = apply_map(plan, X)
        dense = np.array([np.trace(pauli_matrix(p) @ X).real for p in words])
        assert np.max(np.abs(fast - dense)) < 1e-10


def test_fast_map_matches_dense_sampled_n5():
    rng = np.random.default_rng(1)
    plan = sample_paulis(5, 25, rng)
    X = random_hermitian(32, rng)
    fast = apply_map(plan, X)
    dense = np.array([np.trace(pauli_matrix(p) @ X).real for p in plan.paulis])
    assert np.max(np.abs(fast - dense)) < 1e-10


def test_sample_paulis_full_set():
    rng = np.random.default_rng(2)
    plan = sample_paulis(2, 16, rng)
    assert set(plan.paulis) == {
        "".join(w) for w in itertools.product("IXYZ", repeat=2)
    }


def test_sample_paulis_deterministic():
    a = sample_paulis(3, 10, np.random.default_rng(42))
    b = sample_paulis(3, 10, np.random.default_rng(42))
    assert a.paulis == b.paulis


def test_sample_paulis_rejects_oversized():
    with pytest.raises(ValueError):
        sample_paulis(1, 5, np.random.default_rng(0))


def test_sample_paulis_single_qubit_frequencies():
    rng = np.random.default_rng(3)
    trials = 10**5
    counts = {p: 0 for p in "IXYZ"}
    for _ in range(trials):
        counts[sample_paulis(1, 1, rng).paulis[0]] += 1
    sigma = np.sqrt(trials * 0.25 * 0.75)
    for p in "IXYZ":
        assert abs(counts[p] - trials / 4) <= 3 * sigma


def test_expectation_values():
    zero = DensityMatrix.from_matrix(np.diag([1.0, 0.0]).astype(complex))
    assert expectation("Z", zero) == 1.0
    bell = np.zeros((4, 4), dtype=complex)
    for i in (0, 3):
        for j in (0, 3):
            bell[i, j] = 0.5
    assert abs(expectation("XX", DensityMatrix.from_matrix(bell)) - 1.0) < 1e-12
    assert expectation("ZZZ", w_state(3)) == -1.0
    with pytest.raises(ValueError):
        expectation("ZZ", zero)


def test_apply_map_identity_component():
    plan = MeasurementPlan(2, ("II", "XI", "ZZ"))
    vec = apply_map(plan, np.eye(4, dtype=complex) / 4)
    assert np.allclose(vec, [1.0, 0.0, 0.0], atol=1e-12)


def test_apply_map_linearity():
    rng = np.random.default_rng(4)
    plan = sample_paulis(3, 20, rng)
    X, Y = random_hermitian(8, rng), random_hermitian(8, rng)
    a, b = 0.6, -1.7
    lhs = apply_map(plan, a * X + b * Y)
    rhs = a * apply_map(plan, X) + b * apply_map(plan, Y)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_apply_map_bloch_components():
    plan = MeasurementPlan(1, ("I", "X", "Y", "Z"))
    zero = np.diag([1.0, 0.0]).astype(complex)
    assert np.allclose(apply_map(plan, zero), [1.0, 0.0, 0.0, 1.0], atol=1e-12)


def test_adjoint_map_unit_vectors():
    rng = np.random.default_rng(5)
    plan = sample_paulis(2, 6, rng)
    for k in range(plan.m):
        c = np.zeros(plan.m)
        c[k] = 1.0
        assert np.allclose(adjoint_map(plan, c), pauli_matrix(plan.paulis[k]), atol=1e-12)
    assert np.all(adjoint_map(plan, np.zeros(plan.m)) == 0)
    with pytest.raises(ValueError):
        adjoint_map(plan, np.zeros(plan.m + 1))


def test_adjoint_identity_random_pairs():
    rng = np.random.default_rng(6)
    plan = sample_paulis(3, 30, rng)
    for _ in range(100):
        X = random_hermitian(8, rng)
        c = rng.normal(size=plan.m)
        lhs = float(apply_map(plan, X) @ c)
        rhs = float(np.vdot(adjoint_map(plan, c), X).real)
        assert abs(lhs - rhs) < 1e-10


def test_gram_identity():
    # distinct Paulis are Frobenius-orthogonal: the map's Gram matrix is d*I
    rng = np.random.default_rng(7)
    plan = sample_paulis(2, 10, rng)
    gram = np.array([apply_map(plan, pauli_matrix(p)) for p in plan.paulis])
    assert np.max(np.abs(gram - 4.0 * np.eye(plan.m))) < 1e-10


def test_full_plan_round_trip():
    rng = np.random.default_rng(8)
    words = tuple("".join(w) for w in itertools.product("IXYZ", repeat=2))
    plan = MeasurementPlan(2, words)
    X = random_hermitian(4, rng)
    back = adjoint_map(plan, apply_map(plan, X)) / 4.0
    assert np.max(np.abs(back - X)) < 1e-10


def test_simulate_shots_deterministic_extremes():
    rng = np.random.default_rng(9)
    for _ in range(5):
        assert simulate_shots(1.0, 17, rng) == 1.0
        assert simulate_shots(-1.0, 17, rng) == -1.0


def test_simulate_shots_concentration():
    rng = np.random.default_rng(10)
    est = simulate_shots(0.0, 10**6, rng)
    assert abs(est) <= 5e-3


def test_simulate_shots_lattice():
    rng = np.random.default_rng(11)
    shots = 7
    for _ in range(50):
        est = simulate_shots(0.3, shots, rng)
        k = (est * shots + shots) / 2
        assert abs(k - round(k)) < 1e-12
        assert -1.0 <= est <= 1.0


def test_simulate_shots_validation():
    rng = np.random.default_rng(12)
    with pytest.raises(ValueError):
        simulate_shots(1.1, 10, rng)
    with pytest.raises(ValueError):
        simulate_shots(0.0, 0, rng)


def test_acquire_exact_mode():
    rng = np.random.default_rng(13)
    rho = haar_random_pure(3, rng)
    plan = sample_paulis(3, 12, rng)
    rec = acquire(plan, rho, None)
    assert np.array_equal(rec.y, rec.true_expectations)
    assert rec.shots_per_setting is None


def test_acquire_assembles_y():
    rng = np.random.default_rng(14)
    rho = haar_random_pure(3, rng)
    plan = sample_paulis(3, 12, rng)
    v = rng.normal(size=12)
    z = rng.normal(size=12) * 0.1
    rec = acquire(plan, rho, 60, v, z, rng=rng)
    assert np.max(np.abs(rec.y - (rec.shot_estimates + v + z))) <= 1e-12
    assert np.array_equal(rec.v_true, v)
    assert np.array_equal(rec.z_true, z)


def test_acquire_binomial_tail():
    # every estimate within 5 sigma of its expectation
    rng = np.random.default_rng(15)
    rho = haar_random_pure(3, rng)
    plan = sample_paulis(3, 30, rng)
    shots = 400
    rec = acquire(plan, rho, shots, rng=rng)
    bound = 5.0 * np.sqrt((1.0 - rec.true_expectations**2) / shots)
    assert np.all(np.abs(rec.shot_estimates - rec.true_expectations) <= bound + 1e-12)


def test_acquire_identity_estimate_is_one():
    rng = np.random.default_rng(16)
    rho = haar_random_pure(2, rng)
    plan = MeasurementPlan(2, ("II", "XZ", "YY"))
    rec = acquire(plan, rho, 5, rng=rng)
    assert rec.shot_estimates[0] == 1.0


def test_acquire_validation():
    rng = np.random.default_rng(17)
    rho = haar_random_pure(2, rng)
    plan = sample_paulis(2, 4, rng)
    with pytest.raises(ValueError):
        acquire(plan, rho, 10, np.zeros(3), rng=rng)
    with pytest.raises(ValueError):
        acquire(plan, rho, 10)  # missing rng for finite shots


def test_record_json_round_trip():
    rng = np.random.default_rng(18)
    rho = haar_random_pure(2, rng)
    plan = sample_paulis(2, 6, rng)
    rec = acquire(plan, rho, 40, rng.normal(size=6), rng=rng)
    back = MeasurementRecord.from_json(rec.to_json())
    assert back.plan.paulis == rec.plan.paulis
    assert np.array_equal(back.y, rec.y)
    assert back.shots_per_setting == 40


def test_record_rejects_inconsistent_y():
    plan = MeasurementPlan(1, ("Z",))
    with pytest.raises(ValueError):
        MeasurementRecord(
            plan=plan,
            true_expectations=np.array([0.5]),
            shots_per_setting=10,
            shot_estimates=np.array([0.4]),
            v_true=np.array([0.0]),
            z_true=np.array([0.0]),
            y=np.array([0.9]),
        )


def test_plan_validation():
    with pytest.raises(ValueError):
        MeasurementPlan(2, ("XX", "XX"))
    with pytest.raises(ValueError):
        MeasurementPlan(2, ("XXX",))
    with pytest.raises(ValueError):
        MeasurementPlan(1, ())
