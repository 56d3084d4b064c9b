import math

import numpy as np
import pytest

import naimark_lab as nl


def test_general_extension_reproduces_povm():
    rng = np.random.default_rng(3)
    g = [rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(4)]
    raw = [m.conj().T @ m for m in g]
    w, v = np.linalg.eigh(sum(raw))
    s = v @ np.diag(w ** -0.5) @ v.conj().T
    povm = nl.Povm([s @ e @ s for e in raw])
    ext = nl.general_extension(povm)
    assert ext.anc_dim == 4
    assert len(ext.projectors) == 4
    check = nl.verify_extension(ext, povm)
    assert check.passed and check.max_delta < 1e-9
    for p, e in zip(ext.induced_effects(), povm.effects):
        assert np.allclose(p, e, atol=1e-10)


def test_invalid_povm_raises():
    with pytest.raises(ValueError):
        nl.Povm([np.eye(2), np.eye(2)])


def test_pair_inside_and_outside_region():
    a, b = nl.unsharp_spin("x", 0.5), nl.unsharp_spin("y", 0.5)
    assert nl.feasibility_oracle([a, b]).feasible
    w, residual = nl.find_w(a, b, seed=1)
    assert residual <= 1e-6
    joint = nl.joint_from_w(a, b, w)
    assert joint.shape == [2, 2]
    assert np.allclose(joint.marginal(1)[0], b[0], atol=1e-8)

    theta = nl.xy_closed_form_theta(0.5, 0.5)
    assert theta == pytest.approx(math.asin(1 / 3))
    assert nl.w_residual(a, b, np.exp(1j * theta) * np.diag([1, -1])) < 1e-10

    far = [nl.unsharp_spin("x", 0.8), nl.unsharp_spin("y", 0.8)]
    assert nl.feasibility_oracle(far).status == "infeasible"
    assert nl.find_w(*far, restarts=2, budget=1000) is None
    assert nl.xy_closed_form_theta(0.8, 0.8) is None


def test_estimator_and_trio():
    sharp = [nl.unsharp_spin("x", 1.0), nl.unsharp_spin("z", 1.0)]
    assert nl.incompatibility_estimate(sharp, restarts=2, budget=1000).value > 1e-3
    assert nl.unsharp_trio_joint(0.5)["valid"]
    assert not nl.unsharp_trio_joint(0.6)["valid"]


def test_region_and_examples():
    rows = nl.region_scan("x", "y", grid=3, seed=2)
    assert len(rows) == 9
    assert rows[0]["oracle"] == "compatible"
    assert rows[-1]["closed_form"] == "incompatible"
    assert all(c["passed"] for c in nl.run_examples())
