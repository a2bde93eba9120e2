import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mvfuse.errors import ContractError, DimensionError, DomainError, TrainingError
from mvfuse.numcore import (
    Adam, adam_step, autodiff as ad, backward, gaussian_sample, kl_diag,
    kl_std_normal, make_rng, param,
)
from mvfuse.numcore.rng import derive_seed

from _fd import numeric_grad, rel_error


class TestMatmul:
    def test_identity(self):
        b = np.array([[5.0, 6.0], [7.0, 8.0]])
        np.testing.assert_array_equal(ad.matmul(np.eye(2), b).value, b)

    def test_hand_computed(self):
        out = ad.matmul([[1.0, 2.0], [3.0, 4.0]], [[5.0, 6.0], [7.0, 8.0]])
        np.testing.assert_array_equal(out.value, [[19.0, 22.0], [43.0, 50.0]])

    def test_shape_mismatch_names_both_shapes(self):
        with pytest.raises(DimensionError, match=r"\(2, 3\).*\(2, 3\)"):
            ad.matmul(np.ones((2, 3)), np.ones((2, 3)))


class TestElementwise:
    def test_relu(self):
        np.testing.assert_array_equal(ad.relu([[-1.0, 2.0]]).value, [[0.0, 2.0]])

    def test_sigmoid_at_zero(self):
        assert ad.sigmoid([[0.0]]).value[0, 0] == 0.5

    def test_add_shape_mismatch(self):
        with pytest.raises(DimensionError):
            ad.add(np.ones((2, 3)), np.ones((2, 2)))

    def test_row_bias_broadcast(self):
        out = ad.add(np.zeros((3, 2)), [[1.0, 2.0]])
        np.testing.assert_array_equal(out.value, [[1.0, 2.0]] * 3)

    @pytest.mark.parametrize("bad", [0.0, -1.0])
    def test_log_domain(self, bad):
        with pytest.raises(DomainError):
            ad.log([[1.0, bad]])

    def test_overflow_is_reported(self):
        with pytest.raises(DomainError):
            ad.exp([[1000.0]])


# Each case builds a scalar loss from two parameter nodes; inputs are chosen
# away from kinks and domain edges.
def _cases():
    def w(shape, seed):
        return np.random.default_rng(seed).normal(size=shape)

    return {
        "add": lambda a, b: ad.sum(ad.mul(ad.add(a, b), w(a.shape, 1))),
        "add_bias": lambda a, b: ad.sum(ad.mul(ad.add(a, ad.matmul(np.full((1, b.shape[0]), 0.5), b)), w(a.shape, 2))),
        "sub": lambda a, b: ad.sum(ad.mul(ad.sub(a, b), w(a.shape, 3))),
        "mul": lambda a, b: ad.sum(ad.mul(a, b)),
        "div": lambda a, b: ad.sum(ad.div(a, ad.add(ad.square(b), 1.0))),
        "matmul": lambda a, b: ad.sum(ad.square(ad.matmul(a, ad.transpose(b)))),
        "scale": lambda a, b: ad.sum(ad.mul(ad.scale(a, -2.5), b)),
        "relu": lambda a, b: ad.sum(ad.mul(ad.relu(a), b)),
        "tanh": lambda a, b: ad.sum(ad.mul(ad.tanh(a), b)),
        "sigmoid": lambda a, b: ad.sum(ad.mul(ad.sigmoid(a), b)),
        "exp": lambda a, b: ad.sum(ad.mul(ad.exp(a), b)),
        "log": lambda a, b: ad.sum(ad.mul(ad.log(ad.add(ad.square(a), 0.5)), b)),
        "softplus": lambda a, b: ad.sum(ad.mul(ad.softplus(a), b)),
        "sqrt": lambda a, b: ad.sum(ad.mul(ad.sqrt(ad.add(ad.square(a), 0.5)), b)),
        "mean": lambda a, b: ad.mul(ad.mean(ad.mul(a, b)), ad.mean(a)),
        "row_sum": lambda a, b: ad.sum(ad.square(ad.row_sum(ad.mul(a, b)))),
        "row_broadcast": lambda a, b: ad.sum(ad.mul(ad.row_broadcast(ad.row_sum(a), a.shape[1]), b)),
        "scalar_broadcast": lambda a, b: ad.sum(ad.mul(ad.mul(a, ad.mean(b)), b)),
    }


CASES = _cases()


@pytest.mark.parametrize("name", sorted(CASES))
@pytest.mark.parametrize("seed", range(10))
def test_finite_differences(name, seed):
    rng = np.random.default_rng(seed)
    shape = (int(rng.integers(1, 5)), int(rng.integers(1, 5)))
    a = param(rng.normal(size=shape))
    b = param(rng.normal(size=shape))
    build = CASES[name]
    grads = backward(build(a, b), [a, b])

    def f():
        return float(build(a, b).value[0, 0])

    for p in (a, b):
        assert rel_error(grads[p], numeric_grad(f, p)) < 1e-4


@pytest.mark.parametrize("seed", range(10))
def test_finite_differences_gaussian_ops(seed):
    rng = np.random.default_rng(seed)
    shape = (3, 4)
    mu, lv = param(rng.normal(size=shape)), param(0.5 * rng.normal(size=shape))
    mu2, lv2 = param(rng.normal(size=shape)), param(0.5 * rng.normal(size=shape))

    def build():
        z = gaussian_sample(mu, lv, 99)
        return ad.add(ad.add(ad.sum(ad.square(z)), kl_std_normal(mu, lv)),
                      kl_diag(mu, lv, mu2, lv2))

    grads = backward(build())
    f = lambda: float(build().value[0, 0])  # noqa: E731
    for p in (mu, lv, mu2, lv2):
        assert rel_error(grads[p], numeric_grad(f, p)) < 1e-4


class TestBackward:
    def test_sum_gives_all_ones(self):
        p = param(np.random.default_rng(0).normal(size=(3, 5)))
        g = backward(ad.sum(p))[p]
        np.testing.assert_array_equal(g, np.ones((3, 5)))

    def test_squared_product_matches_fd(self):
        rng = np.random.default_rng(7)
        p, w = param(0.1 * rng.normal(size=(3, 4))), param(0.1 * rng.normal(size=(4, 2)))
        build = lambda: ad.sum(ad.square(ad.matmul(p, w)))  # noqa: E731
        grads = backward(build())
        f = lambda: float(build().value[0, 0])  # noqa: E731
        assert rel_error(grads[p], numeric_grad(f, p)) < 1e-4
        assert rel_error(grads[w], numeric_grad(f, w)) < 1e-4

    def test_no_parameters(self):
        assert backward(ad.sum(ad.const(np.ones((2, 2))))) == {}

    def test_non_scalar_loss(self):
        with pytest.raises(ContractError):
            backward(ad.relu(param(np.ones((2, 2)))))

    def test_shared_subexpression_accumulates(self):
        p = param([[3.0]])
        loss = ad.mul(p, p)
        assert backward(ad.add(loss, loss))[p][0, 0] == 12.0


class TestAdam:
    def test_zero_gradient_leaves_params(self):
        p = param([[1.5, -2.0]])
        opt = Adam([p])
        adam_step([p], {p: np.zeros((1, 2))}, opt)
        np.testing.assert_array_equal(p.value, [[1.5, -2.0]])
        assert opt.step_count == 1

    def test_first_step_is_lr_times_sign(self):
        p = param([[0.3]])
        opt = Adam([p], lr=0.001)
        opt.step({p: np.array([[1.0]])})
        assert p.value[0, 0] == pytest.approx(0.3 - 0.001, abs=1e-9)

    def test_nan_gradient_raises_with_indices(self):
        p = param([[0.0]])
        with pytest.raises(TrainingError, match="epoch 3.*batch 7"):
            Adam([p]).step({p: np.array([[np.nan]])}, epoch=3, batch=7)


class TestGaussianSample:
    def test_degenerate_variance(self):
        mu = np.random.default_rng(1).normal(size=(4, 3))
        z = gaussian_sample(mu, np.full((4, 3), -60.0), 5).value
        assert np.max(np.abs(z - mu)) < 1e-10

    def test_same_seed_is_bit_identical(self):
        mu, lv = np.zeros((5, 5)), np.zeros((5, 5))
        a = gaussian_sample(mu, lv, 42).value
        b = gaussian_sample(mu, lv, 42).value
        assert a.tobytes() == b.tobytes()

    def test_moments(self):
        z = gaussian_sample(np.zeros((1, 10_000)), np.zeros((1, 10_000)), 2024).value
        assert abs(z.mean()) < 0.05
        assert abs(z.var() - 1.0) < 0.1

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            gaussian_sample(np.zeros((2, 2)), np.zeros((2, 3)), 0)


class TestKL:
    def test_zero(self):
        assert kl_std_normal([[0.0]], [[0.0]]).value[0, 0] == 0.0

    def test_unit_mean(self):
        assert kl_std_normal([[1.0]], [[0.0]]).value[0, 0] == pytest.approx(0.5)

    def test_log_four_variance(self):
        expected = 0.5 * (4 - 1 - math.log(4))
        got = kl_std_normal([[0.0]], [[math.log(4)]]).value[0, 0]
        assert got == pytest.approx(expected, abs=1e-12)
        assert got == pytest.approx(0.8069, abs=1e-3)

    @settings(max_examples=200, deadline=None)
    @given(arrays(np.float64, (2, 3), elements=st.floats(-5, 5)),
           arrays(np.float64, (2, 3), elements=st.floats(-5, 5)))
    def test_non_negative(self, mu, logvar):
        assert kl_std_normal(mu, logvar).value[0, 0] >= 0.0

    def test_diag_against_std_normal(self):
        rng = np.random.default_rng(3)
        mu, lv = rng.normal(size=(2, 3)), rng.normal(size=(2, 3))
        a = kl_diag(mu, lv, np.zeros((2, 3)), np.zeros((2, 3))).value
        b = kl_std_normal(mu, lv).value
        np.testing.assert_allclose(a, b, rtol=1e-12)


class TestRng:
    def test_deterministic_streams(self):
        a = make_rng(5).standard_normal(8)
        b = make_rng(5).standard_normal(8)
        assert a.tobytes() == b.tobytes()

    def test_split_paths_differ(self):
        assert derive_seed(1, "a", 2) != derive_seed(1, "a", 3)
        assert derive_seed(1, "a", 2) == derive_seed(1, "a", 2)

    def test_pinned_value(self):
        # Guards the documented generator choice against silent changes.
        assert make_rng(0).integers(0, 2**31 - 1) == 291248084
        assert isinstance(make_rng(0).bit_generator, np.random.Philox)
