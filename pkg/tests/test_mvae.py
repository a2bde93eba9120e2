import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _fd import numeric_grad, rel_error
from mvfuse.errors import (
    ConfigError, ContractError, DimensionError, FormatError, IntegrityError, TrainingError,
)
from mvfuse.harness.synthetic import low_rank_views
from mvfuse.mvae import (
    MODEL_KINDS, GaussianPosterior, MvaeConfig, critic_loss, dumps_mvae, forward,
    generator_term, joint_mean, joint_mopoe, joint_poe, load_mvae, loads_mvae, model_loss,
    save_mvae, train_mvae, view_subsets,
)
from mvfuse.mvae.train import _Nets
from mvfuse.numcore import autodiff as ad, backward, make_rng


def post(mu, var):
    mu = np.atleast_2d(np.asarray(mu, dtype=float))
    return GaussianPosterior(mu, np.log(np.broadcast_to(var, mu.shape).astype(float)))


class TestJointMean:
    @pytest.mark.parametrize("reps", [1, 2, 3, 5, 7])
    def test_identity_exact(self, reps):
        Z = make_rng(reps).normal(size=(6, 4)) * 1e3
        assert np.array_equal(joint_mean([Z] * reps).value, Z)

    def test_example(self):
        assert joint_mean([[[1.0, 3.0]], [[3.0, 5.0]]]).value.tolist() == [[2.0, 4.0]]

    def test_empty(self):
        with pytest.raises(ContractError):
            joint_mean([])

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            joint_mean([np.zeros((2, 3)), np.zeros((2, 4))])


class TestJointPoe:
    def test_worked_example(self):
        out = joint_poe([post(0.0, 1.0), post(2.0, 1.0)], include_prior=True)
        assert abs(out.mu.value[0, 0] - 2 / 3) < 1e-9
        assert abs(math.exp(out.logvar.value[0, 0]) - 1 / 3) < 1e-9

    def test_prior_only(self):
        out = joint_poe([], include_prior=True, shape=(2, 3))
        assert np.array_equal(out.mu.value, np.zeros((2, 3)))
        assert np.array_equal(out.logvar.value, np.zeros((2, 3)))

    def test_single_expert_unchanged(self):
        p = post([[0.3, -1.0]], [[0.5, 2.0]])
        out = joint_poe([p], include_prior=False)
        assert np.array_equal(out.mu.value, p.mu.value)
        assert np.array_equal(out.logvar.value, p.logvar.value)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            joint_poe([post(np.zeros((1, 2)), 1.0), post(np.zeros((1, 3)), 1.0)])

    @pytest.mark.parametrize("seed", range(10))
    @pytest.mark.parametrize("prior", [True, False])
    def test_precision_sum_and_mean(self, seed, prior):
        rng = make_rng(seed)
        n = int(rng.integers(1, 5))
        mus = [rng.normal(size=(3, 4)) for _ in range(n)]
        lvs = [rng.normal(size=(3, 4)) for _ in range(n)]
        out = joint_poe([GaussianPosterior(m, l) for m, l in zip(mus, lvs)], include_prior=prior)
        prec = sum(np.exp(-l) for l in lvs) + (1.0 if prior else 0.0)
        np.testing.assert_allclose(np.exp(-out.logvar.value), prec, rtol=1e-9)
        np.testing.assert_allclose(out.mu.value, sum(m * np.exp(-l) for m, l in zip(mus, lvs)) / prec,
                                   rtol=1e-9, atol=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(-3, 3), st.floats(0.2, 3), st.floats(-3, 3), st.floats(0.2, 3),
           st.booleans())
    def test_grid_integration_oracle(self, m1, v1, m2, v2, prior):
        grid = np.linspace(-15, 15, 60001)
        dx = grid[1] - grid[0]
        log_dens = -(grid - m1) ** 2 / (2 * v1) - (grid - m2) ** 2 / (2 * v2)
        if prior:
            log_dens -= grid ** 2 / 2
        dens = np.exp(log_dens - log_dens.max())
        dens /= dens.sum() * dx
        mean = np.sum(grid * dens) * dx
        var = np.sum((grid - mean) ** 2 * dens) * dx
        out = joint_poe([post(m1, v1), post(m2, v2)], include_prior=prior)
        assert abs(out.mu.value[0, 0] - mean) < 1e-3
        assert abs(math.exp(out.logvar.value[0, 0]) - var) < 1e-3


class TestMopoe:
    @pytest.mark.parametrize("n", [1, 2, 3, 7])
    def test_subset_count(self, n):
        posts = [post(np.full((2, 3), float(i)), 1.0) for i in range(n)]
        subsets, joint = joint_mopoe(posts)
        assert len(subsets) == 2 ** n - 1 == len(view_subsets(n))
        assert len({s for s, _ in subsets}) == len(subsets)
        assert joint.shape == (2, 3)

    def test_single_view_equals_poe(self):
        p = post([[0.4, -2.0]], [[0.5, 3.0]])
        (subset, sp), = joint_mopoe([p])[0]
        ref = joint_poe([p], include_prior=True)
        assert subset == (0,)
        assert np.array_equal(sp.mu.value, ref.mu.value)
        assert np.array_equal(joint_mopoe([p])[1].value, ref.mu.value)

    def test_identical_views_share_sign(self):
        mu = np.array([[1.5, -0.5, 0.2]])
        subsets, _ = joint_mopoe([post(mu, 0.7)] * 3)
        for _, sp in subsets:
            assert np.array_equal(np.sign(sp.mu.value), np.sign(mu))

    def test_zero_views(self):
        with pytest.raises(ContractError):
            joint_mopoe([])


# ---- gradient checks of every model objective -------------------------------

def _tiny(kind, seed):
    cfg = MvaeConfig(kind=kind, latent_dim=3, input_dims=[4, 3], hidden=5, disc_hidden=4,
                     seed=seed, gamma=0.7, beta=1.3)
    nets = _Nets(cfg, make_rng(seed, "init"))
    rng = make_rng(seed, "data")
    xs = [ad.const(rng.standard_normal((6, d))) for d in cfg.input_dims]
    return cfg, nets, xs


@pytest.mark.parametrize("kind", MODEL_KINDS)
@pytest.mark.parametrize("seed", range(10))
def test_model_loss_gradients(kind, seed):
    cfg, nets, xs = _tiny(kind, seed)
    params = nets.ae_params

    def loss():
        products = forward(kind, nets, xs, make_rng(seed, "noise"))
        return model_loss(kind, xs, products, cfg).total

    grads = backward(loss(), params)
    # probe a handful of parameter matrices to bound runtime
    for p in params[::3]:
        num = numeric_grad(lambda: float(loss().value[0, 0]), p)
        assert rel_error(grads[p], num) < 1e-4, p.name


@pytest.mark.parametrize("kind", ["jointAAE", "wAAE"])
@pytest.mark.parametrize("seed", range(10))
def test_critic_loss_gradients(kind, seed):
    cfg, nets, _ = _tiny(kind, seed)
    rng = make_rng(seed, "codes")
    fake, prior = rng.standard_normal((6, 3)), rng.standard_normal((6, 3))
    params = nets.critic.params

    def loss():
        return critic_loss(kind, nets.critic, fake, prior, make_rng(seed, "mix"), cfg)

    grads = backward(loss(), params)
    for p in params:
        num = numeric_grad(lambda: float(loss().value[0, 0]), p)
        assert rel_error(grads[p], num) < 1e-4, p.name


class TestLossExamples:
    def test_generator_term_at_half(self):
        assert generator_term("jointAAE", ad.const(np.zeros((5, 1)))).value[0, 0] == pytest.approx(
            math.log(2.0), abs=1e-12)

    @pytest.mark.parametrize("kind", ["mVAE", "DVCCA", "mvtCAE"])
    def test_perfect_reconstruction_at_prior_is_zero(self, kind):
        x = [ad.const(np.ones((3, 2)))]
        prior = GaussianPosterior(np.zeros((3, 2)), np.zeros((3, 2)))
        products = {"recons": [ad.const(np.ones((3, 2)))], "joint": prior, "view_posts": [prior]}
        cfg = MvaeConfig(kind=kind)
        assert model_loss(kind, x, products, cfg).total.value[0, 0] == 0.0

    def test_mvae_prior_joint_is_reconstruction(self):
        rng = make_rng(3)
        x = [ad.const(rng.normal(size=(4, 3)))]
        rec = [ad.const(rng.normal(size=(4, 3)))]
        prior = GaussianPosterior(np.zeros((4, 2)), np.zeros((4, 2)))
        terms = model_loss("mVAE", x, {"recons": rec, "joint": prior}, MvaeConfig(kind="mVAE"))
        assert terms.total.value[0, 0] == terms.reconstruction.value[0, 0]
        expected = np.sum((rec[0].value - x[0].value) ** 2) / 4
        assert terms.reconstruction.value[0, 0] == pytest.approx(expected, rel=1e-12)


# ---- training ---------------------------------------------------------------

@pytest.fixture(scope="module")
def trained():
    views = low_rank_views(seed=0, rows=120, dim=6)
    return views, {k: train_mvae(views, MvaeConfig(kind=k, latent_dim=3, hidden=16,
                                                  epochs=8, batch_size=32, seed=2))
                   for k in MODEL_KINDS}


class TestTraining:
    def test_config_validation(self):
        with pytest.raises(ConfigError):
            MvaeConfig(kind="VAE")
        with pytest.raises(ConfigError):
            MvaeConfig(latent_dim=0)
        with pytest.raises(ConfigError):
            MvaeConfig(epochs=-1)

    def test_row_mismatch(self):
        with pytest.raises(IntegrityError, match="100.*99|99.*100"):
            train_mvae([np.zeros((100, 3)), np.zeros((99, 3))], MvaeConfig(epochs=1))

    def test_config_dims_mismatch(self):
        with pytest.raises(DimensionError):
            train_mvae([np.zeros((5, 3))], MvaeConfig(epochs=1, input_dims=[4]))

    @pytest.mark.parametrize("kind", MODEL_KINDS)
    def test_zero_epochs_usable(self, kind):
        views = low_rank_views(seed=1, rows=10, dim=4)
        m = train_mvae(views, MvaeConfig(kind=kind, latent_dim=2, hidden=8, epochs=0))
        assert m.loss_history == []
        assert m.encode_joint(views).shape == (10, 2)

    @pytest.mark.parametrize("kind", MODEL_KINDS)
    def test_history_length_and_finite(self, trained, kind):
        m = trained[1][kind]
        assert len(m.loss_history) == len(m.recon_history) == 8
        assert np.all(np.isfinite(m.loss_history))

    @pytest.mark.parametrize("kind", MODEL_KINDS)
    def test_bit_reproducible(self, trained, kind):
        views, models = trained
        again = train_mvae(views, MvaeConfig(kind=kind, latent_dim=3, hidden=16, epochs=8,
                                             batch_size=32, seed=2))
        assert again.loss_history == models[kind].loss_history
        assert again.digest() == models[kind].digest()

    def test_seed_changes_result(self, trained):
        views, models = trained
        other = train_mvae(views, MvaeConfig(kind="mVAE", latent_dim=3, hidden=16, epochs=8,
                                             batch_size=32, seed=3))
        assert other.loss_history != models["mVAE"].loss_history

    def test_batch_larger_than_rows_is_clipped(self):
        views = low_rank_views(seed=1, rows=10, dim=4)
        m = train_mvae(views, MvaeConfig(kind="wAAE", latent_dim=2, hidden=8, epochs=2,
                                         batch_size=64))
        assert len(m.loss_history) == 2

    def test_encoders_only(self, trained):
        m = trained[1]["mVAE"]
        assert len(m.encoder_params) == 2 and all(len(p) == 6 for p in m.encoder_params)
        assert len(trained[1]["jointAAE"].encoder_params[0]) == 4


class TestEncodeJoint:
    @pytest.mark.parametrize("kind", MODEL_KINDS)
    def test_batch_partition_invariant(self, trained, kind):
        views, models = trained
        m = models[kind]
        rows = [v[:100] for v in views]
        whole = m.encode_joint(rows)
        parts = np.vstack([m.encode_joint([v[i:i + 10] for v in rows]) for i in range(0, 100, 10)])
        assert np.array_equal(whole, parts)

    @pytest.mark.parametrize("kind", MODEL_KINDS)
    def test_deterministic(self, trained, kind):
        views, models = trained
        assert np.array_equal(models[kind].encode_joint(views), models[kind].encode_joint(views))

    def test_single_row(self, trained):
        views, models = trained
        assert models["MoPoEVAE"].encode_joint([v[:1] for v in views]).shape == (1, 3)

    def test_dimension_error_names_view(self, trained):
        views, models = trained
        with pytest.raises(DimensionError, match="view1"):
            models["jointAAE"].encode_joint([views[0], views[1][:, :5]])

    def test_wrong_view_count(self, trained):
        views, models = trained
        with pytest.raises(DimensionError):
            models["jointAAE"].encode_joint(views[:1])

    def test_equal_encoders_give_that_code(self, trained):
        views, models = trained
        m = models["jointAAE"]
        m2 = loads_mvae(dumps_mvae(m))
        m2.encoder_params[1] = [p.copy() for p in m2.encoder_params[0]]
        m2.means[1], m2.stds[1] = m2.means[0], m2.stds[0]
        z_single = m2.encode_views([views[0], views[0]])[0][0]
        assert np.array_equal(m2.encode_joint([views[0], views[0]]), z_single)


class TestSerialization:
    @pytest.mark.parametrize("kind", MODEL_KINDS)
    def test_round_trip(self, trained, kind, tmp_path):
        views, models = trained
        path = tmp_path / f"{kind}.mvae"
        save_mvae(models[kind], path)
        back = load_mvae(path)
        q = [make_rng(4).normal(size=(7, 6)) for _ in range(2)]
        assert back.kind == kind and back.view_names == models[kind].view_names
        assert np.array_equal(back.encode_joint(q), models[kind].encode_joint(q))
        assert dumps_mvae(back) == dumps_mvae(models[kind])

    def test_bad_magic(self, trained):
        data = bytearray(dumps_mvae(trained[1]["mVAE"]))
        data[:4] = b"MVCL"
        with pytest.raises(FormatError):
            loads_mvae(bytes(data))

    def test_bad_version(self, trained):
        data = bytearray(dumps_mvae(trained[1]["mVAE"]))
        data[4:6] = (7).to_bytes(2, "little")
        with pytest.raises(FormatError):
            loads_mvae(bytes(data))

    @pytest.mark.parametrize("drop", [1, 4, 100, 0.5, 0.99, 1.0])
    def test_truncated(self, trained, drop):
        data = dumps_mvae(trained[1]["DVCCA"])
        n = int(len(data) * drop) if isinstance(drop, float) else drop
        with pytest.raises(FormatError):
            loads_mvae(data[:len(data) - n])

    def test_kind_byte_out_of_range(self, trained):
        import zlib
        data = bytearray(dumps_mvae(trained[1]["mVAE"]))
        data[6] = len(MODEL_KINDS)
        body = bytes(data[:-4])
        data[-4:] = zlib.crc32(body).to_bytes(4, "little")
        with pytest.raises(FormatError, match="kind"):
            loads_mvae(bytes(data))


def test_non_finite_view_rejected():
    views = low_rank_views(seed=1, rows=10, dim=4)
    views[1][3, 2] = np.nan
    with pytest.raises(IntegrityError, match="view1"):
        train_mvae(views, MvaeConfig(epochs=1))


def test_divergence_names_epoch_and_batch():
    views = low_rank_views(seed=0, rows=40, dim=4)
    cfg = MvaeConfig(kind="mVAE", latent_dim=2, hidden=8, epochs=5, lr=1e6)
    with pytest.raises(TrainingError, match=r"epoch \d+, batch \d+"):
        train_mvae(views, cfg)
