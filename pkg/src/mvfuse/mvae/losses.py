"""Forward passes and per-kind objectives of the multi-view autoencoders.

Reconstruction is always ``sum_v MSE(X_v, X'_v)``, where the squared error is
summed over a view's features and averaged over rows. KL terms use the same
reduction (sum over latent dimensions, mean over rows), so both sides of the
ELBO are per-document quantities.
"""

from dataclasses import dataclass

from ..numcore import autodiff as ad
from ..numcore.gaussian import gaussian_sample, kl_diag, kl_std_normal, log_sigmoid_loss
from .config import ADVERSARIAL_KINDS
from .joint import GaussianPosterior, joint_mean, joint_mopoe, joint_poe


@dataclass
class LossTerms:
    total: ad.Node
    reconstruction: ad.Node


def mse(x, x_rec):
    x = ad.const(x)
    return ad.scale(ad.sum(ad.square(ad.sub(x_rec, x))), 1.0 / x.shape[0])


def reconstruction(xs, recons):
    terms = [mse(x, r) for x, r in zip(xs, recons)]
    total = terms[0]
    for t in terms[1:]:
        total = ad.add(total, t)
    return total


def kl_prior(post):
    """Row-averaged KL of a posterior from the standard normal."""
    return ad.scale(kl_std_normal(post.mu, post.logvar), 1.0 / post.shape[0])


def kl_between(q, p):
    return ad.scale(kl_diag(q.mu, q.logvar, p.mu, p.logvar), 1.0 / q.shape[0])


def _decode_all(decoders, z):
    return [d(z) for d in decoders]


def _sample(post, rng):
    return gaussian_sample(post.mu, post.logvar, rng)


def forward(kind, nets, xs, rng):
    """Encode, fuse and decode one batch.

    Returns a dict of forward products consumed by :func:`model_loss`:
    ``recons`` (list per view) and, depending on the kind, ``critic_fake``,
    ``joint``, ``view_posts``, ``single_posts``/``single_recons`` and
    ``subset_posts``/``subset_recons``.
    """
    encoded = [enc(x) for enc, x in zip(nets.encoders, xs)]
    if kind in ADVERSARIAL_KINDS:
        z = joint_mean([mu for mu, _ in encoded])
        return {"z": z, "recons": _decode_all(nets.decoders, z), "critic_fake": nets.critic(z)}

    posts = [GaussianPosterior(mu, lv) for mu, lv in encoded]
    out = {"view_posts": posts}
    if kind == "MoPoEVAE":
        subsets, _ = joint_mopoe(posts)
        out["subset_posts"] = [p for _, p in subsets]
        out["subset_recons"] = [_decode_all(nets.decoders, _sample(p, rng))
                                for p in out["subset_posts"]]
        return out
    if kind == "DVCCA":
        joint = GaussianPosterior(joint_mean([p.mu for p in posts]),
                                  joint_mean([p.logvar for p in posts]))
    else:
        joint = joint_poe(posts, include_prior=True)
    out["joint"] = joint
    out["recons"] = _decode_all(nets.decoders, _sample(joint, rng))
    if kind == "me_mVAE":
        singles = [joint_poe([p], include_prior=True) for p in posts]
        out["single_posts"] = singles
        out["single_recons"] = [_decode_all(nets.decoders, _sample(s, rng)) for s in singles]
    return out


def generator_term(kind, critic_scores):
    """Adversarial part of the autoencoder objective (before weighting).

    ``jointAAE`` uses the non-saturating ``-ln D(z)``; ``wAAE`` maximises the
    critic score of the encoded codes.
    """
    if kind == "jointAAE":
        return log_sigmoid_loss(critic_scores)
    return ad.scale(ad.mean(critic_scores), -1.0)


def model_loss(kind, xs, products, cfg):
    """Autoencoder objective for ``kind`` given the products of :func:`forward`."""
    if kind == "MoPoEVAE":
        subs = []
        rec_terms = []
        for post, recons in zip(products["subset_posts"], products["subset_recons"]):
            rec = reconstruction(xs, recons)
            rec_terms.append(rec)
            subs.append(ad.add(rec, ad.scale(kl_prior(post), cfg.beta)))
        k = 1.0 / len(subs)
        total, rec_sum = subs[0], rec_terms[0]
        for s, r in zip(subs[1:], rec_terms[1:]):
            total, rec_sum = ad.add(total, s), ad.add(rec_sum, r)
        return LossTerms(ad.scale(total, k), ad.scale(rec_sum, k))

    rec = reconstruction(xs, products["recons"])
    if kind in ADVERSARIAL_KINDS:
        adv = generator_term(kind, products["critic_fake"])
        return LossTerms(ad.add(rec, ad.scale(adv, cfg.gamma)), rec)

    joint = products["joint"]
    reg = kl_prior(joint)
    if kind == "mvtCAE":
        posts = products["view_posts"]
        tc = kl_between(joint, posts[0])
        for p in posts[1:]:
            tc = ad.add(tc, kl_between(joint, p))
        reg = ad.add(reg, ad.scale(tc, 1.0 / len(posts)))
    total = ad.add(rec, ad.scale(reg, cfg.beta))
    if kind == "me_mVAE":
        for post, recons in zip(products["single_posts"], products["single_recons"]):
            elbo = ad.add(reconstruction(xs, recons), ad.scale(kl_prior(post), cfg.beta))
            total = ad.add(total, elbo)
    return LossTerms(total, rec)


def critic_loss(kind, critic, fake, prior, rng, cfg):
    """Loss of the discriminator (jointAAE) or Wasserstein critic (wAAE).

    ``fake`` are encoded codes and ``prior`` standard-normal draws, both held
    constant. The critic gradient penalty is taken on random interpolates.
    """
    fake, prior = ad.const(fake), ad.const(prior)
    real_scores, fake_scores = critic(prior), critic(fake)
    if kind == "jointAAE":
        real_term = ad.mean(ad.softplus(ad.scale(real_scores, -1.0)))
        fake_term = ad.mean(ad.softplus(fake_scores))
        return ad.add(real_term, fake_term)
    alpha = rng.uniform(size=(fake.shape[0], 1))
    mixed = alpha * prior.value + (1.0 - alpha) * fake.value
    norms = critic.input_gradient_norm(mixed)
    penalty = ad.mean(ad.square(ad.sub(norms, 1.0)))
    w_gap = ad.sub(ad.mean(fake_scores), ad.mean(real_scores))
    return ad.add(w_gap, ad.scale(penalty, cfg.gp_weight))


def prior_sample(rng, shape):
    return rng.standard_normal(shape)

