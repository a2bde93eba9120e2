"""Model file: magic ``MVAE``, u16 version, kind byte, JSON metadata,
float64 normalisation blocks and float32 encoder parameter blocks."""

from pathlib import Path

import numpy as np

from .. import _binio
from ..errors import FormatError
from .config import MODEL_KINDS

MAGIC = b"MVAE"
VERSION = 1


def dumps_mvae(model):
    meta = {
        "view_names": list(model.view_names),
        "input_dims": [int(d) for d in model.input_dims],
        "latent_dim": int(model.latent_dim),
        "hidden": int(model.hidden),
        "n_params": [len(ps) for ps in model.encoder_params],
        "loss_history": [float(x) for x in model.loss_history],
        "recon_history": [float(x) for x in model.recon_history],
        "config": model.config,
    }
    blocks = []
    for i, (m, s) in enumerate(zip(model.means, model.stds)):
        blocks.append((f"v{i}.mean", m.astype("<f8")))
        blocks.append((f"v{i}.std", s.astype("<f8")))
    for i, ps in enumerate(model.encoder_params):
        for j, p in enumerate(ps):
            blocks.append((f"v{i}.p{j}", p.astype("<f4")))
    return _binio.pack(MAGIC, VERSION, MODEL_KINDS.index(model.kind), meta, blocks)


def loads_mvae(data):
    from .train import TrainedMvae

    _, kind, meta, blocks = _binio.unpack(data, MAGIC, {VERSION})
    if kind >= len(MODEL_KINDS):
        raise FormatError(f"model kind byte {kind} out of range")
    try:
        n_views = len(meta["view_names"])
        means = [blocks[f"v{i}.mean"] for i in range(n_views)]
        stds = [blocks[f"v{i}.std"] for i in range(n_views)]
        params = [[blocks[f"v{i}.p{j}"] for j in range(meta["n_params"][i])]
                  for i in range(n_views)]
        dims = meta["input_dims"]
    except (KeyError, IndexError, TypeError) as exc:
        raise FormatError(f"incomplete model file: missing {exc}") from None
    for i, (m, d) in enumerate(zip(means, dims)):
        if m.shape != (d,) or stds[i].shape != (d,) or params[i][0].shape[0] != d:
            raise FormatError(f"view {i}: parameter shapes disagree with metadata")
    return TrainedMvae(
        kind=MODEL_KINDS[kind],
        view_names=meta["view_names"],
        input_dims=dims,
        latent_dim=meta["latent_dim"],
        hidden=meta["hidden"],
        means=[np.asarray(m, dtype=np.float64) for m in means],
        stds=[np.asarray(s, dtype=np.float64) for s in stds],
        encoder_params=params,
        loss_history=meta.get("loss_history", []),
        recon_history=meta.get("recon_history", []),
        config=meta.get("config", {}),
    )


def save_mvae(model, path):
    Path(path).write_bytes(dumps_mvae(model))


def load_mvae(path):
    return loads_mvae(Path(path).read_bytes())
