import numpy as np
import pytest
import yaml

from mvfuse import data_path


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def smoke_config_dict(**sections):
    """The bundled smoke config with absolute input paths and overrides."""
    cfg = yaml.safe_load(data_path("smoke.yaml").read_text())
    cfg["dataset"]["path"] = str(data_path("smoke_corpus.csv"))
    for v in cfg["views"]:
        if "path" in v:
            v["path"] = str(data_path(v["path"]))
    for key, value in sections.items():
        if isinstance(value, dict) and isinstance(cfg.get(key), dict):
            cfg[key] = {**cfg[key], **value}
        else:
            cfg[key] = value
    return cfg


@pytest.fixture
def smoke_config(tmp_path):
    """Factory writing a smoke config into ``tmp_path``; returns its path."""
    def make(name="run.yaml", **sections):
        cfg = smoke_config_dict(**sections)
        cfg["out"] = str(tmp_path / "out")
        path = tmp_path / name
        path.write_text(yaml.safe_dump(cfg))
        return path
    return make
