import json

import pytest

from rigidity.config import ENV_VAR, Config, ConfigError, load_config


def test_defaults():
    cfg = load_config(env={})
    assert cfg == Config()
    assert (cfg.grid_for(1), cfg.grid_for(2), cfg.grid_for(3), cfg.grid_for(5)) == (64, 64, 16, 8)
    assert cfg.tol == 1e-9


def test_env_then_explicit(tmp_path):
    env_file, cli_file = tmp_path / "env.json", tmp_path / "cli.json"
    env_file.write_text(json.dumps({"grid_2d": 32, "tol": 1e-8}))
    cli_file.write_text(json.dumps({"grid_2d": 16}))
    cfg = load_config(cli_file, env={ENV_VAR: str(env_file)})
    assert cfg.grid_2d == 16 and cfg.tol == 1e-8


def test_int_fields_stay_int(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"grid_3d": 12.0}))
    assert isinstance(load_config(p, env={}).grid_3d, int)


@pytest.mark.parametrize("obj, msg", [({"grid": 3}, "unknown config keys"), ({"tol": "small"}, "number"),
                                      ({"tol": -1}, "positive"), ({"grid_2d": 1}, "at least 2"),
                                      ({"tol": True}, "number")])
def test_rejects(obj, msg):
    with pytest.raises(ConfigError, match=msg):
        Config().updated(obj)


def test_unreadable(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json", env={})


def test_not_an_object(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("[1, 2]")
    with pytest.raises(ConfigError, match="JSON object"):
        load_config(p, env={})
