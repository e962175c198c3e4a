from __future__ import annotations

import json

import pytest

from watjs.config import Config, from_sources


def test_defaults():
    c = Config()
    assert (c.kappa, c.max_candidates, c.q) == (3, 8, 0.1)


def test_file_then_env_then_cli_precedence(tmp_path):
    path = tmp_path / "conf.json"
    path.write_text(json.dumps({"kappa": 5, "port": 1111, "q": 0.2}))
    env = {"WATCHAT_KAPPA": "4", "WATCHAT_PORT": "2222"}
    c = from_sources(cli={"kappa": 2}, env=env, config_path=path)
    assert c.kappa == 2  # CLI beats env beats file
    assert c.port == 2222  # env beats file
    assert c.q == 0.2  # file beats defaults


def test_toml_config(tmp_path):
    path = tmp_path / "conf.toml"
    path.write_text('kappa = 6\nhost = "0.0.0.0"\n\n[q_overrides]\n11 = 0.5\n')
    c = from_sources(cli=None, env={}, config_path=path)
    assert c.kappa == 6
    assert c.host == "0.0.0.0"
    assert c.q_overrides == {11: 0.5}


def test_unknown_key_rejected(tmp_path):
    path = tmp_path / "conf.json"
    path.write_text(json.dumps({"kapa": 3}))
    with pytest.raises(ValueError, match="unknown config key"):
        from_sources(env={}, config_path=path)


def test_env_ignored_when_not_set(tmp_path):
    c = from_sources(cli={"port": None}, env={})
    assert c.port == Config().port
