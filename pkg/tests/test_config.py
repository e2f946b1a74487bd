"""Tests for settings loaded from the environment and .env files."""

import pytest
from pydantic import ValidationError

from config import Settings


def test_defaults(monkeypatch):
    monkeypatch.delenv("PARQSYM_DEFAULT_MAX_ORDER", raising=False)
    assert Settings(_env_file=None).default_max_order == 3


def test_env_file(tmp_path, monkeypatch):
    monkeypatch.delenv("PARQSYM_SAMPLE_SIZE", raising=False)
    monkeypatch.delenv("PARQSYM_Q_VALUES", raising=False)
    env = tmp_path / ".env"
    env.write_text('PARQSYM_SAMPLE_SIZE=7\nPARQSYM_Q_VALUES=["3","1/4"]\n', encoding="utf-8")
    loaded = Settings(_env_file=env)
    assert loaded.sample_size == 7
    assert loaded.q_values == ["3", "1/4"]


def test_environment_overrides_env_file(tmp_path, monkeypatch):
    env = tmp_path / ".env"
    env.write_text("PARQSYM_EXHAUSTIVE_ORDER=1\n", encoding="utf-8")
    monkeypatch.setenv("PARQSYM_EXHAUSTIVE_ORDER", "0")
    assert Settings(_env_file=env).exhaustive_order == 0


def test_rejects_negative_orders(monkeypatch):
    monkeypatch.setenv("PARQSYM_DEFAULT_MAX_ORDER", "-1")
    with pytest.raises(ValidationError):
        Settings(_env_file=None)
