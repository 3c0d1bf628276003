import pytest
from pydantic import ValidationError

from ordode.config import Settings, get_settings, init_settings
from ordode.services.solver import check_hypotheses


def test_defaults():
    settings = Settings()
    assert settings.check_trials == 1000
    assert settings.ladder_len == 40
    assert settings.log_level == "WARNING"


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("ORDODE_CHECK_TRIALS", "25")
    monkeypatch.setenv("ORDODE_LOG_LEVEL", " info ")
    monkeypatch.setenv("ORDODE_TAIL_TOL", "")
    settings = Settings.from_env()
    assert settings.check_trials == 25
    assert settings.log_level == "info"
    assert settings.tail_tol == 1e-12


def test_invalid_environment_value(monkeypatch):
    monkeypatch.setenv("ORDODE_LADDER_LEN", "2")
    with pytest.raises(ValidationError):
        Settings.from_env()


def test_settings_are_frozen():
    with pytest.raises(ValidationError):
        Settings().check_trials = 3


def test_init_settings_replaces_the_global():
    custom = Settings(check_trials=7)
    assert init_settings(custom) is custom
    assert get_settings().check_trials == 7


def test_checks_follow_the_global_trial_count(heaviside_problem):
    init_settings(Settings(check_trials=10))
    monotone, bound, _, left = check_hypotheses(heaviside_problem)
    assert (monotone.trials, bound.trials, left.trials) == (11, 12, 10)
