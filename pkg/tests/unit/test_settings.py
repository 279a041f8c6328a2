from __future__ import annotations

import pytest
from pydantic import ValidationError

from stratacode.constants import DEFAULT_DISTANCE_BUDGET, JSON_SAFE_INT
from stratacode.settings import StrataSettings, get_settings


class TestStrataSettings:
    def test_defaults(self) -> None:
        s = StrataSettings()
        assert s.threads is None
        assert s.parallel is False
        assert s.distance_budget == DEFAULT_DISTANCE_BUDGET
        assert s.json_safe_int == JSON_SAFE_INT

    def test_single_thread_is_sequential(self) -> None:
        assert StrataSettings(threads=1).parallel is False

    def test_parallel(self) -> None:
        s = StrataSettings(threads=4)
        assert s.parallel is True
        with s.executor() as pool:
            assert list(pool.map(lambda x: x * 2, [1, 2, 3])) == [2, 4, 6]

    def test_env_prefix(self, monkeypatch) -> None:
        monkeypatch.setenv("STRATACODE_THREADS", "3")
        monkeypatch.setenv("STRATACODE_DISTANCE_BUDGET", "100")
        s = StrataSettings()
        assert s.threads == 3
        assert s.distance_budget == 100

    def test_invalid_budget(self) -> None:
        with pytest.raises(ValidationError):
            StrataSettings(distance_budget=0)

    def test_cached(self) -> None:
        assert get_settings() is get_settings()
