"""
Tests for configuration overrides.
"""
import pytest
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from contextvars import copy_context
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from config import get_config


class TestOverride:
    """Test Config.override scoping."""

    def test_override_and_restore(self):
        """Fields are replaced inside the block and restored after it."""
        cfg = get_config()
        before = cfg.symbol.precision_factor

        with cfg.override("symbol", precision_factor=before + 3):
            assert cfg.symbol.precision_factor == before + 3
            assert cfg.symbol.precision_margin == cfg._sections["symbol"].precision_margin
        assert cfg.symbol.precision_factor == before

    def test_nesting(self):
        """Inner overrides stack on outer ones and unwind in order."""
        cfg = get_config()
        with cfg.override("symbol", precision_factor=2):
            with cfg.override("symbol", precision_margin=7):
                assert cfg.symbol.precision_factor == 2
                assert cfg.symbol.precision_margin == 7
            with cfg.override("verify", seed=9):
                assert cfg.verify.seed == 9
                assert cfg.symbol.precision_factor == 2
            assert cfg.symbol.precision_margin == cfg._sections["symbol"].precision_margin
        assert cfg.verify.seed == cfg._sections["verify"].seed

    def test_restored_after_error(self):
        """An exception inside the block still restores the section."""
        cfg = get_config()
        before = cfg.conductor.precision_retries
        with pytest.raises(RuntimeError):
            with cfg.override("conductor", precision_retries=before + 1):
                raise RuntimeError("boom")
        assert cfg.conductor.precision_retries == before

    def test_unknown_section(self):
        """Only configuration sections can be overridden."""
        with pytest.raises(KeyError):
            with get_config().override("nope", value=1):
                pass

    def test_unknown_field(self):
        """Unknown field names are rejected by the section dataclass."""
        with pytest.raises(TypeError):
            with get_config().override("symbol", nope=1):
                pass


class TestOverrideThreads:
    """Overrides are local to the context that made them."""

    def test_not_visible_in_other_threads(self):
        """A thread started without the caller's context keeps the base values."""
        cfg = get_config()
        base = cfg._sections["symbol"].precision_factor
        seen = []

        with cfg.override("symbol", precision_factor=base + 5):
            worker = threading.Thread(target=lambda: seen.append(cfg.symbol.precision_factor))
            worker.start()
            worker.join(timeout=10)

        assert seen == [base]

    def test_override_in_worker_does_not_leak(self):
        """An override made by one worker is invisible to the caller and other workers."""
        cfg = get_config()
        base = cfg._sections["symbol"].precision_factor
        inside, entered = threading.Event(), threading.Event()

        def overriding():
            with cfg.override("symbol", precision_factor=base + 4):
                entered.set()
                inside.wait(timeout=10)
                return cfg.symbol.precision_factor

        with ThreadPoolExecutor(max_workers=2) as executor:
            first = executor.submit(overriding)
            entered.wait(timeout=10)
            observed = executor.submit(lambda: cfg.symbol.precision_factor).result(timeout=10)
            main_view = cfg.symbol.precision_factor
            inside.set()
            assert first.result(timeout=10) == base + 4

        assert observed == base
        assert main_view == base

    def test_copied_context_inherits(self):
        """Workers run in a copied context see the caller's overrides, without deadlock."""
        cfg = get_config()
        with cfg.override("symbol", precision_factor=6):
            with ThreadPoolExecutor(max_workers=2) as executor:
                futures = [executor.submit(copy_context().run, lambda: cfg.symbol.precision_factor)
                           for _ in range(4)]
                values = [f.result(timeout=10) for f in futures]

        assert values == [6, 6, 6, 6]

    def test_nested_override_in_copied_context(self):
        """A worker may override again inside an inherited override."""
        cfg = get_config()

        def work():
            with cfg.override("symbol", precision_factor=cfg.symbol.precision_factor * 2):
                return cfg.symbol.precision_factor

        with cfg.override("symbol", precision_factor=3):
            with ThreadPoolExecutor(max_workers=1) as executor:
                value = executor.submit(copy_context().run, work).result(timeout=10)
            assert cfg.symbol.precision_factor == 3

        assert value == 6
