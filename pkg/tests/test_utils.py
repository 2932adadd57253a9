import logging

import pytest

from convattack.attacks.results import AttackConfig
from convattack.harness.grid import GridSpec
from convattack.utils import registry
from convattack.utils.errors import ConfigError, DataError, config_errors, is_whole, whole
from convattack.utils.logging import make_logger
from convattack.utils.seeding import derive_seed, make_rng


class TestLogging:
    def test_same_file_twice_keeps_one_handler(self, tmp_path):
        path = tmp_path / "a.log"
        logger = make_logger("convattack.test_dedupe", path)
        make_logger("convattack.test_dedupe", path)
        assert len(logger.handlers) == 1
        logger.info("hello")
        logger.handlers[0].flush()
        assert "hello" in path.read_text(encoding="utf-8")

    def test_level(self, tmp_path):
        logger = make_logger("convattack.test_level", tmp_path / "b.log", logging.DEBUG)
        assert logger.level == logging.DEBUG


class TestSeeding:
    def test_stable(self):
        assert derive_seed(7, "ce_001") == derive_seed(7, "ce_001")

    def test_parts_matter(self):
        seeds = {derive_seed(7, "a"), derive_seed(7, "b"), derive_seed(8, "a"), derive_seed("7", "a")}
        assert len(seeds) == 4

    def test_fits_in_63_bits(self):
        assert 0 <= derive_seed("anything") < 2**63

    def test_rng(self):
        assert make_rng(1, "x").integers(1 << 30) == make_rng(1, "x").integers(1 << 30)


class TestRegistry:
    def test_attack_presets(self):
        assert registry.lookup("attack", "strong") == AttackConfig(0.9, 0.3, 100)
        assert registry.lookup("attack", "mild").min_cos_sim == 0.95

    def test_sweeps(self):
        sweep = registry.lookup("sweep", "pct-words-to-swap")
        assert isinstance(sweep, GridSpec)
        assert sweep.pct_words_to_swap == (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
        assert len(registry.lookup("sweep", "max-candidates")) == 6

    def test_train_recipes(self):
        recipe = registry.lookup("train", "roberta")
        assert (recipe.batch_size, recipe.learning_rate, recipe.epochs) == (32, 7.5e-6, 10)
        assert registry.lookup("train", "roberta-finetune").epochs == 3

    def test_unknown(self):
        with pytest.raises(ConfigError, match="strong"):
            registry.lookup("attack", "medium")


class TestConfigValues:
    @pytest.mark.parametrize("value", [0, 3, 3.0, -2, 10**20])
    def test_whole(self, value):
        assert is_whole(value)
        assert type(whole(value)) is int

    @pytest.mark.parametrize("value", [2.5, True, "3", None, float("nan"), float("inf")])
    def test_not_whole(self, value):
        assert not is_whole(value)
        assert whole(value) is value

    def test_type_errors_become_config_errors(self):
        with pytest.raises(ConfigError, match="invalid widget") as info:
            with config_errors("widget"):
                int("seven")
        assert isinstance(info.value.__cause__, ValueError)

    def test_own_errors_pass_through(self):
        with pytest.raises(DataError, match="^broken$"):
            with config_errors("widget"):
                raise DataError("broken")
