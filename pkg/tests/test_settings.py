import logging
import os
import tempfile
import unittest
from pathlib import Path
from unittest import mock

from pydantic import ValidationError
from structlog import get_logger

from subconj.logger import setup_logging
from subconj.settings import Settings


class TestSettings(unittest.TestCase):
    def test_defaults(self) -> None:
        with mock.patch.dict(os.environ, {}, clear=True):
            settings = Settings()
        self.assertEqual(settings.jobs, 1)
        self.assertTrue(settings.symmetry)
        self.assertEqual(settings.refutation_depth(2, 3), 36)
        self.assertEqual(settings.aperiodicity_depth(2, 3), 19)

    def test_environment(self) -> None:
        with mock.patch.dict(os.environ, {"SUBCONJ_JOBS": "3", "SUBCONJ_K_MAX": "10", "SUBCONJ_SYMMETRY": "false"}):
            settings = Settings()
        self.assertEqual(settings.jobs, 3)
        self.assertFalse(settings.symmetry)
        self.assertEqual(settings.refutation_depth(2, 3), 10)

    def test_keyword_arguments_override_environment(self) -> None:
        with mock.patch.dict(os.environ, {"SUBCONJ_JOBS": "3"}):
            self.assertEqual(Settings(jobs=2).jobs, 2)

    def test_validation(self) -> None:
        with self.assertRaises(ValidationError):
            Settings(jobs=0)
        with self.assertRaises(ValidationError):
            Settings(k_max=1)


class TestLogging(unittest.TestCase):
    def tearDown(self) -> None:
        setup_logging()

    def test_log_file_receives_json_records(self) -> None:
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "logs" / "subconj.log"
            setup_logging("INFO", path)
            get_logger("subconj.tests").info("Factor search progress", extra={"processed": 1, "total": 2})
            for handler in logging.getLogger().handlers:
                handler.flush()
            content = path.read_text(encoding="utf-8")
            setup_logging()
        self.assertIn("Factor search progress", content)
        self.assertIn('"levelname": "INFO"', content)

    def test_level_filters_records(self) -> None:
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "subconj.log"
            setup_logging(logging.WARNING, path)
            get_logger("subconj.tests").info("hidden")
            for handler in logging.getLogger().handlers:
                handler.flush()
            content = path.read_text(encoding="utf-8")
            setup_logging()
        self.assertNotIn("hidden", content)
