#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tests for the unified configuration loader.
"""

import os
import sys
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from toupie.tools.config_loader import DEFAULT_CONFIG_FILE, ConfigLoader


class TestConfigLoader(unittest.TestCase):

    def test_repository_config(self):
        """The shipped configuration loads and carries every section."""
        loader = ConfigLoader(str(DEFAULT_CONFIG_FILE))
        self.assertEqual(loader.get_analysis_param('max_branches'), 16)
        self.assertEqual(loader.get_engine_param('max_truncation_paths'), 4000)
        self.assertEqual(loader.get_verification_param('lambdas'), [1, 2, 3])
        self.assertEqual(loader.get_system_param('logging', 'log_file'), 'toupie.log')

    def test_missing_file_uses_defaults(self):
        loader = ConfigLoader("/nonexistent/config_unified.yaml")
        self.assertEqual(loader.get_engine_param('iso_search_budget'), 64)
        self.assertEqual(loader.get_pipeline_param('basic', 'max_parallel_jobs'), 4)
        self.assertEqual(loader.get_analysis_param('unknown', 'fallback'), 'fallback')

    def test_partial_file_is_merged(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = os.path.join(temp_dir, "config.yaml")
            with open(path, 'w', encoding='utf-8') as f:
                f.write("verification:\n  random_modules: 5\n")
            loader = ConfigLoader(path)
            self.assertEqual(loader.get_verification_param('random_modules'), 5)
            self.assertEqual(loader.get_verification_param('random_module_seed'), 0)
            with open(path, 'w', encoding='utf-8') as f:
                f.write("verification:\n  random_modules: 7\n")
            loader.reload()
            self.assertEqual(loader.get_verification_param('random_modules'), 7)

    def test_environment_overrides(self):
        with patch.dict(os.environ, {'TOUPIE_MAX_BRANCHES': '5', 'TOUPIE_LOG_LEVEL': 'DEBUG'}):
            loader = ConfigLoader(str(DEFAULT_CONFIG_FILE))
            self.assertEqual(loader.get_analysis_param('max_branches'), 5)
            self.assertEqual(loader.get_pipeline_param('basic', 'default_log_level'), 'DEBUG')
        with patch.dict(os.environ, {'TOUPIE_MAX_BRANCHES': 'many'}):
            self.assertEqual(ConfigLoader(str(DEFAULT_CONFIG_FILE)).get_analysis_param('max_branches'), 16)

    def test_validate_parameters(self):
        self.assertEqual(ConfigLoader(str(DEFAULT_CONFIG_FILE)).validate_parameters(), [])
        with tempfile.TemporaryDirectory() as temp_dir:
            path = os.path.join(temp_dir, "bad.yaml")
            with open(path, 'w', encoding='utf-8') as f:
                f.write("analysis:\n  oracle_prime: 100\n  max_branches: 0\nverification:\n  lambdas: [1, 1]\n")
            errors = ConfigLoader(path).validate_parameters()
            self.assertEqual(len(errors), 3)
            self.assertTrue(any("oracle_prime" in e for e in errors))

    def test_config_file_from_environment(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = os.path.join(temp_dir, "alt.yaml")
            with open(path, 'w', encoding='utf-8') as f:
                f.write("engine:\n  search_seed: 9\n")
            with patch.dict(os.environ, {'TOUPIE_CONFIG': path}):
                self.assertEqual(ConfigLoader().get_engine_param('search_seed'), 9)


def run_tests():
    """Run all configuration tests."""
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()
    suite.addTests(loader.loadTestsFromTestCase(TestConfigLoader))
    result = unittest.TextTestRunner(verbosity=2).run(suite)
    return result.wasSuccessful()


if __name__ == "__main__":
    success = run_tests()
    sys.exit(0 if success else 1)
