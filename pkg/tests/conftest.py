from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oncodss.fixture import write_fixture
from oncodss.pipeline import PipelineConfig, load_bundle, run_pipeline


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("fixture")
    write_fixture(root, seed=13)
    return root


@pytest.fixture(scope="session")
def fixture_config(fixture_dir, tmp_path_factory) -> PipelineConfig:
    out = tmp_path_factory.mktemp("bundle")
    return PipelineConfig.from_file(fixture_dir / "config.json", out=out)


@pytest.fixture(scope="session")
def fixture_bundle_dir(fixture_config) -> Path:
    run_pipeline(fixture_config)
    return fixture_config.out


@pytest.fixture(scope="session")
def fixture_bundle(fixture_bundle_dir):
    return load_bundle(fixture_bundle_dir)
