import pytest

from shapebench.dataset import generate_split
from shapebench.scenes import GenConfig
from shapebench.tasks import TaskCode


@pytest.fixture(scope="session")
def default_cfg():
    return GenConfig()


@pytest.fixture(scope="session")
def comp_manifest(default_cfg):
    """Small MM_COMP eval split shared by reward/agent/service tests."""
    return generate_split(TaskCode.MM_COMP, 40, seed=2024, cfg=default_cfg, split="eval")


@pytest.fixture(scope="session")
def instances_all_codes(default_cfg):
    """A handful of instances for every task code."""
    out = {}
    for code in TaskCode:
        out[code] = generate_split(code, 6, seed=11, cfg=default_cfg, split="eval").instances
    return out
