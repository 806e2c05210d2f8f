"""Shared fixtures: preset profiles at a moderate resolution, cached per session."""

import numpy as np
import pytest

from parkerstab.presets import PRESETS, build_preset_profile

PRESET_NAMES = tuple(PRESETS)


@pytest.fixture(scope="session")
def preset_profiles():
    """name -> (Preset, EquilibriumProfile) at n = 96 for fast unit tests."""
    return {name: build_preset_profile(name, 96) for name in PRESET_NAMES}


@pytest.fixture(params=PRESET_NAMES)
def named_profile(request, preset_profiles):
    p, prof = preset_profiles[request.param]
    return request.param, p, prof


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260823)
