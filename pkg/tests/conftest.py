import sys
from pathlib import Path

import numpy as np
import pytest

# make the shared helpers (meshes.py, tri_intersect.py) importable
sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
