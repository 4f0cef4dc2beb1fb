import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from paircompare import eu_series_from_arrays, eu_series_from_diffs


@pytest.fixture
def series_from():
    """Factory turning a difference sample into an EuSeries."""

    def make(w):
        return eu_series_from_diffs(np.asarray(w, dtype=float))

    return make


@pytest.fixture
def paired_series_from():
    def make(u, v):
        return eu_series_from_arrays(np.asarray(u, float), np.asarray(v, float))

    return make
