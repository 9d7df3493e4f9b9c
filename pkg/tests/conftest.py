import numpy as np
import pytest

from uapr.types import DescriptorSet


@pytest.fixture
def toy_set():
    """N=2, L=3, M=1 plain set with finite values."""
    return DescriptorSet(
        members=np.array([[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]]),
        poses=np.array([[0.0, 0.0, 0.0], [100.0, 0.0, 0.0]]),
        timestamps=np.array([0.0, 1.0]),
    )


def make_set(descriptors, poses=None, timestamps=None, variances=None, members=None):
    if members is not None:
        d = np.asarray(members, dtype=float)
    else:
        d = np.asarray(descriptors, dtype=float)[np.newaxis, :, :]
    n = d.shape[1]
    return DescriptorSet(
        members=d,
        poses=np.zeros((n, 3)) if poses is None else np.asarray(poses, dtype=float),
        timestamps=np.arange(n, dtype=float) if timestamps is None else np.asarray(timestamps, dtype=float),
        variances=variances,
    )
