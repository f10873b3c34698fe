import pytest

from crdcache import kernels
from crdcache.design import validate_design, validate_resolution


def shift(blocks):
    """1-indexed published blocks -> 0-indexed."""
    return [[p - 1 for p in b] for b in blocks]


EXAMPLE1_BLOCKS = shift([[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]])
# P1 = {12, 34}, P2 = {13, 24}, P3 = {14, 23}
EXAMPLE1_CLASSES = [[0, 5], [1, 4], [2, 3]]

EXAMPLE2_BLOCKS = shift([[1, 2, 3], [4, 5, 6], [1, 4, 5], [2, 3, 6]])
EXAMPLE2_CLASSES = [[0, 1], [2, 3]]

EXAMPLE3_BLOCKS = shift([[1, 2, 3], [4, 5, 6], [7, 8, 9], [1, 4, 7], [2, 5, 8], [3, 6, 9]])
EXAMPLE3_CLASSES = [[0, 1, 2], [3, 4, 5]]

EXAMPLE4_BLOCKS = shift([[1, 2, 3, 4], [5, 6, 7, 8], [1, 2, 5, 6], [3, 4, 7, 8], [1, 3, 5, 7], [2, 4, 6, 8]])
EXAMPLE4_CLASSES = [[0, 1], [2, 3], [4, 5]]

EXAMPLES = {
    "example1": (4, EXAMPLE1_BLOCKS, EXAMPLE1_CLASSES),
    "example2": (6, EXAMPLE2_BLOCKS, EXAMPLE2_CLASSES),
    "example3": (9, EXAMPLE3_BLOCKS, EXAMPLE3_CLASSES),
    "example4": (8, EXAMPLE4_BLOCKS, EXAMPLE4_CLASSES),
}


def example_resolution(name):
    v, blocks, classes = EXAMPLES[name]
    return validate_resolution(validate_design(v, blocks), classes)


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    return request.param
