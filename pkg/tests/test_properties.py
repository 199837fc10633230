import pytest

from property_suite import PROPERTIES, run_property

EXAMPLES = 100


@pytest.mark.parametrize("name", sorted(PROPERTIES))
def test_property(name):
    assert run_property(name, EXAMPLES) >= EXAMPLES
