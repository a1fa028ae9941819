"""The committed golden artifacts regenerate byte-identically."""
import pytest

from tests.goldens import GOLDEN_DIR, PRODUCERS


@pytest.mark.parametrize("name", sorted(PRODUCERS))
def test_golden_file_stable(name):
    producer = PRODUCERS[name]
    first = producer()
    second = producer()
    assert first == second, f"{name} not byte-stable across two runs"
    committed = (GOLDEN_DIR / name).read_text()
    assert first == committed, f"{name} differs from the committed golden file"
