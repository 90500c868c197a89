import pytest

from diagcut.config import RunConfig
from diagcut.errors import PrimeTooSmall
from diagcut.interp import LinearSystem, generic_dimension
from diagcut.linalg import MERSENNE61


def test_defaults():
    c = RunConfig()
    assert (c.prime, c.trials, c.seed, c.depth, c.jobs) == (MERSENNE61, 3, 0, 6, 1)


@pytest.mark.parametrize("kwargs", [{"trials": 0}, {"seed": -1}, {"prime": 2**61}])
def test_rejects(kwargs):
    with pytest.raises(ValueError):
        RunConfig(**kwargs)


def test_env_override():
    c = RunConfig().with_env({"DIAGCUT_SEED": "7", "DIAGCUT_TRIALS": "2", "UNRELATED": "1"})
    assert (c.seed, c.trials) == (7, 2)
    assert RunConfig().with_env({}) == RunConfig()


def test_env_values_are_validated():
    with pytest.raises(ValueError):
        RunConfig().with_env({"DIAGCUT_TRIALS": "0"})


def test_small_prime_refused_by_rank():
    with pytest.raises(PrimeTooSmall):
        generic_dimension(LinearSystem.plane(2, (1,)), p=101)
