import pytest

from centroidlab import make_family
from centroidlab.montecarlo import ExperimentConfig, run_experiment
from centroidlab.treegen import enumerate_histories

FAMILY_SPECS = [
    ("recursive", {}),
    ("plane", {}),
    ("dary", {"d": 2}),
    ("dary", {"d": 3}),
]

ACCEPTANCE_SEED = 20260810


def family_list():
    return [make_family(tag, **kw) for tag, kw in FAMILY_SPECS]


@pytest.fixture(scope="session")
def families():
    return family_list()


@pytest.fixture(scope="session")
def enumerations():
    """Lazy cache of enumerate_histories keyed by (family tag, n)."""
    cache = {}

    def get(family, n):
        key = (family.tag, n)
        if key not in cache:
            cache[key] = enumerate_histories(family, n)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def mc_acceptance():
    """Shared large Monte Carlo runs: n = 10^4, 10^5 trials, fixed seed."""
    cache = {}

    def get(tag):
        if tag not in cache:
            family = (
                make_family("dary", d=2) if tag == "dary2" else make_family(tag)
            )
            config = ExperimentConfig(
                family=family,
                n=10_000,
                trials=100_000,
                master_seed=ACCEPTANCE_SEED,
            )
            cache[tag] = run_experiment(config, threads=2)
        return cache[tag]

    return get
