import numpy as np
import pytest

from micromorphic.materials import (CauchyMaterial, Flavor,
                                    MicromorphicMaterial)

TABLE1 = dict(rho=2000.0, eta=1e-2, mu_e=2e8, lambda_e=4e8, mu_c=2e9,
              mu_micro=1e8, lambda_micro=1e8)


@pytest.fixture(scope="session")
def table1_relaxed() -> MicromorphicMaterial:
    return MicromorphicMaterial(**TABLE1, char_length=1e-2,
                                flavor=Flavor.RELAXED)


@pytest.fixture(scope="session")
def table1_mindlin() -> MicromorphicMaterial:
    return MicromorphicMaterial(**TABLE1, char_length=1e-2,
                                flavor=Flavor.MINDLIN)


@pytest.fixture(scope="session")
def table1_internal() -> MicromorphicMaterial:
    return MicromorphicMaterial(**TABLE1, char_length=0.0,
                                flavor=Flavor.INTERNAL_VARIABLE)


@pytest.fixture(scope="session")
def table1_cauchy() -> CauchyMaterial:
    return CauchyMaterial(rho=2000.0, lambda_macro=4e8, mu_macro=2e8)


def random_micromorphic(rng: np.random.Generator,
                        flavor: Flavor = Flavor.RELAXED
                        ) -> MicromorphicMaterial:
    """Random material with fully positive-definite strain energy:
    positive moduli over a few decades and lambdas with 3*lambda + 2*mu
    bounded away from zero (below that the medium is unstable)."""
    def modulus():
        return float(10 ** rng.uniform(7.0, 10.0))

    mu_e = modulus()
    mu_micro = modulus()
    lambda_e = float(rng.uniform(-0.6, 4.0)) * mu_e
    lambda_micro = float(rng.uniform(-0.6, 4.0)) * mu_micro
    char_length = (0.0 if flavor is Flavor.INTERNAL_VARIABLE
                   else float(10 ** rng.uniform(-3.5, -1.5)))
    return MicromorphicMaterial(
        rho=float(rng.uniform(500.0, 9000.0)),
        eta=float(10 ** rng.uniform(-3.0, 0.0)),
        mu_e=mu_e,
        lambda_e=lambda_e,
        mu_c=modulus(),
        mu_micro=mu_micro,
        lambda_micro=lambda_micro,
        char_length=char_length,
        flavor=flavor)
