import pytest
from gmpy2 import mpq


@pytest.fixture(scope="session")
def airy():
    from planarlab.statslab import AiryDensityEvaluator
    return AiryDensityEvaluator()


@pytest.fixture(scope="session")
def map_chain_300():
    from planarlab.cache import cached_map_chain
    return cached_map_chain(mpq(1), 300)


@pytest.fixture(scope="session")
def map_catalog_4():
    from planarlab.cache import cached_map_catalog
    return cached_map_catalog(4)


@pytest.fixture(scope="session")
def graph_table_small():
    from planarlab.grammar import build_graph_chain
    return build_graph_chain(7, bivariate_cg=True)


@pytest.fixture(scope="session")
def graph_oracle_5():
    from planarlab.oracles import enumerate_labelled_planar_graphs
    return enumerate_labelled_planar_graphs(5)
