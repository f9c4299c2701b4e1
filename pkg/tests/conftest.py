import pytest

from planecolor.generators import NAMED_GRAPHS, named


@pytest.fixture(params=NAMED_GRAPHS)
def corpus_graph(request):
    return named(request.param)


@pytest.fixture
def icosahedron():
    return named("icosahedron")


@pytest.fixture
def cube():
    return named("cube")
