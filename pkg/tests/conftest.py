import functools

import pytest
from hypothesis import settings

from qgw.hopf import corpus, function_algebra, group_algebra

settings.register_profile("qgw", max_examples=40, deadline=None)
settings.load_profile("qgw")


@functools.lru_cache(maxsize=None)
def corpus_qg(name, kind):
    G = corpus()[name]
    return function_algebra(G) if kind == "function" else group_algebra(G)


CORPUS = [(name, kind) for name in ("Z2", "Z3", "Z4", "Z2xZ2", "S3", "D4") for kind in ("function", "group")]


@pytest.fixture(params=CORPUS, ids=lambda p: f"{p[1]}-{p[0]}")
def corpus_member(request):
    return corpus_qg(*request.param)
