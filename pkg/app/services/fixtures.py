"""Named matroids used by the verification suites and the tests."""
from functools import lru_cache

import numpy as np

from app.services.matroid_kernel import Matroid, graphic, linear_gf2, uniform

RANDOM_GF2_COUNT = 25


def k4_minus_edge() -> Matroid:
    """Edges 0=ab, 1=bc, 2=ca, 3=cd, 4=da."""
    return graphic("abcd", [("a", "b"), ("b", "c"), ("c", "a"), ("c", "d"), ("d", "a")])


def cycle(k: int) -> Matroid:
    return graphic(range(k), [(i, (i + 1) % k) for i in range(k)])


def k4() -> Matroid:
    return graphic("abcd", [("a", "b"), ("b", "c"), ("c", "a"), ("c", "d"), ("d", "a"), ("b", "d")])


def two_triangles() -> Matroid:
    return graphic("abcd", [("a", "c"), ("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])


def triangle_and_square() -> Matroid:
    return graphic("abcde", [("a", "b"), ("b", "c"), ("c", "a"), ("c", "d"), ("d", "e"), ("e", "a")])


def wheel(spokes: int = 4) -> Matroid:
    rim = [(i, (i + 1) % spokes) for i in range(spokes)]
    hub = [("h", i) for i in range(spokes)]
    return graphic(["h", *range(spokes)], rim + hub)


def theta() -> Matroid:
    """Three internally disjoint paths of length two between u and v."""
    return graphic("uvabc", [("u", "a"), ("a", "v"), ("u", "b"), ("b", "v"), ("u", "c"), ("c", "v")])


def random_gf2(seed: int, max_elements: int = 9) -> Matroid:
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, max_elements + 1))
    height = int(rng.integers(2, 5))
    columns = rng.integers(0, 2, size=(n, height)).tolist()
    return linear_gf2(columns)


@lru_cache(maxsize=None)
def corpus() -> tuple[tuple[str, Matroid], ...]:
    named = [(f"U{r},{n}", uniform(r, n)) for n in range(8) for r in range(n + 1)]
    named += [(f"C{k}", cycle(k)) for k in range(3, 7)]
    named += [
        ("K4", k4()),
        ("K4-e", k4_minus_edge()),
        ("two-triangles", two_triangles()),
        ("triangle+square", triangle_and_square()),
        ("W4", wheel(4)),
        ("theta", theta()),
    ]
    named += [(f"gf2-{seed}", random_gf2(seed)) for seed in range(RANDOM_GF2_COUNT)]
    return tuple(named)


def fixture(name: str) -> Matroid:
    for fixture_name, M in corpus():
        if fixture_name == name:
            return M
    raise KeyError(name)
