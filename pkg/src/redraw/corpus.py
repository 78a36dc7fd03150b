"""Builders for the shipped test corpus: classical lattices, a few standard
formal contexts and seeded random orders/contexts."""

from pathlib import Path

import numpy as np

from .fca import FormalContext, write_cxt
from .io import write_cover_edges
from .order import OrderedSet, order_from_covers


def chain(n: int) -> OrderedSet:
    elements = [f"c{i:02d}" for i in range(n)]
    return order_from_covers(elements, [(elements[i], elements[i + 1]) for i in range(n - 1)])


def antichain(n: int) -> OrderedSet:
    return order_from_covers([f"a{i:02d}" for i in range(n)], [])


def boolean_lattice(k: int) -> OrderedSet:
    elements = [format(i, f"0{k}b") if k else "0" for i in range(1 << k)]
    pairs = []
    for i in range(1 << k):
        for bit in range(k):
            if not i & (1 << bit):
                pairs.append((elements[i], elements[i | (1 << bit)]))
    return order_from_covers(elements, pairs)


def m_lattice(k: int) -> OrderedSet:
    """Bottom, k pairwise incomparable middles, top."""
    middles = [f"m{i}" for i in range(1, k + 1)]
    pairs = [("bot", m) for m in middles] + [(m, "top") for m in middles]
    return order_from_covers(["bot", "top", *middles], pairs)


def n5() -> OrderedSet:
    pairs = [("bot", "a"), ("a", "c"), ("c", "top"), ("bot", "b"), ("b", "top")]
    return order_from_covers(["bot", "a", "b", "c", "top"], pairs)


def grid(p: int, q: int) -> OrderedSet:
    """Product of two chains, ordered componentwise."""
    elements = {(i, j): f"g{i}{j}" for i in range(p) for j in range(q)}
    pairs = []
    for (i, j), name in elements.items():
        if i + 1 < p:
            pairs.append((name, elements[(i + 1, j)]))
        if j + 1 < q:
            pairs.append((name, elements[(i, j + 1)]))
    return order_from_covers(elements.values(), pairs)


def crown4() -> OrderedSet:
    """Two minimal and two maximal elements, completely connected."""
    return order_from_covers(
        ["a", "b", "c", "d"], [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]
    )


def fence(n: int) -> OrderedSet:
    """Zigzag order f0 < f1 > f2 < f3 > ..."""
    elements = [f"f{i:02d}" for i in range(n)]
    pairs = []
    for i in range(n - 1):
        pairs.append((elements[i], elements[i + 1]) if i % 2 == 0 else (elements[i + 1], elements[i]))
    return order_from_covers(elements, pairs)


def random_order(n: int, edge_probability: float, seed: int) -> OrderedSet:
    """Random order: sample pairs along a random permutation, close transitively."""
    rng = np.random.default_rng(seed)
    names = [f"e{i:03d}" for i in range(n)]
    topo = list(rng.permutation(n))
    pairs = []
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < edge_probability:
                pairs.append((names[topo[a]], names[topo[b]]))
    return order_from_covers(names, pairs)


def random_context(n_objects: int, n_attributes: int, density: float, seed: int) -> FormalContext:
    rng = np.random.default_rng(seed)
    incidence = rng.random((n_objects, n_attributes)) < density
    return FormalContext(
        tuple(f"g{i}" for i in range(n_objects)),
        tuple(f"m{j}" for j in range(n_attributes)),
        incidence,
    )


def living_beings_context() -> FormalContext:
    """The classical `living beings and water` teaching context."""
    objects = ("Leech", "Bream", "Frog", "Dog", "Spike-weed", "Reed", "Bean", "Maize")
    attributes = (
        "needs water",
        "lives in water",
        "lives on land",
        "needs chlorophyll",
        "two seed leaves",
        "one seed leaf",
        "can move",
        "has limbs",
        "suckles offspring",
    )
    rows = [
        "XX....X..",  # Leech
        "XX....XX.",  # Bream
        "XXX...XX.",  # Frog
        "X.X...XXX",  # Dog
        "XX.X.X...",  # Spike-weed
        "XXXX.X...",  # Reed
        "X.XXX....",  # Bean
        "X.XX.X...",  # Maize
    ]
    incidence = np.array([[ch == "X" for ch in row] for row in rows])
    return FormalContext(objects, attributes, incidence)


def standard_orders() -> dict[str, OrderedSet]:
    """The named classical orders shipped with the corpus."""
    named = {}
    for n in range(2, 9):
        named[f"chain{n}"] = chain(n)
    for n in range(2, 6):
        named[f"antichain{n}"] = antichain(n)
    for k in (2, 3, 4):
        named[f"b{k}"] = boolean_lattice(k)
    for k in (3, 4, 5):
        named[f"m{k}"] = m_lattice(k)
    named["n5"] = n5()
    named["grid2x3"] = grid(2, 3)
    named["grid3x3"] = grid(3, 3)
    named["grid3x4"] = grid(3, 4)
    named["grid2x5"] = grid(2, 5)
    named["crown4"] = crown4()
    named["fence5"] = fence(5)
    return named


def standard_contexts() -> dict[str, FormalContext]:
    contexts = {"living_beings_and_water": living_beings_context()}
    for k in range(6):
        contexts[f"random_context_{k}"] = random_context(
            n_objects=5 + k, n_attributes=5 + (k % 3), density=0.4, seed=100 + k
        )
    return contexts


def write_corpus(directory: str | Path) -> list[Path]:
    """Materialize the shipped corpus as .edges and .cxt files."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, order in sorted(standard_orders().items()):
        path = directory / f"{name}.edges"
        path.write_text(write_cover_edges(order), encoding="utf-8")
        written.append(path)
    for name, ctx in sorted(standard_contexts().items()):
        path = directory / f"{name}.cxt"
        path.write_text(write_cxt(ctx), encoding="utf-8")
        written.append(path)
    return written
