

from redraw.corpus import (
    boolean_lattice,
    grid,
    standard_contexts,
    standard_orders,
    write_corpus,
)
from redraw.fca import concept_lattice, parse_cxt
from redraw.io import parse_cover_edges
from redraw.order import is_lattice


def test_shipped_corpus_has_at_least_thirty_inputs(corpus_dir):
    files = sorted(corpus_dir.glob("*.edges")) + sorted(corpus_dir.glob("*.cxt"))
    assert len(files) >= 30
    names = {p.name for p in files}
    for required in ("b3.edges", "m3.edges", "n5.edges", "chain3.edges",
                     "antichain3.edges", "living_beings_and_water.cxt"):
        assert required in names


def test_shipped_files_parse(corpus_dir):
    for path in sorted(corpus_dir.glob("*.edges")):
        order = parse_cover_edges(path.read_text(encoding="utf-8"))
        assert order.n >= 1
    for path in sorted(corpus_dir.glob("*.cxt")):
        ctx = parse_cxt(path.read_text(encoding="utf-8"))
        assert concept_lattice(ctx).n >= 1


def test_shipped_concept_lattices_are_lattices(corpus_dir):
    for path in sorted(corpus_dir.glob("*.cxt")):
        lattice = concept_lattice(parse_cxt(path.read_text(encoding="utf-8")))
        assert is_lattice(lattice), path.name


def test_corpus_matches_generators_bit_for_bit(corpus_dir, tmp_path):
    regenerated = write_corpus(tmp_path / "fresh")
    for fresh in regenerated:
        shipped = corpus_dir / fresh.name
        assert shipped.exists(), fresh.name
        assert shipped.read_bytes() == fresh.read_bytes(), fresh.name


def test_standard_orders_shapes():
    named = standard_orders()
    assert named["chain5"].n == 5
    assert named["b3"].n == 8
    assert named["m4"].n == 6
    assert named["grid3x4"].n == 12
    assert is_lattice(named["grid3x4"])
    assert is_lattice(named["n5"])
    assert not is_lattice(named["crown4"])
    assert not is_lattice(named["antichain3"])


def test_grid_is_a_product_order():
    order = grid(2, 3)
    assert order.is_lt("g00", "g12")
    assert not order.is_comparable("g01", "g10")


def test_boolean_lattice_cover_counts():
    order = boolean_lattice(4)
    assert order.n == 16
    assert len(order.cover_index_pairs) == 4 * 8  # k * 2^(k-1)


def test_standard_contexts_include_the_classic_example():
    contexts = standard_contexts()
    ctx = contexts["living_beings_and_water"]
    assert len(ctx.objects) == 8
    assert len(ctx.attributes) == 9
    assert concept_lattice(ctx).n == 19
