"""Formal contexts and their concept lattices.

Contexts arrive as Burmeister `.cxt` files.  Concepts are enumerated with the
NextClosure algorithm over attribute sets held as integer bitmasks, ordered by
extent inclusion, and labeled by reduced labeling (the objects and attributes
introduced at each concept).  Concepts that introduce nothing get a positional
`#k` id.
"""

from dataclasses import dataclass

import numpy as np

from .io import ParseError
from .order import OrderedSet


class SizeLimitExceeded(RuntimeError):
    """A context produced more concepts than the configured cap."""


DEFAULT_CONCEPT_CAP = 10_000


@dataclass(frozen=True)
class FormalContext:
    objects: tuple[str, ...]
    attributes: tuple[str, ...]
    incidence: np.ndarray  # bool, objects x attributes

    def __post_init__(self):
        objects = tuple(self.objects)
        attributes = tuple(self.attributes)
        incidence = np.array(self.incidence, dtype=bool)
        if incidence.shape != (len(objects), len(attributes)):
            raise ValueError("incidence shape does not match object/attribute counts")
        incidence.setflags(write=False)
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "attributes", attributes)
        object.__setattr__(self, "incidence", incidence)


def parse_cxt(text: str) -> FormalContext:
    """Parse a Burmeister context: `B`, blank line, object and attribute
    counts, blank line, names, then `X`/`.` rows."""
    lines = text.splitlines()

    def expect(index: int, what: str) -> str:
        if index >= len(lines):
            raise ParseError(f"unexpected end of file, expected {what}", index + 1)
        return lines[index]

    if expect(0, "header 'B'").strip() != "B":
        raise ParseError("expected header 'B'", 1)
    if expect(1, "blank line").strip() != "":
        raise ParseError("expected a blank line after the header", 2)
    try:
        n_objects = int(expect(2, "object count").strip())
        n_attributes = int(expect(3, "attribute count").strip())
    except ValueError:
        raise ParseError("object and attribute counts must be integers", 3) from None
    if n_objects < 0 or n_attributes < 0:
        raise ParseError("counts must be non-negative", 3)
    if expect(4, "blank line").strip() != "":
        raise ParseError("expected a blank line after the counts", 5)

    base = 5
    objects = [expect(base + i, "object name").rstrip("\r\n") for i in range(n_objects)]
    attributes = [
        expect(base + n_objects + i, "attribute name").rstrip("\r\n")
        for i in range(n_attributes)
    ]
    rows_at = base + n_objects + n_attributes
    incidence = np.zeros((n_objects, n_attributes), dtype=bool)
    for i in range(n_objects):
        row = expect(rows_at + i, "incidence row").rstrip("\r\n")
        if len(row) != n_attributes:
            raise ParseError(
                f"incidence row has {len(row)} entries, expected {n_attributes}",
                rows_at + i + 1,
            )
        for j, ch in enumerate(row):
            if ch == "X":
                incidence[i, j] = True
            elif ch != ".":
                raise ParseError(f"incidence entries must be 'X' or '.', got {ch!r}", rows_at + i + 1)
    for extra in lines[rows_at + n_objects :]:
        if extra.strip():
            raise ParseError("trailing content after the incidence rows", rows_at + n_objects + 1)
    if len(set(objects)) != n_objects or len(set(attributes)) != n_attributes:
        raise ParseError("object and attribute names must be unique", base + 1)
    return FormalContext(tuple(objects), tuple(attributes), incidence)


def write_cxt(ctx: FormalContext) -> str:
    rows = [
        "".join("X" if ctx.incidence[i, j] else "." for j in range(len(ctx.attributes)))
        for i in range(len(ctx.objects))
    ]
    parts = ["B", "", str(len(ctx.objects)), str(len(ctx.attributes)), ""]
    parts.extend(ctx.objects)
    parts.extend(ctx.attributes)
    parts.extend(rows)
    return "\n".join(parts) + "\n"


def _attribute_rows(ctx: FormalContext) -> list[int]:
    """Attribute bitmask of each object row."""
    rows = []
    for i in range(len(ctx.objects)):
        mask = 0
        for j in np.flatnonzero(ctx.incidence[i]):
            mask |= 1 << int(j)
        rows.append(mask)
    return rows


def _double_prime(rows: list[int], full_intent: int, intent: int) -> tuple[int, int]:
    """(extent mask, closed intent) of an attribute set."""
    extent = 0
    closed = full_intent
    for i, row in enumerate(rows):
        if row & intent == intent:
            extent |= 1 << i
            closed &= row
    if extent == 0:
        closed = full_intent
    return extent, closed


def _closed_intents(ctx: FormalContext, cap: int) -> list[tuple[int, int]]:
    """All (extent, intent) bitmask pairs, in lectic intent order."""
    m = len(ctx.attributes)
    rows = _attribute_rows(ctx)
    full_intent = (1 << m) - 1
    concepts = []
    extent, intent = _double_prime(rows, full_intent, 0)
    while True:
        concepts.append((extent, intent))
        if len(concepts) > cap:
            raise SizeLimitExceeded(f"more than {cap} concepts")
        nxt = None
        for i in range(m - 1, -1, -1):
            bit = 1 << i
            if intent & bit:
                continue
            below = (bit - 1) & intent
            cand_extent, cand_intent = _double_prime(rows, full_intent, below | bit)
            if cand_intent & (bit - 1) == below:
                nxt = (cand_extent, cand_intent)
                break
        if nxt is None:
            return concepts
        extent, intent = nxt


def concept_lattice(ctx: FormalContext, max_concepts: int = DEFAULT_CONCEPT_CAP) -> OrderedSet:
    """The lattice of all formal concepts of a context, ordered by extent
    inclusion.  Raises SizeLimitExceeded above `max_concepts` concepts."""
    concepts = _closed_intents(ctx, max_concepts)
    # canonical order: by extent size, then by extent content
    concepts.sort(key=lambda c: (bin(c[0]).count("1"), c[0]))
    labels = _reduced_labels(ctx, concepts)
    ids = _unique_ids(labels)
    order = sorted(range(len(concepts)), key=lambda k: ids[k])
    n = len(concepts)
    leq = np.zeros((n, n), dtype=bool)
    for a, ka in enumerate(order):
        ea = concepts[ka][0]
        for b, kb in enumerate(order):
            leq[a, b] = (ea & ~concepts[kb][0]) == 0
    return OrderedSet(tuple(ids[k] for k in order), leq)


def _reduced_labels(ctx: FormalContext, concepts: list[tuple[int, int]]) -> list[str]:
    rows = _attribute_rows(ctx)
    full_intent = (1 << len(ctx.attributes)) - 1
    by_intent = {intent: k for k, (_, intent) in enumerate(concepts)}
    introduced_objects: dict[int, list[str]] = {}
    introduced_attributes: dict[int, list[str]] = {}
    for i, g in enumerate(ctx.objects):
        k = by_intent[rows[i]]
        introduced_objects.setdefault(k, []).append(g)
    for j, attr in enumerate(ctx.attributes):
        _, closed = _double_prime(rows, full_intent, 1 << j)
        k = by_intent[closed]
        introduced_attributes.setdefault(k, []).append(attr)
    labels = []
    for k in range(len(concepts)):
        parts = sorted(introduced_attributes.get(k, [])) + sorted(introduced_objects.get(k, []))
        labels.append(", ".join(parts))
    return labels


def _unique_ids(labels: list[str]) -> list[str]:
    seen: dict[str, int] = {}
    ids = []
    for k, label in enumerate(labels):
        candidate = label if label else f"#{k}"
        if candidate in seen:
            candidate = f"{candidate} #{k}"
        seen[candidate] = k
        ids.append(candidate)
    return ids
