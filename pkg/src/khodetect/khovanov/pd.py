"""Planar diagram codes.

A crossing ``(i, j, k, l)`` lists its four edges counterclockwise starting
from the incoming under-strand, so the under-strand runs ``i -> k`` and the
over-strand joins ``j`` and ``l``.  Crossingless unknotted components are
counted separately as ``free_loops``; they receive the edge labels after
the ones used by crossings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class PDError(ValueError):
    """Malformed diagram input.  ``field`` names the offending JSON key."""

    def __init__(self, message: str, field: str = "pd"):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class PDCode:
    crossings: tuple[tuple[int, int, int, int], ...]
    free_loops: int = 0
    signs: tuple[int, ...] = ()
    # head[e] is the (crossing, position) where edge e ends
    head: dict = field(default_factory=dict, repr=False, compare=False)
    components: tuple[tuple[int, ...], ...] = field(default=(), compare=False)

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_edges(self) -> int:
        return 2 * len(self.crossings) + self.free_loops

    @property
    def edges(self) -> range:
        return range(1, self.n_edges + 1)

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    def free_loop_edges(self) -> range:
        return range(2 * len(self.crossings) + 1, self.n_edges + 1)

    def component_of(self, edge: int) -> int:
        for k, comp in enumerate(self.components):
            if edge in comp:
                return k
        raise PDError(f"unknown edge {edge}", "basepoints")

    def crossing_between(self, a: int, b: int) -> int | None:
        """The crossing where edge ``a`` ends and edge ``b`` begins, if any."""
        c, p = self.head.get(a, (None, None))
        if c is None:
            return None
        return c if self.crossings[c][(p + 2) % 4] == b else None

    def next_edge(self, e: int) -> int:
        if e in self.head:
            c, p = self.head[e]
            return self.crossings[c][(p + 2) % 4]
        return e

    def mirror(self) -> "PDCode":
        """Swap over and under at every crossing."""
        new = []
        for c, (i, j, k, l) in enumerate(self.crossings):
            # the new under-strand is the old over-strand, entering at its head
            if self.head[l] == (c, 3):
                new.append((l, i, j, k))
            else:
                new.append((j, k, l, i))
        return make_pd(new, self.free_loops, [-s for s in self.signs])

    def to_json(self, basepoints: dict | None = None) -> dict:
        out = {"pd": [list(x) for x in self.crossings], "free_loops": self.free_loops,
               "signs": list(self.signs)}
        if basepoints is not None:
            out["basepoints"] = dict(basepoints)
        return out


def _orient(crossings, n_edges):
    """Find the head incidence of each edge by walking along components."""
    inc: dict[int, list[tuple[int, int]]] = {}
    for c, x in enumerate(crossings):
        for p, e in enumerate(x):
            inc.setdefault(e, []).append((c, p))
    for e in range(1, n_edges + 1):
        if len(inc.get(e, ())) != 2:
            raise PDError(f"edge {e} must appear exactly twice, found "
                          f"{len(inc.get(e, ()))}")
    extra = set(inc) - set(range(1, n_edges + 1))
    if extra:
        raise PDError(f"edge labels must be 1..{n_edges}; got {sorted(extra)[0]}")

    def other(e, cp):
        a, b = inc[e]
        return b if a == cp else a

    head: dict[int, tuple[int, int]] = {}
    components = []
    seen: set[int] = set()

    def walk(e, h):
        comp = []
        while e not in seen:
            seen.add(e)
            comp.append(e)
            head[e] = h
            c, p = h
            nxt = crossings[c][(p + 2) % 4]
            h = other(nxt, (c, (p + 2) % 4))
            e = nxt
        return comp

    # components with an under-strand have a forced orientation
    for c, x in enumerate(crossings):
        if x[0] not in seen:
            components.append(walk(x[0], (c, 0)))
    # components that only pass over: follow increasing labels
    for e in sorted(inc):
        if e in seen:
            continue
        a, b = inc[e]
        ca, pa = a
        fwd = crossings[ca][(pa + 2) % 4]
        components.append(walk(e, a if fwd == e + 1 else b))
    for c, x in enumerate(crossings):
        if head[x[0]] != (c, 0) or head[x[2]] == (c, 2):
            raise PDError(f"crossing {c} has an inconsistent under-strand orientation")
    return head, components


def make_pd(crossings, free_loops: int = 0, signs=None) -> PDCode:
    crossings = tuple(tuple(int(e) for e in x) for x in crossings)
    for c, x in enumerate(crossings):
        if len(x) != 4:
            raise PDError(f"crossing {c} does not have four edges")
    if free_loops < 0:
        raise PDError("must be nonnegative", "free_loops")
    n = 2 * len(crossings)
    head, comps = _orient(crossings, n)
    derived = tuple(1 if head[x[3]] == (c, 3) else -1 for c, x in enumerate(crossings))
    if signs is None or len(signs) == 0:
        signs = derived
    else:
        signs = tuple(int(s) for s in signs)
        if len(signs) != len(crossings) or any(s not in (1, -1) for s in signs):
            raise PDError("need one entry of +1 or -1 per crossing", "signs")
    comps = [tuple(c) for c in comps]
    comps += [(e,) for e in range(n + 1, n + free_loops + 1)]
    return PDCode(crossings, free_loops, signs, head, tuple(comps))


@dataclass(frozen=True)
class Diagram:
    """A PD code together with the two basepoint edges."""

    pd: PDCode
    p: int
    q: int
    name: str = ""

    def to_json(self) -> dict:
        out = self.pd.to_json({"p": self.p, "q": self.q})
        if self.name:
            out["name"] = self.name
        return out


def parse_pd(data) -> PDCode:
    """Parse a JSON document (text or decoded object) into a :class:`PDCode`."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise PDError(f"invalid JSON ({exc.msg})", "input") from None
    if not isinstance(data, dict):
        raise PDError("expected a JSON object", "input")
    if "pd" not in data:
        raise PDError("missing", "pd")
    pd = data["pd"]
    if not isinstance(pd, list) or any(
            not isinstance(x, list) or len(x) != 4 or
            any(not isinstance(e, int) or isinstance(e, bool) for e in x) for x in pd):
        raise PDError("expected a list of 4-tuples of integers")
    free = data.get("free_loops", 0)
    if not isinstance(free, int) or isinstance(free, bool):
        raise PDError("expected an integer", "free_loops")
    signs = data.get("signs")
    if signs is not None and not isinstance(signs, list):
        raise PDError("expected a list", "signs")
    return make_pd(pd, free, signs)


def parse_diagram(data) -> Diagram:
    """Parse a diagram with basepoints; defaults to ``p = q = 1``."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise PDError(f"invalid JSON ({exc.msg})", "input") from None
    pd = parse_pd(data)
    bp = data.get("basepoints", {"p": 1, "q": 1})
    if not isinstance(bp, dict):
        raise PDError("expected an object with keys p and q", "basepoints")
    p, q = bp.get("p", 1), bp.get("q", 1)
    for name, e in (("p", p), ("q", q)):
        if not isinstance(e, int) or not 1 <= e <= pd.n_edges:
            raise PDError(f"{name} must be an edge label in 1..{pd.n_edges}", "basepoints")
    return Diagram(pd, p, q, str(data.get("name", "")))
