"""Planar trees decorated with a laminar family of circles.

A circled tree is a planar tree together with nested or disjoint circles
drawn on it.  Each circle encloses a connected region with one entering edge
from below; the ``content`` field holds the region inside the circle and the
``grafts`` hold the continuations of its exit edges above the circle, one per
open leaf of the content.  A bare planar tree is a circle-free circled tree.

Circles are white (carrying a positive integer label) or black.  A
configuration with k white circles is valid when the white labels are exactly
1..k, no black circle encloses fewer than two vertices of its inside tree, no
black circle sits directly inside another black circle, and every black
circle sits inside at least one white circle.

Text form: ``ct ::= "|" | "(" ct* ")" | "{" kind ct "/" ct* "}"`` with
``kind ::= "w"<int> | "b"``; the identity circle on the free edge prints as
``{w1 | / |}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import chain, permutations, product

from .trees import LEAF, Leaf, Node, ParseError, _skip_spaces, graft
from .trees import leaves as tree_leaves
from .trees import vertices as tree_vertices


@dataclass(frozen=True)
class White:
    """Kind of a labelled white circle."""

    label: int

    def __str__(self) -> str:
        return f"w{self.label}"


@dataclass(frozen=True)
class Black:
    """Kind of a black circle."""

    def __str__(self) -> str:
        return "b"


BLACK = Black()


@dataclass(frozen=True)
class Circ:
    """A circle with the region inside it and the continuations above it."""

    kind: White | Black
    content: object
    grafts: tuple

    def __post_init__(self):
        need = open_leaves(self.content)
        if len(self.grafts) != need:
            raise ValueError(
                f"graft arity mismatch: content has {need} open leaves,"
                f" got {len(self.grafts)} grafts"
            )

    def __str__(self) -> str:
        inner = " ".join(str(g) for g in self.grafts)
        sep = " " if inner else ""
        return "{" + f"{self.kind} {self.content} /{sep}{inner}" + "}"


CircledTree = Leaf | Node | Circ


def open_leaves(c) -> int:
    """Open leaves of a term; a circle binds its content's leaves to grafts."""
    if isinstance(c, Leaf):
        return 1
    if isinstance(c, Node):
        return sum(open_leaves(x) for x in c.children)
    return sum(open_leaves(g) for g in c.grafts)


def underlying(c):
    """Erase all circles, returning the underlying planar tree."""
    if isinstance(c, Leaf):
        return LEAF
    if isinstance(c, Node):
        return Node(tuple(underlying(x) for x in c.children))
    return graft(underlying(c.content), [underlying(g) for g in c.grafts])


def contracted(c):
    """Contract every circle of c to a single vertex over its exits."""
    if isinstance(c, Leaf):
        return LEAF
    if isinstance(c, Node):
        return Node(tuple(contracted(x) for x in c.children))
    return Node(tuple(contracted(g) for g in c.grafts))


# --- codec -----------------------------------------------------------------

def parse_config(text: str):
    """Parse the text form of a circled tree; errors carry byte offsets."""
    c, pos = _parse_at(text, _skip_spaces(text, 0))
    pos = _skip_spaces(text, pos)
    if pos != len(text):
        raise ParseError(pos, "trailing input after configuration")
    return c


def _parse_at(text: str, pos: int):
    if pos >= len(text):
        raise ParseError(pos, "unexpected end of input, expected a configuration")
    ch = text[pos]
    if ch == "|":
        return LEAF, pos + 1
    if ch == "(":
        pos += 1
        children = []
        while True:
            pos = _skip_spaces(text, pos)
            if pos >= len(text):
                raise ParseError(pos, "unclosed '('")
            if text[pos] == ")":
                return Node(tuple(children)), pos + 1
            child, pos = _parse_at(text, pos)
            children.append(child)
    if ch == "{":
        start = pos
        kind, pos = _parse_kind(text, pos + 1)
        pos = _skip_spaces(text, pos)
        content, pos = _parse_at(text, pos)
        pos = _skip_spaces(text, pos)
        if pos >= len(text) or text[pos] != "/":
            raise ParseError(pos, "expected '/' between content and grafts")
        pos += 1
        grafts = []
        while True:
            pos = _skip_spaces(text, pos)
            if pos >= len(text):
                raise ParseError(pos, "unclosed '{'")
            if text[pos] == "}":
                break
            g, pos = _parse_at(text, pos)
            grafts.append(g)
        if open_leaves(content) != len(grafts):
            raise ParseError(
                start,
                f"circle content has {open_leaves(content)} open leaves"
                f" but {len(grafts)} grafts were given",
            )
        return Circ(kind, content, tuple(grafts)), pos + 1
    raise ParseError(pos, f"unexpected character {ch!r}")


def _parse_kind(text: str, pos: int):
    pos = _skip_spaces(text, pos)
    if pos >= len(text):
        raise ParseError(pos, "expected circle kind 'w<int>' or 'b'")
    if text[pos] == "b":
        return BLACK, pos + 1
    if text[pos] == "w":
        pos += 1
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if pos == start:
            raise ParseError(start, "white circle label must be an integer")
        return White(int(text[start:pos])), pos
    raise ParseError(pos, f"unexpected circle kind {text[pos]!r}")


# --- addresses ---------------------------------------------------------------

# An address is a tuple of steps ("child", i) | ("content", 0) | ("graft", i)
# leading from the root of the term to a subterm.

CONTENT = ("content", 0)


def resolve(c, addr):
    for step in addr:
        c = _descend(c, step)
    return c


def _descend(c, step):
    what, idx = step
    if what == "child" and isinstance(c, Node) and idx < len(c.children):
        return c.children[idx]
    if what == "content" and isinstance(c, Circ):
        return c.content
    if what == "graft" and isinstance(c, Circ) and idx < len(c.grafts):
        return c.grafts[idx]
    raise ValueError(f"address step {step} does not match term {c}")


def replace_at(c, addr, new):
    if not addr:
        return new
    step, rest = addr[0], addr[1:]
    what, idx = step
    if what == "child" and isinstance(c, Node) and idx < len(c.children):
        kids = list(c.children)
        kids[idx] = replace_at(kids[idx], rest, new)
        return Node(tuple(kids))
    if what == "content" and isinstance(c, Circ):
        return Circ(c.kind, replace_at(c.content, rest, new), c.grafts)
    if what == "graft" and isinstance(c, Circ) and idx < len(c.grafts):
        gs = list(c.grafts)
        gs[idx] = replace_at(gs[idx], rest, new)
        return Circ(c.kind, c.content, tuple(gs))
    raise ValueError(f"address step {step} does not match term {c}")


def circle_addresses(c):
    """Addresses of all circles in term preorder (a circle before its parts)."""
    out = []
    _collect_circles(c, (), out)
    return tuple(out)


def _collect_circles(c, addr, out):
    if isinstance(c, Leaf):
        return
    if isinstance(c, Node):
        for i, x in enumerate(c.children):
            _collect_circles(x, addr + (("child", i),), out)
        return
    out.append(addr)
    _collect_circles(c.content, addr + (CONTENT,), out)
    for i, g in enumerate(c.grafts):
        _collect_circles(g, addr + (("graft", i),), out)


def white_addresses(c):
    """Mapping from white label to circle address; labels must be unique."""
    out = {}
    for addr in circle_addresses(c):
        kind = resolve(c, addr).kind
        if isinstance(kind, White):
            if kind.label in out:
                raise ValueError(f"duplicate white label {kind.label}")
            out[kind.label] = addr
    return out


def inside_tree(c, addr):
    """The planar tree inside the circle at addr, inner circles contracted."""
    circ = resolve(c, addr)
    if not isinstance(circ, Circ):
        raise ValueError(f"no circle at address {addr}")
    return contracted(circ.content)


def white_profile(c):
    """((T_1, ..., T_k), T): the inside trees by white label and the output tree."""
    addrs = white_addresses(c)
    k = len(addrs)
    if set(addrs) != set(range(1, k + 1)):
        raise ValueError(f"white labels {sorted(addrs)} are not 1..{k}")
    return tuple(inside_tree(c, addrs[j]) for j in range(1, k + 1)), underlying(c)


# --- validity ----------------------------------------------------------------

@dataclass(frozen=True)
class ValidityReport:
    ok: bool
    whites: int
    violations: tuple


def validate_config(c) -> ValidityReport:
    """Check the circle constraints; violations carry (address, code, message)."""
    violations = []
    labels_seen = {}
    # (enclosing white exists, nearest enclosing circle is black)
    def walk(term, addr, in_white, black_parent):
        if isinstance(term, Leaf):
            return
        if isinstance(term, Node):
            for i, x in enumerate(term.children):
                walk(x, addr + (("child", i),), in_white, black_parent)
            return
        if isinstance(term.kind, White):
            if term.kind.label < 1:
                violations.append((addr, "white-label-nonpositive",
                                   f"white label {term.kind.label} is not positive"))
            elif term.kind.label in labels_seen:
                violations.append((addr, "duplicate-white-label",
                                   f"white label {term.kind.label} appears twice"))
            else:
                labels_seen[term.kind.label] = addr
            walk(term.content, addr + (CONTENT,), True, False)
        else:
            inner = contracted(term.content)
            if tree_vertices(inner) < 2:
                violations.append((addr, "black-around-small",
                                   f"black circle encloses {inner}, fewer than two vertices"))
            if black_parent:
                violations.append((addr, "black-in-black",
                                   "black circle directly inside a black circle"))
            if not in_white:
                violations.append((addr, "black-outside-white",
                                   "black circle not inside any white circle"))
            walk(term.content, addr + (CONTENT,), in_white, True)
        for i, g in enumerate(term.grafts):
            walk(g, addr + (("graft", i),), in_white, black_parent)

    walk(c, (), False, False)
    k = len(labels_seen)
    if labels_seen and set(labels_seen) != set(range(1, k + 1)):
        violations.append(((), "white-labels-not-contiguous",
                           f"white labels {sorted(labels_seen)} are not 1..{k}"))
    return ValidityReport(ok=not violations, whites=k, violations=tuple(violations))


# --- relative position of two circles ---------------------------------------

@dataclass(frozen=True)
class Outside:
    """One circle encloses the other; outer is the enclosing one."""

    outer: tuple


@dataclass(frozen=True)
class Below:
    """Disjoint, and the root path of one passes through the other (lower)."""

    lower: tuple


@dataclass(frozen=True)
class LeftOf:
    """Disjoint subtrees diverging at a planar branching; left comes first."""

    left: tuple


def relative_position(c, a, b):
    """Position of the circles at addresses a and b; symmetric in a and b."""
    if a == b:
        raise ValueError("relative_position needs two distinct circles")
    cur = c
    i = 0
    while True:
        if i == len(a) or i == len(b):
            outer, rest = (a, b) if i == len(a) else (b, a)
            what = rest[i][0]
            if what == "content":
                return Outside(outer=outer)
            if what == "graft":
                return Below(lower=outer)
            raise ValueError("address does not point at a circle")
        sa, sb = a[i], b[i]
        if sa == sb:
            cur = _descend(cur, sa)
            i += 1
            continue
        if isinstance(cur, Node):
            return LeftOf(left=a if sa[1] < sb[1] else b)
        if sa[0] == "graft" and sb[0] == "graft":
            return LeftOf(left=a if sa[1] < sb[1] else b)
        # One descends into the content, the other sits above a graft: decide
        # by running the content circle against the exit path of that graft.
        inner, exit_idx = (a, sb[1]) if sa[0] == "content" else (b, sa[1])
        verdict = _against_exit_path(cur.content, inner[i + 1:],
                                     _leaf_path(cur.content, exit_idx))
        if verdict == "through":
            return Below(lower=inner)
        if verdict == "left":
            return LeftOf(left=inner)
        return LeftOf(left=b if inner is a else a)


def _leaf_path(t, n):
    """Address of the n-th open leaf; such paths never enter a content."""
    if isinstance(t, Leaf):
        if n != 0:
            raise ValueError("leaf index out of range")
        return ()
    parts = t.children if isinstance(t, Node) else t.grafts
    what = "child" if isinstance(t, Node) else "graft"
    for i, part in enumerate(parts):
        m = open_leaves(part)
        if n < m:
            return ((what, i),) + _leaf_path(part, n)
        n -= m
    raise ValueError("leaf index out of range")


def _against_exit_path(t, caddr, laddr):
    """How a circle inside t sits against the downward path from an open leaf.

    Returns "through" when the path passes through the circle, otherwise on
    which side of the path the circle diverges.
    """
    cur = t
    i = 0
    while True:
        if i == len(caddr):
            return "through"
        sa, sl = caddr[i], laddr[i]
        if sa == sl:
            cur = _descend(cur, sa)
            i += 1
            continue
        if isinstance(cur, Node):
            return "left" if sa[1] < sl[1] else "right"
        if sa[0] == "graft" and sl[0] == "graft":
            return "left" if sa[1] < sl[1] else "right"
        # the circle enters an intermediate circle, the path crosses above it
        return _against_exit_path(cur.content, caddr[i + 1:],
                                  _leaf_path(cur.content, sl[1]))


# --- surgery -----------------------------------------------------------------

def circle_graft(t, replacements):
    """Replace the open leaves of t, left to right, with the given terms."""
    reps = list(replacements)
    if open_leaves(t) != len(reps):
        raise ValueError(
            f"graft arity mismatch: term has {open_leaves(t)} open leaves,"
            f" got {len(reps)} replacements"
        )
    it = iter(reps)
    return _circle_graft(t, it)


def _circle_graft(t, it):
    if isinstance(t, Leaf):
        return next(it)
    if isinstance(t, Node):
        return Node(tuple(_circle_graft(x, it) for x in t.children))
    return Circ(t.kind, t.content, tuple(_circle_graft(g, it) for g in t.grafts))


def splice(c, addr):
    """Remove the circle at addr, merging its content into the ambient tree."""
    circ = resolve(c, addr)
    if not isinstance(circ, Circ):
        raise ValueError(f"no circle at address {addr}")
    return replace_at(c, addr, circle_graft(circ.content, circ.grafts))


def relabel_whites(c, mapping):
    """Apply an injective relabelling to every white label in c."""
    present = set(white_addresses(c))
    if not present <= set(mapping):
        raise ValueError(f"mapping does not cover labels {sorted(present)}")
    images = [mapping[l] for l in present]
    if len(set(images)) != len(images):
        raise ValueError("relabelling is not injective")
    return _relabel(c, mapping)


def _relabel(c, mapping):
    if isinstance(c, Leaf):
        return c
    if isinstance(c, Node):
        return Node(tuple(_relabel(x, mapping) for x in c.children))
    kind = White(mapping[c.kind.label]) if isinstance(c.kind, White) else BLACK
    return Circ(kind, _relabel(c.content, mapping),
                tuple(_relabel(g, mapping) for g in c.grafts))


# --- enumeration ---------------------------------------------------------------

def circle_budget(t, k: int) -> int:
    """Upper bound on circles in a valid configuration on t with k whites."""
    return 2 * k + tree_vertices(t)


def enumerate_configs(t, k: int, profile=None):
    """All valid configurations on t with white labels 1..k, sorted by text.

    With profile given, keep only configurations whose inside trees by label
    equal the profile tuple exactly.
    """
    if k < 0:
        raise ValueError("white circle count must be nonnegative")
    budget = circle_budget(t, k)
    out = []
    for term, _, whites in _gen(t, budget, False, False, k):
        if whites != k:
            continue
        for labelled in _all_labellings(term, k):
            report = validate_config(labelled)
            if not report.ok:
                continue
            if profile is not None:
                if white_profile(labelled)[0] != tuple(profile):
                    continue
            out.append(labelled)
    out.sort(key=str)
    for x, y in zip(out, out[1:]):
        if x == y:
            raise RuntimeError("enumeration produced a duplicate configuration")
    return tuple(out)


def enumerate_unary(source, target):
    """All one-white configurations on target whose inside tree is source."""
    return enumerate_configs(target, 1, profile=(source,))


@lru_cache(maxsize=None)
def _decompositions(t):
    """All (shape, tops) with graft(shape, tops) == t; shape is the bottom part."""
    out = [(LEAF, (t,))]
    if isinstance(t, Node):
        for combo in product(*[_decompositions(x) for x in t.children]):
            shape = Node(tuple(s for s, _ in combo))
            tops = tuple(chain.from_iterable(ts for _, ts in combo))
            out.append((shape, tops))
    return tuple(out)


@lru_cache(maxsize=None)
def _gen(t, budget: int, in_white: bool, black_parent: bool, white_cap: int):
    """Terms over t with at most budget circles, pruned by the black rules.

    Returns tuples (term, circles, whites); white circles carry the
    placeholder label 0.
    """
    results = []
    if isinstance(t, Leaf):
        results.append((LEAF, 0, 0))
    else:
        for kids, used, whites in _gen_forest(t.children, budget, in_white,
                                              black_parent, white_cap):
            results.append((Node(kids), used, whites))
    if budget >= 1:
        for shape, tops in _decompositions(t):
            for is_white in (True, False):
                if is_white and white_cap == 0:
                    continue
                if not is_white and (not in_white or black_parent):
                    continue
                kind = White(0) if is_white else BLACK
                cap_inside = white_cap - 1 if is_white else white_cap
                for cont, c1, w1 in _gen(shape, budget - 1,
                                         in_white or is_white,
                                         not is_white, cap_inside):
                    if not is_white and tree_vertices(contracted(cont)) < 2:
                        continue
                    used = 1 + c1
                    whites = w1 + (1 if is_white else 0)
                    for gs, c2, w2 in _gen_forest(tops, budget - used, in_white,
                                                  black_parent,
                                                  white_cap - whites):
                        results.append((Circ(kind, cont, gs),
                                        used + c2, whites + w2))
    return tuple(results)


@lru_cache(maxsize=None)
def _gen_forest(ts, budget: int, in_white: bool, black_parent: bool,
                white_cap: int):
    if not ts:
        return (((), 0, 0),)
    out = []
    for first, c1, w1 in _gen(ts[0], budget, in_white, black_parent, white_cap):
        for rest, c2, w2 in _gen_forest(ts[1:], budget - c1, in_white,
                                        black_parent, white_cap - w1):
            out.append(((first,) + rest, c1 + c2, w1 + w2))
    return tuple(out)


def _all_labellings(term, k: int):
    for perm in permutations(range(1, k + 1)):
        it = iter(perm)
        yield _label_placeholders(term, it)


# --- random sampling -----------------------------------------------------------

def random_config(rng, t, k: int, black_tries: int = 2):
    """A pseudo-random valid configuration on t with k whites, seeded by rng."""
    term = t
    for label in range(1, k + 1):
        term = _random_insert(rng, term, White(label))
    for _ in range(black_tries):
        cand = _random_insert(rng, term, BLACK)
        if validate_config(cand).ok:
            term = cand
    if k > 1:
        images = list(range(1, k + 1))
        rng.shuffle(images)
        term = relabel_whites(term, dict(zip(range(1, k + 1), images)))
    return term


def _random_insert(rng, term, kind):
    addrs = list(_subterm_addresses(term))
    addr = addrs[rng.randrange(len(addrs))]
    cuts = _region_cuts(resolve(term, addr))
    bottom, tops = cuts[rng.randrange(len(cuts))]
    return replace_at(term, addr, Circ(kind, bottom, tops))


def _subterm_addresses(c):
    yield ()
    if isinstance(c, Node):
        for i, x in enumerate(c.children):
            for rest in _subterm_addresses(x):
                yield (("child", i),) + rest
    elif isinstance(c, Circ):
        for rest in _subterm_addresses(c.content):
            yield (CONTENT,) + rest
        for i, g in enumerate(c.grafts):
            for rest in _subterm_addresses(g):
                yield (("graft", i),) + rest


def _region_cuts(u):
    """All (bottom, tops) with circle_graft(bottom, tops) == u.

    A region containing a circle contains the whole circle, so the recursion
    descends into grafts but never into a content.
    """
    out = [(LEAF, (u,))]
    if isinstance(u, Node):
        for combo in product(*[_region_cuts(x) for x in u.children]):
            out.append((Node(tuple(b for b, _ in combo)),
                        tuple(chain.from_iterable(ts for _, ts in combo))))
    elif isinstance(u, Circ):
        for combo in product(*[_region_cuts(g) for g in u.grafts]):
            out.append((Circ(u.kind, u.content, tuple(b for b, _ in combo)),
                        tuple(chain.from_iterable(ts for _, ts in combo))))
    return out


def _label_placeholders(c, it):
    if isinstance(c, Leaf):
        return c
    if isinstance(c, Node):
        return Node(tuple(_label_placeholders(x, it) for x in c.children))
    kind = White(next(it)) if isinstance(c.kind, White) else BLACK
    content = _label_placeholders(c.content, it)
    return Circ(kind, content, tuple(_label_placeholders(g, it) for g in c.grafts))
