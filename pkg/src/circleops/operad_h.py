"""The coloured operad of circled-tree operations.

An operation from trees T_1, ..., T_k to a tree T is a valid configuration
of k white circles (plus black helper circles) on T whose j-th white circle
has T_j inside it.  Composition substitutes an operation on T_j into the
j-th white circle: the substituted term is superimposed onto the circle's
content, the circle turns black, and the result is reduced by splicing away
black circles that enclose fewer than two vertices, sit directly inside
another black circle, or sit outside every white circle.

The complexity of an operation records, for every pair of white circles,
how they sit relative to each other (side by side, stacked, or nested) and
which of the two dominates, as an edge-labelled complete graph.  Composition
never increases complexity beyond the composite of the complexities.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import chain

from .circled import (
    BLACK,
    Below,
    Circ,
    LeftOf,
    White,
    enumerate_configs,
    relabel_whites,
    relative_position,
    replace_at,
    resolve,
    splice,
    underlying,
    validate_config,
    white_addresses,
    white_profile,
)
from .kgraph import KElt, k_compose, k_iota, k_leq, vertex_pairs
from .trees import LEAF, Leaf, Node
from .trees import leaves as tree_leaves


@dataclass(frozen=True)
class HOperation:
    """A valid circled-tree configuration regarded as an operadic operation."""

    term: object

    def __post_init__(self):
        report = validate_config(self.term)
        if not report.ok:
            addr, code, msg = report.violations[0]
            raise ValueError(f"invalid operation term ({code} at {addr}): {msg}")
        # A circle-free term is not an operation: substituting it would
        # dissolve the target white circle together with a vertex that other
        # white circles may rely on, so profiles could not be preserved.
        if report.whites == 0:
            raise ValueError("an operation needs at least one white circle")

    @cached_property
    def profile(self):
        return white_profile(self.term)

    @property
    def sources(self):
        return self.profile[0]

    @property
    def target(self):
        return self.profile[1]

    @property
    def k(self) -> int:
        return len(self.sources)

    def __str__(self) -> str:
        return str(self.term)


def identity_op(t) -> HOperation:
    """The identity on t: one white circle drawn around all of t."""
    return HOperation(Circ(White(1), t, (LEAF,) * tree_leaves(t)))


def operations(t, k: int, profile=None):
    """All operations with k white circles on t, optionally source-filtered."""
    return tuple(HOperation(c) for c in enumerate_configs(t, k, profile=profile))


def unary_operations(source, target):
    """All operations in the single-source homset from source to target."""
    return operations(target, 1, profile=(source,))


# --- composition ------------------------------------------------------------------

def split_term(t, shape):
    """Cut t into a bottom part shaped like shape and the tops above it.

    shape must be a bottom part of the contraction of t; circles are never
    cut, they land whole in the bottom or in a top.  Satisfies
    circle_graft(bottom, tops) == t and contracted(bottom) == shape.
    """
    if isinstance(shape, Leaf):
        return LEAF, (t,)
    parts = None
    if isinstance(t, Node):
        parts = t.children
    elif isinstance(t, Circ):
        parts = t.grafts
    if parts is None or len(parts) != len(shape.children):
        raise ValueError(f"shape {shape} does not fit below {t}")
    pieces = [split_term(p, s) for p, s in zip(parts, shape.children)]
    bottoms = tuple(b for b, _ in pieces)
    tops = tuple(chain.from_iterable(ts for _, ts in pieces))
    if isinstance(t, Node):
        return Node(bottoms), tops
    return Circ(t.kind, t.content, bottoms), tops


def superimpose(beta, t):
    """Transfer the circles of beta onto the finer term t.

    beta's underlying tree must equal the contraction of t, so each vertex
    of beta's tree names either a vertex or a whole circle of t; the circles
    of beta come out drawn around the matching regions of t.
    """
    if isinstance(beta, Leaf):
        if not isinstance(t, Leaf):
            raise ValueError(f"cannot superimpose a bare edge onto {t}")
        return t
    if isinstance(beta, Node):
        if isinstance(t, Node) and len(t.children) == len(beta.children):
            return Node(tuple(superimpose(b, x)
                              for b, x in zip(beta.children, t.children)))
        if isinstance(t, Circ) and len(t.grafts) == len(beta.children):
            return Circ(t.kind, t.content,
                        tuple(superimpose(b, g)
                              for b, g in zip(beta.children, t.grafts)))
        raise ValueError(f"cannot superimpose {beta} onto {t}")
    bottom, tops = split_term(t, underlying(beta.content))
    return Circ(beta.kind, superimpose(beta.content, bottom),
                tuple(superimpose(g, top) for g, top in zip(beta.grafts, tops)))


def reduction_violations(term, r3: bool = True):
    """Black circles that must be spliced away, in term preorder.

    Returns (address, code) pairs; code is one of black-around-small,
    black-in-black and black-outside-white.  The last rule is optional so
    its effect on the unit laws can be observed.
    """
    keep = {"black-around-small", "black-in-black"}
    if r3:
        keep.add("black-outside-white")
    return tuple((addr, code)
                 for addr, code, _ in validate_config(term).violations
                 if code in keep)


def reduce_term(term, r3: bool = True):
    """Splice away removable black circles until none is left."""
    while True:
        viols = reduction_violations(term, r3=r3)
        if not viols:
            return term
        term = splice(term, viols[0][0])


def substitute_whites(term, arg_terms):
    """Blacken each white circle of term around the matching argument.

    The j-th argument term, its white labels shifted past those of the
    earlier arguments, is superimposed onto the content of white circle j.
    The result is unreduced; deeper circles are processed first so recorded
    addresses stay valid.
    """
    insides, _ = white_profile(term)
    arg_terms = tuple(arg_terms)
    if len(arg_terms) != len(insides):
        raise ValueError(
            f"operation with {len(insides)} white circles composed"
            f" with {len(arg_terms)} arguments"
        )
    shifted = []
    offset = 0
    for j, arg in enumerate(arg_terms, start=1):
        if underlying(arg) != insides[j - 1]:
            raise ValueError(
                f"argument {j} lives on {underlying(arg)},"
                f" expected {insides[j - 1]}"
            )
        labels = white_addresses(arg)
        if not labels:
            raise ValueError(f"argument {j} has no white circles")
        shifted.append(relabel_whites(
            arg, {i: offset + i for i in labels}))
        offset += len(labels)
    addrs = white_addresses(term)
    cur = term
    for label in sorted(addrs, key=lambda l: (-len(addrs[l]), addrs[l])):
        circ = resolve(cur, addrs[label])
        merged = superimpose(shifted[label - 1], circ.content)
        cur = replace_at(cur, addrs[label], Circ(BLACK, merged, circ.grafts))
    return cur


def compose_terms(term, arg_terms, r3: bool = True):
    return reduce_term(substitute_whites(term, arg_terms), r3=r3)


def compose(o: HOperation, args, r3: bool = True) -> HOperation:
    """Operadic composition; sources concatenate and the target is kept."""
    args = tuple(args)
    result = HOperation(compose_terms(o.term, tuple(a.term for a in args), r3=r3))
    expected = tuple(chain.from_iterable(a.sources for a in args))
    if result.sources != expected or result.target != o.target:
        raise RuntimeError("composition changed the operation profile")
    return result


def sigma_act(sigma, o: HOperation) -> HOperation:
    """Rename white circle i to sigma(i)."""
    sigma = tuple(sigma)
    return HOperation(relabel_whites(
        o.term, {i: sigma[i - 1] for i in range(1, o.k + 1)}))


# --- complexity --------------------------------------------------------------------

def complexity(o: HOperation) -> KElt:
    """The labelled complete graph of pairwise white-circle positions.

    Side-by-side pairs get label 0, stacked pairs 1, nested pairs 2; the
    dominant circle of a pair is the left, lower or outer one.  Dominance
    is always transitive on a valid configuration and orders the vertices.
    """
    addrs = white_addresses(o.term)
    names = {addr: label for label, addr in addrs.items()}
    k = o.k
    labels = []
    wins = dict.fromkeys(range(1, k + 1), 0)
    for i, j in vertex_pairs(k):
        rel = relative_position(o.term, addrs[i], addrs[j])
        if isinstance(rel, LeftOf):
            labels.append(0)
            dominant = names[rel.left]
        elif isinstance(rel, Below):
            labels.append(1)
            dominant = names[rel.lower]
        else:
            labels.append(2)
            dominant = names[rel.outer]
        wins[dominant] += 1
    if sorted(wins.values()) != list(range(k)):
        raise ValueError("dominance between white circles is not transitive")
    perm = tuple(k - wins[i] for i in range(1, k + 1))
    return KElt(k, tuple(labels), perm)


# --- the filtered extension ----------------------------------------------------------

@dataclass(frozen=True)
class HatOperation:
    """An operation tagged with a stage-two graph bounding its complexity."""

    op: HOperation
    kappa: KElt

    def __post_init__(self):
        if self.kappa.k != self.op.k:
            raise ValueError(
                f"tag arity {self.kappa.k} does not match operation arity {self.op.k}"
            )
        if any(l > 1 for l in self.kappa.labels):
            raise ValueError("stage-two edge labels must be 0 or 1")
        if not k_leq(complexity(self.op), k_iota(self.kappa)):
            raise ValueError("operation complexity exceeds the shifted tag")


def hat_identity(t) -> HatOperation:
    return HatOperation(identity_op(t), KElt(1, (), (1,)))


def hat_compose(h: HatOperation, inners) -> HatOperation:
    inners = tuple(inners)
    return HatOperation(
        compose(h.op, tuple(x.op for x in inners)),
        k_compose(h.kappa, tuple(x.kappa for x in inners)),
    )
