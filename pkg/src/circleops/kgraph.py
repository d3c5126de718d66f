"""The operad of edge-labelled complete graphs with a vertex order.

An arity-k element is a complete graph on the vertices 1..k carrying a
nonnegative integer label on every edge together with a linear order of the
vertices.  Elements of the m-th filtration stage use labels below m.  The
partial order compares elements edgewise: an edge may either grow strictly
or keep both its label and its orientation, where the orientation of an edge
is which endpoint comes first in the vertex order.

Composition substitutes a graph into each vertex of an outer graph: edges
within a block keep the inner labels, edges across two blocks all inherit
the outer label of the corresponding outer edge, and the vertex order sorts
blocks by the outer order and members by the inner ones.  The shift map
raises every edge label by one and embeds each filtration stage in the next.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations, product
from math import comb


@dataclass(frozen=True)
class KElt:
    """A labelled complete graph on 1..k with a linear vertex order.

    labels runs over the vertex pairs (1,2), (1,3), ..., (k-1,k) in
    lexicographic order.  perm[i-1] is the position of vertex i in the
    vertex order, so i comes before j exactly when perm[i-1] < perm[j-1].
    """

    k: int
    labels: tuple
    perm: tuple

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("arity must be nonnegative")
        if len(self.labels) != comb(self.k, 2):
            raise ValueError(
                f"expected {comb(self.k, 2)} edge labels for arity {self.k},"
                f" got {len(self.labels)}"
            )
        if any(not isinstance(l, int) or l < 0 for l in self.labels):
            raise ValueError("edge labels must be nonnegative integers")
        if sorted(self.perm) != list(range(1, self.k + 1)):
            raise ValueError(f"perm {self.perm} is not a permutation of 1..{self.k}")

    def mu(self, i: int, j: int) -> int:
        """Label of the edge between distinct vertices i and j."""
        return self.labels[pair_index(self.k, i, j)]

    def before(self, i: int, j: int) -> bool:
        """Whether vertex i comes before vertex j in the vertex order."""
        return self.perm[i - 1] < self.perm[j - 1]

    def __str__(self) -> str:
        return kelt_text(self)


def pair_index(k: int, i: int, j: int) -> int:
    """Index of the unordered pair {i, j} in lexicographic pair order."""
    if i == j or not (1 <= i <= k and 1 <= j <= k):
        raise ValueError(f"bad vertex pair ({i}, {j}) for arity {k}")
    if i > j:
        i, j = j, i
    return (i - 1) * (2 * k - i) // 2 + (j - i - 1)


def vertex_pairs(k: int):
    """The pairs (i, j) with i < j in the order the labels are stored."""
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            yield i, j


K_UNIT = KElt(1, (), (1,))


# --- partial order ------------------------------------------------------------

def k_leq(x: KElt, y: KElt) -> bool:
    """Edgewise order: each edge grows strictly or keeps label and orientation."""
    if x.k != y.k:
        raise ValueError(f"cannot compare arity {x.k} with arity {y.k}")
    for i, j in vertex_pairs(x.k):
        a, b = x.mu(i, j), y.mu(i, j)
        if a > b:
            return False
        if a == b and x.before(i, j) != y.before(i, j):
            return False
    return True


def k_iota(x: KElt) -> KElt:
    """Shift every edge label up by one filtration stage."""
    return KElt(x.k, tuple(l + 1 for l in x.labels), x.perm)


# --- operad structure -----------------------------------------------------------

def k_compose(outer: KElt, inners) -> KElt:
    """Substitute the inner graphs into the vertices of the outer graph."""
    inners = tuple(inners)
    if len(inners) != outer.k:
        raise ValueError(
            f"outer arity {outer.k} needs {outer.k} inner elements,"
            f" got {len(inners)}"
        )
    sizes = [x.k for x in inners]
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    n = offsets[-1]

    def owner(u: int):
        a = 1
        while u > offsets[a]:
            a += 1
        return a, u - offsets[a - 1]

    labels = []
    for u, v in vertex_pairs(n):
        (a, p), (b, q) = owner(u), owner(v)
        labels.append(inners[a - 1].mu(p, q) if a == b else outer.mu(a, b))

    perm = [0] * n
    for a in range(1, outer.k + 1):
        shift = sum(sizes[c - 1] for c in range(1, outer.k + 1)
                    if outer.perm[c - 1] < outer.perm[a - 1])
        for p in range(1, sizes[a - 1] + 1):
            perm[offsets[a - 1] + p - 1] = shift + inners[a - 1].perm[p - 1]
    return KElt(n, tuple(labels), tuple(perm))


def kelt_relabel(x: KElt, sigma) -> KElt:
    """Rename vertex i to sigma(i), transporting labels and the order."""
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(1, x.k + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{x.k}")
    inv = perm_inverse(sigma)
    labels = tuple(x.mu(inv[i - 1], inv[j - 1]) for i, j in vertex_pairs(x.k))
    perm = tuple(x.perm[inv[i - 1] - 1] for i in range(1, x.k + 1))
    return KElt(x.k, labels, perm)


def block_perm(sigma, sizes) -> tuple:
    """The permutation moving consecutive blocks of the given sizes by sigma.

    Block i (size sizes[i-1]) keeps its internal order and lands where sigma
    sends it: the element at offset(i) + p maps to the p-th slot of the
    destination block.
    """
    sigma = tuple(sigma)
    sizes = tuple(sizes)
    if sorted(sigma) != list(range(1, len(sizes) + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{len(sizes)}")
    out = []
    for i in range(1, len(sizes) + 1):
        shift = sum(sizes[c - 1] for c in range(1, len(sizes) + 1)
                    if sigma[c - 1] < sigma[i - 1])
        out.extend(shift + p for p in range(1, sizes[i - 1] + 1))
    return tuple(out)


def kelt_delete_vertex(x: KElt, i: int) -> KElt:
    """The complete graph left after removing vertex i.

    Surviving vertices are renumbered 1..k-1 preserving their numeric order;
    labels restrict to the surviving pairs and the vertex order keeps the
    survivors' relative positions.
    """
    if not (1 <= i <= x.k):
        raise ValueError(f"no vertex {i} in an arity {x.k} element")
    if x.k == 1:
        raise ValueError("cannot delete the only vertex")
    keep = [v for v in range(1, x.k + 1) if v != i]
    labels = tuple(x.mu(keep[a - 1], keep[b - 1]) for a, b in vertex_pairs(x.k - 1))
    perm = tuple(
        1 + sum(1 for w in keep if x.perm[w - 1] < x.perm[v - 1]) for v in keep
    )
    return KElt(x.k - 1, labels, perm)


# --- permutations ----------------------------------------------------------------

def perm_id(k: int) -> tuple:
    return tuple(range(1, k + 1))


def perm_compose(a, b) -> tuple:
    """(a after b): send i to a(b(i))."""
    return tuple(a[b[i - 1] - 1] for i in range(1, len(a) + 1))


def perm_inverse(a) -> tuple:
    out = [0] * len(a)
    for i, v in enumerate(a, start=1):
        out[v - 1] = i
    return tuple(out)


# --- enumeration -----------------------------------------------------------------

def k_enumerate(m: int, k: int, inclusive: bool = False):
    """All arity-k elements of the m-th filtration stage, in a fixed order.

    Labels run below m; with inclusive=True they run up to and including m.
    """
    if m < 1:
        raise ValueError("filtration stage must be positive")
    top = m + 1 if inclusive else m
    out = []
    for labels in product(range(top), repeat=comb(k, 2)):
        for perm in permutations(range(1, k + 1)):
            out.append(KElt(k, labels, perm))
    return tuple(out)


# --- codec -----------------------------------------------------------------------

def kelt_text(x: KElt) -> str:
    mus = " ".join(f"mu({i},{j})={x.mu(i, j)}" for i, j in vertex_pairs(x.k))
    order = " ".join(str(p) for p in x.perm)
    return f"{x.k}; {mus}; perm=[{order}]"


_MU_TOKEN = re.compile(r"mu\((\d+),(\d+)\)=(\d+)$")


def parse_kelt(text: str) -> KElt:
    parts = text.split(";")
    if len(parts) != 3:
        raise ValueError(f"expected 'k; mu...; perm=[...]', got {text!r}")
    k = int(parts[0].strip())
    seen = {}
    for token in parts[1].split():
        m = _MU_TOKEN.match(token)
        if not m:
            raise ValueError(f"bad edge label token {token!r}")
        i, j, v = int(m.group(1)), int(m.group(2)), int(m.group(3))
        idx = pair_index(k, i, j)
        if idx in seen:
            raise ValueError(f"edge ({i},{j}) labelled twice")
        seen[idx] = v
    if len(seen) != comb(k, 2):
        raise ValueError(f"expected {comb(k, 2)} edge labels, got {len(seen)}")
    ptext = parts[2].strip()
    if not (ptext.startswith("perm=[") and ptext.endswith("]")):
        raise ValueError(f"bad vertex order {ptext!r}")
    body = ptext[len("perm=["):-1].split()
    perm = tuple(int(w) for w in body)
    labels = tuple(seen[i] for i in range(comb(k, 2)))
    return KElt(k, labels, perm)
