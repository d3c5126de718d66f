"""Tests for the circled-tree operad: composition, reduction, complexity."""

import itertools
import random

import pytest

from circleops.circled import (
    BLACK,
    Circ,
    White,
    circle_addresses,
    circle_graft,
    contracted,
    open_leaves,
    parse_config,
    random_config,
    splice,
    underlying,
)
from circleops.kgraph import (
    KElt,
    block_perm,
    k_compose,
    k_enumerate,
    k_iota,
    k_leq,
    kelt_relabel,
    perm_inverse,
)
from circleops.operad_h import (
    HatOperation,
    HOperation,
    complexity,
    compose,
    compose_terms,
    hat_compose,
    hat_identity,
    identity_op,
    operations,
    reduce_term,
    reduction_violations,
    sigma_act,
    split_term,
    substitute_whites,
    superimpose,
    unary_operations,
)
from circleops.trees import LEAF, Node, corolla, node, parse_tree

TREES = [
    LEAF,
    parse_tree("(|)"),
    parse_tree("(| |)"),
    parse_tree("((|))"),
    parse_tree("((|) |)"),
    parse_tree("((|) (|))"),
]


def random_op(rng, t, k):
    return HOperation(random_config(rng, t, k))


def random_args(rng, o, ks=(1, 1, 2, 2)):
    return tuple(
        random_op(rng, s, ks[rng.randrange(len(ks))]) for s in o.sources
    )


def tiny_ops():
    out = []
    for t, k in [(LEAF, 1), (LEAF, 2), (parse_tree("(|)"), 1), (parse_tree("(|)"), 2)]:
        out.extend(operations(t, k))
    return out


# --- operations and identities -----------------------------------------------------

def test_operation_profile():
    o = HOperation(parse_config("{w2 {w1 | / |} / |}"))
    assert o.k == 2
    assert o.sources == (LEAF, node(LEAF))
    assert o.target == LEAF
    with pytest.raises(ValueError):
        HOperation(parse_config("{w2 | / |}"))
    with pytest.raises(ValueError):
        HOperation(LEAF)  # no nullary operations
    with pytest.raises(ValueError):
        substitute_whites(o.term, (LEAF, parse_config("{w1 (|) / |}")))


def test_identity_op():
    t = parse_tree("((|) |)")
    e = identity_op(t)
    assert e.term == Circ(White(1), t, (LEAF, LEAF))
    assert e.sources == (t,) and e.target == t
    assert complexity(e) == KElt(1, (), (1,))


def test_unary_operations_are_profiled():
    t = parse_tree("(|)")
    for o in unary_operations(LEAF, t):
        assert o.sources == (LEAF,) and o.target == t
    assert len(unary_operations(t, t)) == 1


# --- split and superimpose -----------------------------------------------------------

def test_split_term_examples():
    t = Node((Circ(White(1), LEAF, (LEAF,)), LEAF))
    bottom, tops = split_term(t, corolla(2))
    assert bottom == corolla(2)
    assert tops == (Circ(White(1), LEAF, (LEAF,)), LEAF)
    assert split_term(t, LEAF) == (LEAF, (t,))
    with pytest.raises(ValueError):
        split_term(t, parse_tree("((|) (|))"))


def test_split_term_round_trip():
    def bottoms(shape):
        out = [LEAF]
        if isinstance(shape, Node):
            for combo in itertools.product(*[bottoms(x) for x in shape.children]):
                out.append(Node(tuple(combo)))
        return out

    for i in range(40):
        rng = random.Random(i)
        t = TREES[i % len(TREES)]
        c = random_config(rng, t, 1 + i % 3)
        chi = contracted(c)
        for shape in bottoms(chi):
            bottom, tops = split_term(c, shape)
            assert contracted(bottom) == shape
            assert circle_graft(bottom, tops) == c
        assert split_term(c, chi) == (c, (LEAF,) * len(split_term(c, chi)[1]))


def test_superimpose_examples():
    t = parse_config("{b ((|)) / |}")
    beta = parse_config("{w1 (|) / |}")
    assert superimpose(beta, t) == Circ(White(1), t, (LEAF,))
    # underlying shapes must agree
    with pytest.raises(ValueError):
        superimpose(parse_config("{w1 (| |) / | |}"), t)


def test_superimpose_on_own_tree_is_identity():
    for i in range(40):
        c = random_config(random.Random(i), TREES[i % len(TREES)], 1 + i % 3)
        assert superimpose(c, underlying(c)) == c


# --- composition ----------------------------------------------------------------

def test_compose_worked_example():
    o = HOperation(parse_config("{w2 {w1 | / |} / |}"))
    p = HOperation(parse_config("{w1 | / (|)}"))
    got = compose(o, (identity_op(LEAF), p))
    assert str(got.term) == "{w2 | / {w1 | / |}}"
    assert got.sources == (LEAF, LEAF) and got.target == LEAF


def test_compose_rejects_profile_mismatch():
    o = HOperation(parse_config("{w1 | / |}"))
    with pytest.raises(ValueError):
        compose(o, (identity_op(parse_tree("(|)")),))
    with pytest.raises(ValueError):
        compose(o, ())


def test_compose_concatenates_sources():
    rng = random.Random(5)
    for _ in range(30):
        t = TREES[rng.randrange(len(TREES))]
        o = random_op(rng, t, 1 + rng.randrange(3))
        args = random_args(rng, o)
        got = compose(o, args)
        assert got.sources == tuple(
            s for a in args for s in a.sources
        )
        assert got.target == o.target


def test_unit_laws_exhaustive():
    for o in tiny_ops():
        assert compose(o, tuple(identity_op(s) for s in o.sources)) == o
        assert compose(identity_op(o.target), (o,)) == o


def test_unit_laws_randomized():
    for i in range(200):
        rng = random.Random(1000 + i)
        o = random_op(rng, TREES[i % len(TREES)], 1 + i % 3)
        assert compose(o, tuple(identity_op(s) for s in o.sources)) == o
        assert compose(identity_op(o.target), (o,)) == o


def test_associativity_exhaustive_tiny():
    pool = {}

    def ops_for(s):
        if s not in pool:
            pool[s] = operations(s, 1) + operations(s, 2)
        return pool[s]

    counter = 0
    for o in operations(LEAF, 2):
        for p1 in ops_for(o.sources[0]):
            for p2 in ops_for(o.sources[1]):
                qs = []
                for p in (p1, p2):
                    chosen = []
                    for s in p.sources:
                        options = ops_for(s)
                        chosen.append(options[counter % len(options)])
                        counter += 1
                    qs.append(tuple(chosen))
                flat = tuple(q for group in qs for q in group)
                lhs = compose(compose(o, (p1, p2)), flat)
                rhs = compose(o, tuple(
                    compose(p, group) for p, group in zip((p1, p2), qs)
                ))
                assert lhs == rhs


def test_associativity_randomized():
    for i in range(200):
        rng = random.Random(2000 + i)
        o = random_op(rng, TREES[i % len(TREES)], 1 + i % 3)
        ps = random_args(rng, o, ks=(1, 1, 2, 2))
        qss = tuple(random_args(rng, p) for p in ps)
        flat = tuple(q for qs in qss for q in qs)
        lhs = compose(compose(o, ps), flat)
        rhs = compose(o, tuple(compose(p, qs) for p, qs in zip(ps, qss)))
        assert lhs == rhs


def test_equivariance_randomized():
    for i in range(200):
        rng = random.Random(3000 + i)
        o = random_op(rng, TREES[i % len(TREES)], 1 + i % 3)
        sigma = list(range(1, o.k + 1))
        rng.shuffle(sigma)
        sigma = tuple(sigma)
        inv = perm_inverse(sigma)
        gathered = tuple(random_op(rng, s, 1 + rng.randrange(2))
                         for s in o.sources)
        bs = tuple(gathered[inv[v - 1] - 1] for v in range(1, o.k + 1))
        lhs = compose(sigma_act(sigma, o), bs)
        rho = block_perm(sigma, tuple(b.k for b in gathered))
        assert lhs == sigma_act(rho, compose(o, gathered))


def test_sigma_act_is_an_action():
    for i in range(50):
        rng = random.Random(4000 + i)
        o = random_op(rng, TREES[i % len(TREES)], 2 + i % 2)
        sigma = list(range(1, o.k + 1))
        tau = list(range(1, o.k + 1))
        rng.shuffle(sigma)
        rng.shuffle(tau)
        combined = tuple(tau[sigma[i0] - 1] for i0 in range(o.k))
        assert sigma_act(tau, sigma_act(sigma, o)) == sigma_act(combined, o)


# --- reduction --------------------------------------------------------------------

def normal_forms(term, r3=True):
    viols = reduction_violations(term, r3=r3)
    if not viols:
        return {term}
    out = set()
    for addr, _ in viols:
        out |= normal_forms(splice(term, addr), r3=r3)
    return out


def test_reduction_is_confluent():
    checked = 0
    for i in range(120):
        rng = random.Random(5000 + i)
        o = random_op(rng, TREES[i % len(TREES)], 1 + i % 2)
        args = random_args(rng, o)
        raw = substitute_whites(o.term, tuple(a.term for a in args))
        if len(circle_addresses(raw)) > 7:
            continue
        for r3 in (True, False):
            forms = normal_forms(raw, r3=r3)
            assert forms == {reduce_term(raw, r3=r3)}
        checked += 1
    assert checked > 60


def test_left_unit_needs_uncovered_black_rule():
    stacked = parse_config("{w1 | / {w2 | / |}}")
    wide = parse_config("({w1 | / |} {w2 | / |})")
    for term in (stacked, wide):
        t = underlying(term)
        ident = identity_op(t).term
        assert compose_terms(ident, (term,), r3=True) == term
        leftover = compose_terms(ident, (term,), r3=False)
        assert leftover != term
        assert leftover == Circ(BLACK, term, (LEAF,) * open_leaves(term))
    # a single enclosing circle reduces already by the small-content rule
    conc = parse_config("{w2 {w1 | / |} / |}")
    assert compose_terms(identity_op(LEAF).term, (conc,), r3=False) == conc


# --- complexity --------------------------------------------------------------------

def test_complexity_of_basic_pairs():
    cases = {
        "({w1 | / |} {w2 | / |})": KElt(2, (0,), (1, 2)),
        "({w2 | / |} {w1 | / |})": KElt(2, (0,), (2, 1)),
        "{w1 | / {w2 | / |}}": KElt(2, (1,), (1, 2)),
        "{w2 | / {w1 | / |}}": KElt(2, (1,), (2, 1)),
        "{w1 {w2 | / |} / |}": KElt(2, (2,), (1, 2)),
        "{w2 {w1 | / |} / |}": KElt(2, (2,), (2, 1)),
    }
    for text, want in cases.items():
        assert complexity(HOperation(parse_config(text))) == want


def test_complexity_of_five_circle_demo():
    small = Circ(White(3), corolla(3), (node(LEAF, LEAF), LEAF, LEAF))
    mid = Circ(White(2), small, (LEAF, LEAF, LEAF, LEAF))
    inner_left = Circ(White(5), node(LEAF, node(LEAF, LEAF)),
                      (node(LEAF), LEAF, LEAF))
    big_left = Circ(White(4), inner_left, (LEAF, LEAF, LEAF))
    demo = Circ(White(1), Node((LEAF, mid)),
                (big_left, LEAF, LEAF, LEAF, LEAF))
    got = complexity(HOperation(demo))
    assert got == KElt(5, (2, 2, 1, 1, 2, 0, 0, 0, 0, 2), (1, 4, 5, 2, 3))


def test_complexity_lands_in_stage_three():
    for o in tiny_ops():
        c = complexity(o)
        assert all(l <= 2 for l in c.labels)


def test_complexity_is_equivariant():
    for i in range(100):
        rng = random.Random(6000 + i)
        o = random_op(rng, TREES[i % len(TREES)], 1 + i % 3)
        sigma = list(range(1, o.k + 1))
        rng.shuffle(sigma)
        sigma = tuple(sigma)
        assert complexity(sigma_act(sigma, o)) == kelt_relabel(
            complexity(o), sigma)


def test_composition_never_exceeds_composite_complexity():
    for i in range(100):
        rng = random.Random(7000 + i)
        o = random_op(rng, TREES[i % len(TREES)], 1 + i % 3)
        args = random_args(rng, o)
        bound = k_compose(complexity(o), tuple(complexity(a) for a in args))
        assert k_leq(complexity(compose(o, args)), bound)


# --- the tagged extension ------------------------------------------------------------

def test_hat_operation_checks_the_bound():
    stacked = HOperation(parse_config("{w1 | / {w2 | / |}}"))
    assert HatOperation(stacked, KElt(2, (0,), (1, 2)))
    with pytest.raises(ValueError):
        HatOperation(stacked, KElt(2, (0,), (2, 1)))
    conc = HOperation(parse_config("{w2 {w1 | / |} / |}"))
    assert HatOperation(conc, KElt(2, (1,), (2, 1)))
    with pytest.raises(ValueError):
        HatOperation(conc, KElt(2, (1,), (1, 2)))
    with pytest.raises(ValueError):
        HatOperation(conc, KElt(2, (2,), (2, 1)))
    with pytest.raises(ValueError):
        HatOperation(conc, KElt(1, (), (1,)))


def test_hat_tags_per_operation():
    for o in tiny_ops():
        tags = [kappa for kappa in k_enumerate(2, o.k)
                if k_leq(complexity(o), k_iota(kappa))]
        assert tags, str(o)
        for kappa in tags:
            HatOperation(o, kappa)


def test_hat_compose():
    conc = HOperation(parse_config("{w2 {w1 | / |} / |}"))
    h = HatOperation(conc, KElt(2, (1,), (2, 1)))
    u = hat_identity(LEAF)
    same = hat_compose(h, (u, hat_identity(node(LEAF))))
    assert same.op == conc and same.kappa == h.kappa
    inner = HatOperation(
        HOperation(parse_config("{w1 | / (|)}")), KElt(1, (), (1,)))
    got = hat_compose(h, (u, inner))
    assert str(got.op.term) == "{w2 | / {w1 | / |}}"
    assert got.kappa == KElt(2, (1,), (2, 1))


def test_hat_compose_randomized_keeps_invariant():
    count = 0
    for i in range(150):
        rng = random.Random(8000 + i)
        o = random_op(rng, TREES[i % len(TREES)], 1 + i % 2)
        tags = [kappa for kappa in k_enumerate(2, o.k)
                if k_leq(complexity(o), k_iota(kappa))]
        h = HatOperation(o, tags[rng.randrange(len(tags))])
        inners = []
        for s in o.sources:
            p = random_op(rng, s, 1 + rng.randrange(2))
            ptags = [kappa for kappa in k_enumerate(2, p.k)
                     if k_leq(complexity(p), k_iota(kappa))]
            inners.append(HatOperation(p, ptags[rng.randrange(len(ptags))]))
        hat_compose(h, tuple(inners))
        count += 1
    assert count == 150
