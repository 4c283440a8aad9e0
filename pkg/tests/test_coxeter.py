import json
import random

import pytest

from coxl2.coxeter import CoxeterSystem, parse_system
from coxl2.errors import ConfigError, NotSphericalError
from coxl2.exactpoly import Poly


# -- fixtures ----------------------------------------------------------------

Z2 = CoxeterSystem(["s"], [[1]])
DINF = CoxeterSystem(["s", "u"], [[1, 0], [0, 1]])
A2 = CoxeterSystem(["s", "u"], [[1, 3], [3, 1]])
B2 = CoxeterSystem(["s", "u"], [[1, 4], [4, 1]])
H2 = CoxeterSystem(["s", "u"], [[1, 5], [5, 1]])
I7 = CoxeterSystem(["s", "u"], [[1, 7], [7, 1]])  # interval arithmetic path
FREE3 = CoxeterSystem(["a", "b", "c"], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
A3 = CoxeterSystem(["a", "b", "c"], [[1, 3, 2], [3, 1, 3], [2, 3, 1]])


def cycle_racg(n):
    """Right-angled system whose nerve is an n-cycle."""
    mat = [[0] * n for _ in range(n)]
    for i in range(n):
        mat[i][i] = 1
        mat[i][(i + 1) % n] = mat[(i + 1) % n][i] = 2
    return CoxeterSystem([f"g{i}" for i in range(n)], mat)


SQUARE = cycle_racg(4)
PENT = cycle_racg(5)


# -- independent normal-form oracle ------------------------------------------
# Any word reduces to a reduced word by braid moves plus ss-deletions alone,
# and all reduced words of one element are connected by braid moves.


def _braid_neighbours(system, word):
    n = len(word)
    for i in range(n):
        for j in range(i + 1, n + 1):
            pass
    out = set()
    for a in range(system.rank):
        for b in range(system.rank):
            if a == b:
                continue
            m = system.m(a, b)
            if m == 0:
                continue
            pat = tuple((a if k % 2 == 0 else b) for k in range(m))
            rep = tuple((b if k % 2 == 0 else a) for k in range(m))
            for i in range(n - m + 1):
                if word[i : i + m] == pat:
                    out.add(word[:i] + rep + word[i + m :])
    return out


def _braid_closure(system, word):
    seen = {word}
    stack = [word]
    while stack:
        w = stack.pop()
        for w2 in _braid_neighbours(system, w):
            if w2 not in seen:
                seen.add(w2)
                stack.append(w2)
    return seen

def oracle_normal_form(system, word):
    w = tuple(word)
    while True:
        cls = _braid_closure(system, w)
        shortened = None
        for cand in cls:
            for i in range(len(cand) - 1):
                if cand[i] == cand[i + 1]:
                    shortened = cand[:i] + cand[i + 2 :]
                    break
            if shortened is not None:
                break
        if shortened is None:
            return min(cls)
        w = shortened


ALL_SYSTEMS = [Z2, DINF, A2, B2, H2, I7, FREE3, A3, SQUARE]


@pytest.mark.parametrize("system", ALL_SYSTEMS, ids=lambda s: "-".join(s.labels))
def test_normal_form_matches_rewriting_oracle(system):
    rng = random.Random(7)
    words = [()]
    for length in range(1, 7):
        for _ in range(25):
            words.append(tuple(rng.randrange(system.rank) for _ in range(length)))
    for w in words:
        assert system.normal_form(w) == oracle_normal_form(system, w)


def test_normal_form_idempotent_and_reduced():
    rng = random.Random(3)
    for system in (DINF, B2, SQUARE, A3):
        for _ in range(60):
            w = tuple(rng.randrange(system.rank) for _ in range(rng.randrange(8)))
            nf = system.normal_form(w)
            assert system.normal_form(nf) == nf


def test_involution_and_identity():
    for system in ALL_SYSTEMS:
        assert system.normal_form((0, 0)) == ()
    assert DINF.normal_form(()) == ()


def test_commuting_pair_sorts():
    # in the 4-cycle, adjacent generators commute and the smaller index leads
    assert SQUARE.m(0, 1) == 2
    assert SQUARE.normal_form((1, 0)) == (0, 1)


def test_dinfty_alternating_already_reduced():
    w = (0, 1, 0, 1, 0)
    assert DINF.normal_form(w) == w
    assert len(DINF.normal_form((0, 1, 0, 1, 0, 1, 0, 1))) == 8


def test_mul_and_inverse():
    rng = random.Random(11)
    for system in (DINF, A2, B2, SQUARE, A3):
        for _ in range(40):
            a = system.normal_form(tuple(rng.randrange(system.rank) for _ in range(5)))
            b = system.normal_form(tuple(rng.randrange(system.rank) for _ in range(5)))
            assert system.mul(a, b) == system.normal_form(a + b)
            assert system.mul(a, system.inv(a)) == ()


def test_descent_sets():
    # D_infty: w = sus has right descents {s}: d(sus*s)=2 < 3
    w = DINF.normal_form((0, 1, 0))
    assert DINF.right_descents(w) == 0b01
    assert DINF.left_descents(w) == 0b01
    w2 = DINF.normal_form((1, 0, 1))
    assert DINF.right_descents(w2) == 0b10
    # square: w = g0 g1 has both as right descents (they commute)
    w3 = SQUARE.normal_form((0, 1))
    assert SQUARE.right_descents(w3) == 0b11


# -- balls --------------------------------------------------------------------


def test_ball_radius_zero():
    for system in ALL_SYSTEMS:
        assert system.ball_shells(0) == [[()]]


def test_dinfty_ball_profile():
    shells = DINF.ball_shells(3)
    assert [len(s) for s in shells] == [1, 2, 2, 2]
    flat = DINF.ball(3)
    assert len(flat) == 7
    assert flat[0] == ()


def test_square_ball_counts():
    shells = SQUARE.ball_shells(2)
    assert [len(s) for s in shells] == [1, 4, 8]


def test_free3_ball_counts():
    shells = FREE3.ball_shells(4)
    assert [len(s) for s in shells] == [1, 3, 6, 12, 24]


def test_finite_group_ball_stops():
    shells = A2.ball_shells(10)
    assert [len(s) for s in shells] == [1, 2, 2, 1]


def test_ball_monotone_and_shell_lengths():
    for system in (DINF, SQUARE, A3):
        shells = system.ball_shells(4)
        for d, shell in enumerate(shells):
            assert all(len(w) == d for w in shell)
            assert shell == sorted(shell)


def test_ball_cap():
    from coxl2.errors import ResourceLimitError

    with pytest.raises(ResourceLimitError):
        FREE3.ball_shells(10, max_elements=50)


# -- spherical subsets ---------------------------------------------------------


def test_spherical_dinfty():
    masks = DINF.spherical_masks()
    assert sorted(masks) == [0b00, 0b01, 0b10]
    sp = DINF.spherical(0b01)
    assert sp.poly == Poly([1, 1])


def test_spherical_square():
    subs = SQUARE.spherical_subsets()
    assert len(subs) == 9  # empty, 4 singletons, 4 commuting pairs
    pair_polys = [sp.poly for sp in subs if len(sp.gens) == 2]
    assert all(p == Poly([1, 2, 1]) for p in pair_polys)


def test_spherical_a2():
    subs = A2.spherical_subsets()
    assert len(subs) == 4
    assert A2.spherical(0b11).poly == Poly([1, 2, 2, 1])


def test_spherical_closed_under_subsets():
    for system in (SQUARE, PENT, A3, B2):
        masks = set(system.spherical_masks())
        for mask in masks:
            sub = mask
            while sub:
                sub = (sub - 1) & mask
                assert sub in masks


def test_spherical_poly_properties():
    for system in (A2, B2, H2, A3, SQUARE):
        for sp in system.spherical_subsets():
            c = sp.poly.c
            assert c and c[0] == 1
            assert list(c) == list(reversed(c))  # palindromic
            assert sp.poly(1) == sp.order


def test_classification_big_types():
    # E8 is recognised without enumeration
    mat = [[2] * 8 for _ in range(8)]
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]
    for i in range(8):
        mat[i][i] = 1
    for a, b in edges:
        mat[a][b] = mat[b][a] = 3
    e8 = CoxeterSystem([f"s{i}" for i in range(8)], mat)
    sp = e8.spherical(sum(1 << i for i in range(8)))
    assert sp.order == 696729600
    assert sp.poly(1) == sp.order
    assert sp.poly.degree == 120  # number of positive roots


def test_affine_a2_tilde_not_spherical():
    tri = CoxeterSystem(["a", "b", "c"], [[1, 3, 3], [3, 1, 3], [3, 3, 1]])
    assert not tri.is_spherical((0, 1, 2))
    assert tri.is_spherical((0, 1))
    with pytest.raises(NotSphericalError):
        tri.spherical((0, 1, 2))


# -- coset representatives ------------------------------------------------------


def test_min_coset_rep_examples():
    assert DINF.min_coset_rep((), 0b10) == ()
    # su with T = {u}: strip u
    su = DINF.normal_form((0, 1))
    assert DINF.min_coset_rep(su, 0b10) == (0,)
    # square: ab in W_{ab} itself
    ab = SQUARE.normal_form((0, 1))
    assert SQUARE.min_coset_rep(ab, 0b11) == ()


def test_min_coset_rep_properties():
    rng = random.Random(5)
    for system in (DINF, A2, SQUARE, A3):
        masks = system.spherical_masks()
        for _ in range(50):
            w = system.normal_form(tuple(rng.randrange(system.rank) for _ in range(6)))
            tmask = rng.choice(masks)
            r = system.min_coset_rep(w, tmask)
            assert len(r) <= len(w)
            u = system.mul(system.inv(r), w)
            assert set(u) <= set(i for i in range(system.rank) if tmask >> i & 1)
            assert len(r) + len(u) == len(w)
            # representative is T-reduced: no right descent inside T
            assert not system.right_descents(r) & tmask


def test_transversal_counts():
    els = A2.parabolic_elements(0b11)
    assert len(els) == 6
    trans = A2.transversal(0b11, 0b01)
    assert len(trans) == 3


# -- parsing --------------------------------------------------------------------


def test_parse_round_trip():
    doc = {"generators": ["s"], "matrix": [[1]]}
    sys1 = parse_system(json.dumps(doc))
    assert sys1.rank == 1 and sys1.ball(3) == [(), (0,)]

    dinf = parse_system('{"generators": ["s","u"], "matrix": [[1,"inf"],["inf",1]]}')
    assert dinf.m(0, 1) == 0
    assert dinf.arithmetic == "shuffle"

    square = parse_system(
        json.dumps(
            {
                "generators": ["a", "b", "c", "d"],
                "matrix": [[1, 2, 0, 2], [2, 1, 2, 0], [0, 2, 1, 2], [2, 0, 2, 1]],
            }
        )
    )
    assert square.matrix == SQUARE.matrix


@pytest.mark.parametrize(
    "doc",
    [
        "not json",
        '{"generators": ["s"]}',
        '{"generators": ["s","s"], "matrix": [[1,2],[2,1]]}',
        '{"generators": ["s","u"], "matrix": [[1,3],[2,1]]}',  # asymmetric
        '{"generators": ["s","u"], "matrix": [[2,3],[3,1]]}',  # diagonal != 1
        '{"generators": ["s","u"], "matrix": [[1,1],[1,1]]}',  # off-diagonal < 2
        '{"generators": ["s","u"], "matrix": [[1,2.5],[2.5,1]]}',
    ],
)
def test_parse_errors(doc):
    with pytest.raises(ConfigError):
        parse_system(doc)


def test_arithmetic_modes():
    assert DINF.arithmetic == "shuffle"
    assert A2.arithmetic == "radical"
    assert H2.arithmetic == "radical"
    assert I7.arithmetic == "interval"
    assert I7.exact is False


def test_system_hash_stable():
    assert SQUARE.system_hash == cycle_racg(4).system_hash
    assert SQUARE.system_hash != PENT.system_hash
