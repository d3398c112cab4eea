from fractions import Fraction as F
from itertools import product

import pytest

from juggle import chains as ch
from juggle import combinat as cb
from juggle.errors import DomainError
from juggle.linalg import solve_stationary

SP = cb.SetPartition.parse
SETP_BASIS = [SP(t) for t in ("1,2,3", "1|2,3", "2|1,3", "1,2|3", "1|2|3")]
WORD_BASIS = ["bb", "ob", "bo", "oo"]


def dense_in(kernel, order):
    return kernel.permuted(order).dense()


def test_mjmc_h4_k2_matrix_and_eigenvector():
    x0, x1, x2 = F(1, 6), F(1, 3), F(1, 2)
    P = ch.build_mjmc(4, 2, [x0, x1, x2])
    assert P.labels() == ["bboo", "bobo", "boob", "obbo", "obob", "oobb"]
    assert P.dense() == [
        [x0, x1, x2, 0, 0, 0],
        [x0, 0, 0, x1, x2, 0],
        [0, x0, 0, x1, 0, x2],
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
    ]
    y1, y2 = x1 + x2, x2
    vec = [1, y1, y2, y1**2, y2 * y1, y2**2]
    pi = ch.stationary_mjmc(4, 2, [x0, x1, x2])
    z = sum(vec)
    assert list(pi.weights) == [v / z for v in vec]
    assert solve_stationary(P) == pi


@pytest.mark.parametrize("h,k", [(1, 0), (3, 1), (5, 2), (6, 6), (0, 0)])
def test_mjmc_oracle_agreement(h, k):
    xs = [F(i + 1, (k + 1) * (k + 2) // 2) for i in range(k + 1)]
    assert solve_stationary(ch.build_mjmc(h, k, xs)) == ch.stationary_mjmc(h, k, xs)


def test_mjmc_partition_form_is_conjugate():
    xs = [F(1, 2), F(1, 3), F(1, 6)]
    words = ch.build_mjmc(5, 2, xs)
    parts = ch.build_mjmc_partition_form(2, 3, xs)
    order = [cb.partition_to_word(lam, 2, 3) for lam in parts.states]
    assert words.permuted(order).rows == parts.rows
    pw = ch.stationary_mjmc(5, 2, xs).as_dict()
    pp = ch.stationary_mjmc_partition(2, 3, xs).as_dict()
    assert all(pp[lam] == pw[cb.partition_to_word(lam, 2, 3)] for lam in pp)


def test_mjmc_parameter_errors():
    with pytest.raises(DomainError):
        ch.build_mjmc(3, 1, [F(1, 2)])
    with pytest.raises(DomainError):
        ch.build_mjmc(3, 1, [F(1, 2), F(1, 3)])
    with pytest.raises(DomainError):
        ch.build_mjmc(3, 1, [F(-1, 2), F(3, 2)])
    with pytest.raises(DomainError):
        ch.build_mjmc(3, 1, [0, 1])
    assert ch.build_mjmc(3, 1, [0, 1], allow_reducible=True).is_stochastic()


def test_enriched_lumps_to_mjmc():
    xs = [F(1, 5), F(1, 2), F(3, 10)]
    for H in range(3, 7):
        A = ch.build_enriched(H, 3, xs)
        B = ch.build_mjmc(H - 1, 2, xs)
        M = ch.lumping_psi(H, 3)
        assert ch.verify_intertwining(A, M, B)
        assert M.push(ch.stationary_enriched(H, 3, xs)) == ch.stationary_mjmc(H - 1, 2, xs)
        assert solve_stationary(A) == ch.stationary_enriched(H, 3, xs)


def test_adddrop_h2_example():
    a, z1, z2 = F(1, 2), F(1, 3), F(1, 6)
    p = ch.AddDropParams(a, [z1, z2])
    d1, d2 = a + z1, a + z1 + z2
    assert dense_in(ch.build_adddrop(2, p), WORD_BASIS) == [
        [z1 / d1, 0, a / d1, 0],
        [z1 / d1, 0, a / d1, 0],
        [0, z1 / d2, z2 / d2, a / d2],
        [0, z1 / d2, z2 / d2, a / d2],
    ]
    vec = [z1**2, a * z1, a * (z1 + z2), a**2]
    pi = ch.stationary_adddrop(2, p).reordered(WORD_BASIS)
    assert list(pi.weights) == [v / sum(vec) for v in vec]


def test_enriched_adddrop_h3_example():
    a, z1, z2 = F(2), F(3), F(5)  # add-drop weights need not sum to one
    p = ch.AddDropParams(a, [z1, z2])
    d1, d2 = a + z1, a + z1 + z2
    row1 = [z1 / d1, 0, 0, a / d1, 0]
    row2 = [0, z1 / d2, z2 / d2, 0, a / d2]
    assert dense_in(ch.build_enriched_adddrop(3, p), SETP_BASIS) == [row1, row1, row2, row2, row2]
    vec = [z1**2, a * z1, a * z2, a * z1, a**2]
    pi = ch.stationary_enriched_adddrop(3, p).reordered(SETP_BASIS)
    assert list(pi.weights) == [v / sum(vec) for v in vec]


def test_adddrop_requires_positive_a():
    with pytest.raises(DomainError):
        ch.build_adddrop(2, ch.AddDropParams(0, [1, 1]))
    with pytest.raises(DomainError):
        ch.AddDropParams(-1, [1])


@pytest.mark.parametrize("h", range(1, 5))
def test_adddrop_oracle(h):
    p = ch.AddDropParams(F(2, 3), [F(i, 4) for i in range(1, h + 2)])
    assert solve_stationary(ch.build_adddrop(h, p)) == ch.stationary_adddrop(h, p)
    assert solve_stationary(ch.build_enriched_adddrop(h + 1, p)) == ch.stationary_enriched_adddrop(h + 1, p)


def test_annihilation_h2_example():
    z1, z2, a = F(1, 5), F(3, 10), F(1, 2)
    p = ch.AddDropParams(a, [z1, z2])
    assert dense_in(ch.build_annihilation(2, p), WORD_BASIS) == [
        [z1, 0, z2 + a, 0],
        [z1, 0, z2 + a, 0],
        [0, z1, z2, a],
        [0, z1, z2, a],
    ]
    vec = [z1**2, z1 * (z2 + a), (z1 + z2) * (z2 + a), a * (z2 + a)]
    assert list(ch.stationary_annihilation(2, p).reordered(WORD_BASIS).weights) == vec
    assert sum(vec) == 1


def test_enriched_annihilation_h3_example():
    z1, z2, a = F(1, 5), F(3, 10), F(1, 2)
    p = ch.AddDropParams(a, [z1, z2])
    r1 = [z1, 0, 0, z2 + a, 0]
    r2 = [0, z1, z2, 0, a]
    assert dense_in(ch.build_enriched_annihilation(3, p), SETP_BASIS) == [r1, r1, r2, r2, r2]
    vec = [z1**2, z1 * (z2 + a), z2 * (z2 + a), z1 * (z2 + a), a * (z2 + a)]
    assert list(ch.stationary_enriched_annihilation(3, p).reordered(SETP_BASIS).weights) == vec


def test_unnormalized_annihilation_mass():
    zs, a = [F(1), F(2), F(3)], F(4)
    p = ch.AddDropParams(a, zs)
    d = ch.stationary_annihilation(3, p, allow_unnormalized=True)
    assert d.total() == (sum(zs) + a) ** 3
    e = ch.stationary_enriched_annihilation(4, p, allow_unnormalized=True)
    assert e.total() == (sum(zs) + a) ** 3


def test_annihilation_parameter_errors():
    with pytest.raises(DomainError):
        ch.build_annihilation(3, ch.AddDropParams(F(1, 2), [F(1, 2)]))
    with pytest.raises(DomainError):
        ch.build_annihilation(2, ch.AddDropParams(F(1, 2), [F(1, 2), F(1, 2)]))


def test_doubly_enriched_h2():
    zs = [F(1, 5), F(3, 10), F(1, 2)]
    P = ch.build_doubly_enriched(2, zs=zs)
    assert P.n == 9
    for s, row in zip(P.states, P.rows):
        w = ch.alpha_letters(s)
        assert {ch.alpha_letters(P.states[j]): p for j, p in row} == {(w[1], i): zs[i - 1] for i in (1, 2, 3)}
    pi = ch.stationary_doubly(2, zs=zs)
    assert pi.as_dict()[ch.parse_alpha("32")] == zs[2] * zs[1]
    assert solve_stationary(P) == pi


def test_projections_small():
    assert ch.phi_tilde((1, 2)).text() == "1,2|3"
    assert ch.phi_tilde((1, 3)).text() == "1,2|3"
    assert ch.phi_tilde((2, 2)).text() == "2|1,3"
    assert ch.phi_tilde((3, 2)).text() == "2|1,3"
    assert all(ch.phi(w) == "bo" for w in [(1, 2), (1, 3), (2, 2), (3, 2)])


@pytest.mark.parametrize("h", range(0, 4))
def test_projections_intertwine(h):
    zs = [F(1, h + 1)] * (h + 1)
    p = ch.AddDropParams.from_alphabet(h, zs)
    D = ch.build_doubly_enriched(h, zs=zs)
    assert ch.verify_intertwining(D, ch.phi_map(h), ch.build_annihilation(h, p))
    assert ch.verify_intertwining(D, ch.phi_tilde_map(h), ch.build_enriched_annihilation(h + 1, p))
    pi = ch.stationary_doubly(h, zs=zs)
    assert ch.phi_map(h).push(pi) == ch.stationary_annihilation(h, p)
    assert ch.phi_tilde_map(h).push(pi) == ch.stationary_enriched_annihilation(h + 1, p)
    assert ch.verify_intertwining(
        ch.build_enriched_annihilation(h + 1, p), ch.lumping_psi(h + 1), ch.build_annihilation(h, p)
    )


def test_restricted_alphabet():
    zs = [F(1, 3), F(2, 3)]
    h = 4
    p = ch.AddDropParams.from_alphabet(h, zs)
    pi = ch.stationary_annihilation_restricted(h, zs)
    assert pi == ch.stationary_annihilation(h, p)
    assert all(w == 0 for s, w in pi.as_dict().items() if s.count("o") >= 2)
    assert ch.phi_map(h, 2).push(ch.stationary_doubly(h, zs=zs)) == pi
    e = ch.stationary_enriched_annihilation_restricted(h + 1, zs)
    assert e == ch.stationary_enriched_annihilation(h + 1, p)
    with pytest.raises(DomainError):
        ch.stationary_annihilation_restricted(1, zs + [0])


def test_from_alphabet_collapses_tail():
    p = ch.AddDropParams.from_alphabet(2, [F(1, 4)] * 4)
    assert p.full(2) == [F(1, 4), F(1, 4), F(1, 2)]


def test_float_kernels():
    P = ch.build_mjmc(4, 2, [0.2, 0.3, 0.5])
    assert P.is_stochastic()
    pi = ch.stationary_mjmc(4, 2, [0.2, 0.3, 0.5])
    exact = ch.stationary_mjmc(4, 2, [F(1, 5), F(3, 10), F(1, 2)])
    assert all(abs(a - float(b)) < 1e-12 for a, b in zip(pi.weights, exact.weights))


def test_text_and_json():
    P = ch.build_annihilation(1, ch.AddDropParams(F(1, 2), [F(1, 2)]))
    js = P.to_json()
    assert js["states"] == P.labels()
    assert all(isinstance(p, str) for row in js["rows"] for _, p in row)
    pi = ch.stationary_annihilation(1, ch.AddDropParams(F(1, 2), [F(1, 2)]))
    assert pi.to_csv().splitlines()[0] == "state,exact,float"
    for w in product((1, 2, 3), repeat=2):
        assert ch.parse_alpha(ch.alpha_text(w)) == ch.alpha_word(w)
