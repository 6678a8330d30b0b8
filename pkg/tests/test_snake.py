import pytest

from preab import randgen
from preab.errors import PreconditionFailed, ShapeMismatch
from preab.snake import (
    SnakeInput,
    assumptions_a_check,
    boundary_rows,
    build_corners,
    build_snake,
    chase_agreement,
    delta_andre_maclane,
    delta_fhh,
    element_chase,
    proof_intermediates_check,
    run_snake_checks,
    sign_check,
    six_term_report,
)
from preab.vectpair import VECTPAIR as V, make_morphism, make_object

from conftest import M, snake_sign_input


def identity_verticals():
    a, b = make_object(1), make_object(2, [[1, 1]])
    psi = make_morphism(a, b, M([1], [0]))
    phi = make_morphism(b, make_object(1, [[1]]), M([0, 1]))
    return SnakeInput(psi, phi, psi, phi, V.identity(a), V.identity(b), V.identity(phi.dst))


def zero_diagram():
    i = V.identity(V.zero_object())
    return SnakeInput(i, i, i, i, i, i, i)


@pytest.fixture
def beta_zero():
    return snake_sign_input(beta=0)


class TestBoundaryRows:
    def test_identity_verticals(self):
        for m in boundary_rows(identity_verticals()):
            assert m.src.dim == 0 and m.dst.dim == 0

    def test_sign_fixture(self, fix_sn):
        eps, zeta, tau_c, theta_c = boundary_rows(fix_sn)
        assert V.kernel(fix_sn.gamma)[0] == make_object(1)
        assert V.cokernel(fix_sn.alpha)[0] == make_object(1)
        assert zeta.src.dim == 0 and tau_c.dst.dim == 0
        assert eps.mat.shape == (0, 0) and theta_c.mat.shape == (0, 0)

    @pytest.mark.parametrize("seed", range(8))
    def test_compositions_vanish(self, seed):
        eps, zeta, tau_c, theta_c = boundary_rows(randgen.random_snake_input(seed, 4))
        assert V.is_zero(V.compose(zeta, eps)) and V.is_zero(V.compose(theta_c, tau_c))


class TestCorners:
    def test_sign_fixture(self, fix_sn):
        c = build_corners(fix_sn)
        assert c.X.obj == make_object(1) and c.Y.obj == make_object(1)
        assert V.is_invertible(c.s) and V.is_invertible(c.u)
        assert V.is_invertible(c.t)
        assert c.v.mat == M([1])

    def test_zero_diagram(self):
        c = build_corners(zero_diagram())
        assert c.X.obj.dim == 0 and c.Y.obj.dim == 0

    def test_assumptions_a(self, fix_sn):
        assert all(assumptions_a_check(build_corners(fix_sn)).values())
        assert all(assumptions_a_check(build_corners(zero_diagram())).values())

    @pytest.mark.parametrize("seed", range(8))
    def test_assumptions_a_on_corpus(self, seed):
        flags = assumptions_a_check(build_corners(randgen.random_snake_input(seed, 4)))
        assert flags["s_epic"] and flags["t_kernel"] and flags["A"]


class TestConnectingMorphisms:
    def test_delta_i(self, fix_sn):
        _, _, d = delta_andre_maclane(fix_sn, build_corners(fix_sn))
        assert d.mat == M([1])

    def test_delta_ii(self, fix_sn):
        *_, d = delta_fhh(fix_sn)
        assert d.mat == M([-1])

    def test_beta_zero(self, beta_zero):
        _, _, d1 = delta_andre_maclane(beta_zero, build_corners(beta_zero))
        *_, d2 = delta_fhh(beta_zero)
        assert d1.mat == M([0]) and d2.mat == M([0])

    def test_identity_verticals_empty(self):
        res = build_snake(identity_verticals())
        assert res.delta_i.mat.shape == (0, 0) and res.delta_ii.mat.shape == (0, 0)

    def test_sign(self, fix_sn):
        res = build_snake(fix_sn)
        assert sign_check(res.delta_i, res.delta_ii)

    def test_sign_zero_maps(self):
        z = V.zero_morphism(make_object(2), make_object(1))
        assert sign_check(z, z)

    def test_sign_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            sign_check(V.identity(make_object(1)), V.identity(make_object(2)))

    def test_sign_detects_same_sign(self, fix_sn):
        res = build_snake(fix_sn)
        assert not sign_check(res.delta_i, res.delta_i)

    def test_precondition(self):
        inp = identity_verticals()
        broken = SnakeInput(inp.psi, inp.phi, V.compose(inp.psi, V.zero_morphism(inp.psi.src, inp.psi.src)),
                            inp.phi, V.zero_morphism(inp.alpha.src, inp.alpha.dst), inp.beta, inp.gamma)
        with pytest.raises(PreconditionFailed):
            build_snake(broken)


class TestIntermediates:
    def test_sign_fixture(self, fix_sn):
        assert proof_intermediates_check(build_snake(fix_sn)).passed

    def test_zero_diagram(self):
        assert proof_intermediates_check(build_snake(zero_diagram())).passed

    @pytest.mark.parametrize("seed", range(8))
    def test_corpus(self, seed):
        assert proof_intermediates_check(build_snake(randgen.random_snake_input(seed, 4))).passed


class TestChase:
    def test_sign_fixture(self, fix_sn):
        assert element_chase(fix_sn, [1])[0] == [1]

    def test_zero_vector(self, fix_sn):
        assert element_chase(fix_sn, [0])[0] == [0]

    def test_beta_zero(self, beta_zero):
        assert element_chase(beta_zero, [1])[0] == [0]

    @pytest.mark.parametrize("seed", range(8))
    def test_agrees_with_delta_i(self, seed):
        assert chase_agreement(build_snake(randgen.random_snake_input(seed, 4))).passed


class TestSixTerm:
    def test_sign_fixture(self, fix_sn):
        assert all(six_term_report(build_snake(fix_sn)).values())

    def test_identity_verticals(self):
        assert all(six_term_report(build_snake(identity_verticals())).values())


def test_run_snake_checks_on_fixture(fix_sn):
    _, out = run_snake_checks(fix_sn)
    assert out["sign_check"] and out["delta_i_identity"] and out["zero_compositions"]
    assert out["intermediates"].passed and out["chase"].passed
    assert out["a_star_agrees"]
