import random

import pytest

from preab import randgen, ratmat
from preab.errors import DimensionMismatch, NotInvertible, SubspaceViolation
from preab.ratmat import Matrix, Subspace
from preab.vectpair import (
    VECTPAIR as V,
    PairObject,
    closed_form_classify,
    full_object,
    make_morphism,
    make_object,
)

from conftest import M


def test_make_object_axis():
    p = make_object(2, [[1, 0]])
    assert p.sub.basis == M([1], [0])
    assert repr(p) == "P(2|(1,0))"


def test_zero_object():
    z = make_object(0, [])
    assert z.dim == 0 and V.is_zero_object(z)


def test_spanning_vectors_canonicalize():
    assert make_object(2, [[1, 0], [1, 1]]) == full_object(2)


def test_make_object_bad_length():
    with pytest.raises(DimensionMismatch):
        make_object(2, [[1, 0, 0]])


def test_identity_is_valid():
    p = make_object(3, [[1, 2, 0]])
    assert V.identity(p).mat == Matrix.identity(3)


def test_subspace_violation():
    with pytest.raises(SubspaceViolation):
        make_morphism(make_object(1, [[1]]), make_object(1), M([1]))


def test_nonstrict_morphism_is_valid(fix_ns):
    assert fix_ns.mat == M([1])


def test_shape_violation():
    with pytest.raises(DimensionMismatch):
        make_morphism(make_object(2), make_object(1), M([1]))


class TestKernelCokernel:
    def test_kernel_meets_subspace(self):
        f = make_morphism(make_object(2, [[1, 0]]), make_object(1), M([0, 1]))
        k_obj, k = V.kernel(f)
        assert k_obj == make_object(1, [[1]])
        assert k.mat == M([1], [0])

    def test_kernel_of_injective(self):
        f = make_morphism(make_object(1), make_object(2), M([1], [1]))
        assert V.kernel(f)[0].dim == 0

    def test_kernel_of_zero(self):
        a, b = make_object(2, [[1, 1]]), make_object(1)
        obj, k = V.kernel(V.zero_morphism(a, b))
        assert obj == a and k == V.identity(a)

    def test_cokernel_of_surjective(self):
        f = make_morphism(make_object(2), make_object(1), M([1, 1]))
        assert V.cokernel(f)[0].dim == 0

    def test_cokernel_of_zero(self):
        a, b = make_object(2), make_object(2, [[0, 1]])
        obj, c = V.cokernel(V.zero_morphism(a, b))
        assert obj == b and c == V.identity(b)

    def test_cokernel_quotient_subspace(self):
        f = make_morphism(make_object(1), make_object(2, [[0, 1]]), M([1], [0]))
        obj, c = V.cokernel(f)
        assert obj == full_object(1)
        assert c.mat == M([0, 1])


class TestBiproduct:
    def test_zero_summand(self):
        a = make_object(2, [[1, 2]])
        bp = V.biproduct(a, V.zero_object())
        assert bp.obj == a

    def test_sum_of_lines(self):
        bp = V.biproduct(make_object(1, [[1]]), make_object(1))
        assert bp.obj == make_object(2, [[1, 0]])

    def test_identity_laws(self):
        rng = random.Random(5)
        a, b = randgen.random_object(rng, 3), randgen.random_object(rng, 3)
        bp = V.biproduct(a, b)
        assert V.compose(bp.p1, bp.i1) == V.identity(a)
        assert V.compose(bp.p2, bp.i2) == V.identity(b)
        assert V.is_zero(V.compose(bp.p1, bp.i2))
        total = V.add(V.compose(bp.i1, bp.p1), V.compose(bp.i2, bp.p2))
        assert total == V.identity(bp.obj)


class TestInvert:
    def test_identity(self):
        p = make_object(2, [[1, 1]])
        assert V.invert(V.identity(p)) == V.identity(p)

    def test_bimorphism_not_invertible(self, fix_ns):
        with pytest.raises(NotInvertible) as exc:
            V.invert(fix_ns)
        assert exc.value.reason == "subspace"

    def test_rank_failure(self):
        with pytest.raises(NotInvertible) as exc:
            V.invert(make_morphism(make_object(2), make_object(2), M([1, 0], [0, 0])))
        assert exc.value.reason == "rank"

    def test_swap(self):
        swap = make_morphism(make_object(2, [[1, 0]]), make_object(2, [[0, 1]]), M([0, 1], [1, 0]))
        inv = V.invert(swap)
        assert inv.mat == M([0, 1], [1, 0])
        assert inv.src == swap.dst


class TestClosedForm:
    def test_nonstrict(self, fix_ns):
        c = closed_form_classify(fix_ns)
        assert c.monic and c.epic and not c.strict

    def test_inclusion_is_kernel(self):
        f = make_morphism(make_object(1, [[1]]), make_object(2, [[1, 0]]), M([1], [0]))
        assert closed_form_classify(f).is_kernel

    def test_projection_is_cokernel(self):
        f = make_morphism(make_object(2, [[1, 0]]), make_object(1, [[1]]), M([1, 0]))
        assert closed_form_classify(f).is_cokernel


class TestGenerators:
    @pytest.mark.parametrize("seed", range(10))
    def test_exact_row(self, seed):
        psi, phi = randgen.random_exact_row(seed, 4)
        assert V.is_exact_at(psi, phi)
        assert max(psi.src.dim, psi.dst.dim, phi.dst.dim) <= 4

    def test_seed_determinism(self):
        assert randgen.random_exact_row(3) == randgen.random_exact_row(3)
        assert randgen.random_snake_input(3) == randgen.random_snake_input(3)
        outs = {randgen.random_exact_row(s)[0] for s in range(8)}
        assert len(outs) > 1

    @pytest.mark.parametrize("seed", range(10))
    def test_snake_input_valid(self, seed):
        inp = randgen.random_snake_input(seed, 4)
        assert inp.failed_preconditions() == []

    def test_fixture_file_matches(self, fix_sn):
        from preab import diagdsl

        from conftest import FIXTURES

        plan = diagdsl.load((FIXTURES / "snake_sign.pad").read_text())
        assert plan.checks[0].payload == fix_sn

    def test_corpus_morphisms_in_range(self):
        for s in range(50):
            f = randgen.random_morphism(s)
            assert f.src.dim <= 6 and f.dst.dim <= 6
            assert all(-3 <= x <= 3 for row in f.mat.rows for x in row)


def test_produced_kernels_and_cokernels_are_closed_form_kernels():
    for s in range(40):
        f = randgen.random_morphism(s, 4)
        assert closed_form_classify(V.kernel(f)[1]).is_kernel
        assert closed_form_classify(V.cokernel(f)[1]).is_cokernel


def test_nonabelian_witness(fix_ns):
    assert V.is_monic(fix_ns) and V.is_epic(fix_ns)
    assert not V.is_invertible(fix_ns)
