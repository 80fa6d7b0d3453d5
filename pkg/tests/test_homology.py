"""Smith normal forms and bigraded homology tables."""

from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors

from covkh.complex import EVEN, ODD, Generator, GradedComplex, kh_complex
from covkh.homology import (
    HomologyTable,
    euler_characteristic,
    format_laurent,
    homology,
    smith_normal_form,
    sparse_invariant_factors,
)


def test_smith_normal_form_example():
    # 2*8 - 4*6 = -8 and gcd of the entries is 2, so the factors are 2 and 4
    assert smith_normal_form([[2, 4], [6, 8]]) == ([2, 4], 2)


def test_smith_normal_form_diagonal_and_identity():
    assert smith_normal_form([[2, 0], [0, 6]]) == ([2, 6], 2)
    assert smith_normal_form([[1 if i == j else 0 for j in range(4)] for i in range(4)]) == ([1] * 4, 4)


def test_smith_normal_form_degenerate():
    assert smith_normal_form([[0, 0], [0, 0]]) == ([], 0)
    assert smith_normal_form([[1, 2], [2, 4]]) == ([1], 1)
    assert smith_normal_form([]) == ([], 0)


small = st.integers(min_value=-6, max_value=6)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))))
def test_sparse_factors_match_sympy(rows):
    ours, rank = smith_normal_form(rows)
    ref = [abs(int(d)) for d in invariant_factors(Matrix(rows), domain=ZZ) if d != 0]
    assert ours == sorted(ref)
    assert rank == Matrix(rows).rank()


def test_sparse_ignores_explicit_zeros():
    assert sparse_invariant_factors({(0, 0): 3, (1, 1): 0, (5, 7): 2}) == [1, 6]


def _two_term(k):
    """``Z --k--> Z`` in homological degrees 0 and 1."""
    gens = [Generator(0, 0, ("a",)), Generator(1, 0, ("b",))]
    diff = [{1: k} if k else {}, {}]
    return GradedComplex(gens, diff, EVEN)


def test_two_term_complexes():
    assert homology(_two_term(1)) == HomologyTable({})
    assert homology(_two_term(3)).entries == {(1, 0): (0, (3,))}
    assert homology(_two_term(0)).entries == {(0, 0): (1, ()), (1, 0): (1, ())}


def test_mod_p_dims_universal_coefficients():
    tab = HomologyTable({(0, 1): (1, ()), (3, 7): (0, (2,)), (3, 9): (1, ()), (4, 9): (0, (3,))})
    assert tab.mod_p_dims(2) == {(0, 1): 1, (2, 7): 1, (3, 7): 1, (3, 9): 1}
    assert tab.mod_p_dims(3) == {(0, 1): 1, (3, 9): 2, (4, 9): 1}


def test_table_accessors_and_render():
    tab = HomologyTable({(0, 1): (1, ()), (3, 7): (0, (2,)), (2, 5): (2, ())})
    assert tab.rank(2, 5) == 2 and tab.rank(9, 9) == 0
    assert tab.torsion(3, 7) == (2,)
    assert tab.total_rank() == 3
    text = tab.render()
    assert "Z/2" in text and "Z^2" in text
    assert text.splitlines()[1].split()[0] == "7"  # highest q first
    assert HomologyTable({}).render() == "(zero)"
    assert [e["h"] for e in tab.to_json()] == [0, 2, 3]


def test_parallel_blocks_agree(diagrams):
    C = kh_complex(diagrams["figure8"])
    for spec in (EVEN, ODD):
        assert homology(C, spec, jobs=2) == homology(C, spec, jobs=1)


def test_euler_characteristic_and_laurent_format():
    tab = HomologyTable({(0, 1): (1, ()), (0, 3): (1, ()), (2, 5): (1, ()), (3, 9): (1, ()),
                         (3, 7): (0, (2,))})
    chi = euler_characteristic(tab)
    assert chi == {1: 1, 3: 1, 5: 1, 9: -1}
    assert format_laurent(chi) == "-q^9 + q^5 + q^3 + q"
    assert format_laurent({}) == "0"
    assert format_laurent({0: 2, -1: -1}) == "2 - q^-1"


def test_homology_is_deterministic(diagrams):
    C = kh_complex(diagrams["trefoil+"])
    assert homology(C, ODD).dumps() == homology(C, ODD).dumps()
