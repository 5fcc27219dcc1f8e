import pytest

from hanoi_schreier import verify


def test_default_suite_passes():
    results = verify.run_suite(points=5)
    assert [r.name for r in results] == [
        "semiconjugacy", "psi_split", "recursion", "factorization",
        "multiplicities", "bfs_distance_diameter", "conjugation",
    ]
    assert all(r.passed for r in results), [r.line() for r in results]


@pytest.mark.parametrize("mutation", verify.MUTATIONS)
def test_each_mutation_fails_exactly_one_check(mutation):
    failing = [r.name for r in verify.run_suite(points=3, mutation=mutation) if not r.passed]
    assert len(failing) == 1


def test_unknown_mutation():
    with pytest.raises(ValueError):
        verify.run_suite(mutation="nope")


def test_extra_checks():
    for check in (verify.check_kns(), verify.check_containment(), verify.check_structure(((3, 4), (4, 3)))):
        assert check.passed, check.line()
