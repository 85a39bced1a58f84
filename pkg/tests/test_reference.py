import numpy as np

from ambiconv.reference import (
    PHI,
    THETA,
    X1,
    X2,
    Y1,
    Y2,
    Z34_PRINTED,
    Z_COMMON,
    run_reference_checks,
)


class TestBuiltinDataset:
    def test_all_checks_pass(self):
        results = run_reference_checks()
        assert all(c.ok for c in results), [c.name for c in results if not c.ok]
        assert len(results) == 9

    def test_dataset_shapes(self):
        assert X1.size == X2.size == 11
        assert Y1.size == Y2.size == 7
        assert Z_COMMON.size == 17 == Z34_PRINTED.size
        assert THETA == np.pi / 3 and PHI == np.pi / 6


class TestNegativeControl:
    def test_corrupted_first_seed_fails_with_entry_index(self):
        bad = np.array(X1)
        bad[2] = 9.0
        results = run_reference_checks(x1=bad)
        failing = [c for c in results if not c.ok]
        assert failing
        first = failing[0]
        assert first.first_bad_index is not None
        assert "entry" in first.detail

    def test_corrupted_second_pair_breaks_seed_condition(self):
        bad = np.array(Y2)
        bad[0] = -5.0
        results = run_reference_checks(y2=bad)
        assert not all(c.ok for c in results)
