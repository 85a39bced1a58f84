import os
import subprocess
import sys

import numpy as np
import pytest

from ambiconv import _kernels


class TestBackendAgreement:
    @pytest.mark.skipif(not _kernels._HAVE_NUMBA, reason="numba unavailable")
    def test_convolve_backends_agree(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            x = rng.uniform(-1, 1, rng.integers(1, 14))
            y = rng.uniform(-1, 1, rng.integers(1, 14))
            a = _kernels._convolve_numba(x, y)
            b = _kernels._convolve_numpy(x, y)
            assert np.max(np.abs(a - b)) <= 1e-14 * max(1.0, np.max(np.abs(b)))

    @pytest.mark.skipif(not _kernels._HAVE_NUMBA, reason="numba unavailable")
    def test_lift_backends_agree_exactly(self):
        # Both accumulate anti-diagonals in row-major order, so bitwise.
        rng = np.random.default_rng(2)
        for _ in range(50):
            m, n = rng.integers(1, 11, size=2)
            w = rng.uniform(-1, 1, (m, n))
            assert np.array_equal(_kernels._lift_numba(w), _kernels._lift_numpy(w))


class TestBackendSelection:
    def test_env_flag_forces_numpy(self):
        code = "import ambiconv; print(ambiconv.BACKEND)"
        env = dict(os.environ, AMBICONV_BACKEND="numpy")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.returncode == 0
        assert out.stdout.strip() == "numpy"

    def test_unknown_backend_rejected(self):
        code = "import ambiconv"
        env = dict(os.environ, AMBICONV_BACKEND="cuda")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.returncode != 0
        assert "AMBICONV_BACKEND" in out.stderr

    def test_numpy_backend_runs_reference_checks(self):
        code = (
            "from ambiconv.reference import run_reference_checks; "
            "rs = run_reference_checks(); "
            "assert all(c.ok for c in rs), [c.name for c in rs if not c.ok]; "
            "print('ok')"
        )
        env = dict(os.environ, AMBICONV_BACKEND="numpy")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.returncode == 0 and out.stdout.strip() == "ok"
