import os
import subprocess
import sys

import numpy as np
import pytest

from hhgeom import _kernels as K


def sample_args(name, n, rng):
    v = lambda: rng.normal(size=n) + 3.0  # noqa: E731  keep divisors away from zero
    g = lambda: rng.normal(size=(n, 4))  # noqa: E731

    def h():
        a = rng.normal(size=(n, 4, 4))
        return a + a.transpose(0, 2, 1)

    def metric():
        a = rng.normal(size=(n, 4, 4)) * 0.2
        return np.diag([1.0, 1, -1, -1]) + a + a.transpose(0, 2, 1)

    if name in ("jet_mul", "jet_div"):
        return v(), g(), h(), v(), g(), h()
    if name == "jet_chain":
        return g(), h(), v(), v(), v()
    if name == "christoffel":
        gd = rng.normal(size=(n, 4, 4, 4))
        gdd = rng.normal(size=(n, 4, 4, 4, 4))
        gd = gd + gd.transpose(0, 2, 1, 3)
        gdd = gdd + gdd.transpose(0, 2, 1, 3, 4)
        return metric(), gd, gdd + gdd.transpose(0, 1, 2, 4, 3)
    if name == "riemann":
        return metric(), rng.normal(size=(n, 4, 4, 4)), rng.normal(size=(n, 4, 4, 4, 4))
    if name == "frame_connection":
        E = np.eye(4) + 0.3 * rng.normal(size=(n, 4, 4))
        return E, rng.normal(size=(n, 4, 4, 4)), rng.normal(size=(n, 4, 4, 4))
    if name == "frame_tensor4":
        return rng.normal(size=(n, 4, 4, 4, 4)), rng.normal(size=(n, 4, 4))
    if name == "frame_tensor2":
        return rng.normal(size=(n, 4, 4)), rng.normal(size=(n, 4, 4))
    raise KeyError(name)


def test_kernel_tables_match():
    assert set(K.NUMPY_KERNELS) == {"jet_mul", "jet_div", "jet_chain", "christoffel", "riemann",
                                    "frame_connection", "frame_tensor4", "frame_tensor2"}
    if K.HAVE_NUMBA:
        assert set(K.NUMBA_KERNELS) == set(K.NUMPY_KERNELS)


@pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("name", sorted(K.NUMPY_KERNELS))
@pytest.mark.parametrize("n", [1, 7])
def test_backends_agree(name, n):
    args = sample_args(name, n, np.random.default_rng(n))
    a = K.NUMPY_KERNELS[name](*[np.ascontiguousarray(x) for x in args])
    b = K.NUMBA_KERNELS[name](*[np.ascontiguousarray(x) for x in args])
    a = a if isinstance(a, tuple) else (a,)
    b = b if isinstance(b, tuple) else (b,)
    for x, y in zip(a, b):
        assert x.shape == y.shape
        assert np.allclose(x, y, rtol=1e-12, atol=1e-12)


def _backend_with(flag):
    env = dict(os.environ)
    env.pop("HHGEOM_DISABLE_NUMBA", None)
    if flag is not None:
        env["HHGEOM_DISABLE_NUMBA"] = flag
    out = subprocess.run([sys.executable, "-c", "import hhgeom; print(hhgeom.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    return out.stdout.strip()


@pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")
def test_env_flag_selects_backend():
    assert _backend_with(None) == "numba"
    assert _backend_with("0") == "numba"
    assert _backend_with("1") == "numpy"
    assert _backend_with("yes") == "numpy"


def test_numpy_backend_end_to_end():
    env = dict(os.environ, HHGEOM_DISABLE_NUMBA="1")
    code = ("from hhgeom.runner import verify_all; import json;"
            "s = verify_all('corrected'); print(s.ok, len(s.passed))")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    assert out.stdout.split() == ["True", "12"]
