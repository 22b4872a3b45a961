import pytest

from syntaxirl import _pykernels, kernels


def test_python_backend_always_available():
    assert "python" in kernels.available_backends()
    assert kernels.get_backend("python") is _pykernels


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_use_backend_switches_and_restores():
    original = kernels.BACKEND
    try:
        kernels.use_backend("python")
        assert kernels.BACKEND == "python"
        assert kernels.soft_backward is _pykernels.soft_backward
        assert kernels.local_depth_sums is _pykernels.local_depth_sums
    finally:
        kernels.use_backend(original)
    assert kernels.BACKEND == original
