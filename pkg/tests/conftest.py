import pytest

from photmol import _kernels

BACKENDS = sorted(_kernels.available_backends())


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Route the package's hot loops through one backend for the duration of a test."""
    impl = _kernels.available_backends()[request.param]
    for name in ("hilbert_remainder", "upwind_advect", "band_sums"):
        monkeypatch.setattr(_kernels, name, getattr(impl, name))
    return request.param
