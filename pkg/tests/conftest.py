import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_state(rng, dim, rank=2):
    from qroughness import FockDensityMatrix

    vecs = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = vecs @ vecs.conj().T
    return FockDensityMatrix(rho / np.trace(rho).real)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """Context manager that records one PASS/FAIL line per acceptance criterion."""
    import contextlib
    import time

    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    @contextlib.contextmanager
    def criterion(number, title):
        notes = []
        start = time.perf_counter()
        try:
            yield notes
        except BaseException:
            status = "FAIL"
            raise
        else:
            status = "PASS"
        finally:
            elapsed = time.perf_counter() - start
            detail = "; ".join(notes)
            line = f"{status} criterion {number:2d}: {title} ({elapsed:.2f} s){': ' + detail if detail else ''}"
            lines.append(line)
            print(line)

    return criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
