import pytest

from pidtune import PidGains, SimConfig, TransferFunction, evaluate


@pytest.fixture(scope="session", autouse=True)
def warm_kernel():
    # Compile the jitted scan once up front so timed tests measure the
    # steady-state cost, not JIT compilation.
    evaluate(
        PidGains(1.0, 0.0, 0.0),
        TransferFunction((1.0,), (1.0, 0.0)),
        SimConfig(t_max=1.0, dt=0.01),
    )
