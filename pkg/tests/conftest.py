import functools

import pytest

from pdmbench.data import MachineRecord, build_labeled
from pdmbench.simulate import simulate_records

HEADER = ("UDI,Product ID,Type,Air temperature [K],Process temperature [K],"
          "Rotational speed [rpm],Torque [Nm],Tool wear [min],Machine failure,TWF,HDF,PWF,OSF,RNF")


def make_record(udi=1, machine_type="M", air=298.1, process=308.6, rpm=1551.0, torque=42.8,
                wear=0.0, twf=False, hdf=False, pwf=False, osf=False, rnf=False):
    failure = twf or hdf or pwf or osf or rnf
    return MachineRecord(udi=udi, product_id=f"{machine_type}{14860 + udi}",
                         machine_type=machine_type, air_temp=air, process_temp=process,
                         rot_speed=rpm, torque=torque, tool_wear=wear,
                         machine_failure=failure, twf=twf, hdf=hdf, pwf=pwf, osf=osf, rnf=rnf)


@functools.lru_cache(maxsize=None)
def _simulated(n, seed):
    return tuple(simulate_records(n, seed))


@pytest.fixture(scope="session")
def sim_records():
    return list(_simulated(10_000, 0))


@pytest.fixture(scope="session")
def sim_labeled(sim_records):
    return build_labeled(sim_records)


@pytest.fixture(scope="session")
def small_labeled():
    return build_labeled(_simulated(2_000, 7))


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL/INFO line for the acceptance summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(criterion, ok, detail):
        status = ok if isinstance(ok, str) else ("PASS" if ok else "FAIL")
        line = f"{status:<4} criterion {criterion}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
