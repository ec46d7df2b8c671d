import pytest

from fltl.campaigns import demo_machine
from fltl.minsky import find_successful_computation
from fltl.reduction import build_alphabet, encode_computation


@pytest.fixture(scope="session")
def machine():
    return demo_machine()


@pytest.fixture(scope="session")
def computation(machine):
    comp = find_successful_computation(machine, 10, 4)
    assert comp is not None
    return comp


@pytest.fixture(scope="session")
def encoding(machine, computation):
    return encode_computation(computation, machine)


@pytest.fixture(scope="session")
def sigma(machine):
    return build_alphabet(machine)
