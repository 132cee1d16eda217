import pytest

from afflang.parser import Abbreviation, parse_type

NAT = parse_type("mu X. I + X")
LIST = Abbreviation(("A",), parse_type("mu Y. I + A * Y"))


@pytest.fixture
def nat():
    return NAT


@pytest.fixture
def abbrevs():
    return {"Nat": Abbreviation((), NAT), "List": LIST}
