from pathlib import Path

import pytest

from eetc.model import Interaction, Trace
from eetc.parser import parse_file, resolve

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
CAR_RENTAL = FIXTURES / "car_rental.eet"


def ev(sender, receiver, message, *args):
    return Interaction(sender, receiver, message, tuple(args))


FIG2 = Trace((
    ev("Customer", "ReservationBranch", "request", "p1", "p2", "compact"),
    ev("ReservationBranch", "PickupBranch", "check_availability", "p1", "p2", "compact"),
    ev("PickupBranch", "ReservationBranch", "available"),
    ev("ReservationBranch", "Customer", "offer", "q1"),
    ev("Customer", "ReservationBranch", "confirmation"),
))

NOT_AVAILABLE = Trace((
    ev("Customer", "ReservationBranch", "request", "p1", "p1", "van"),
    ev("ReservationBranch", "PickupBranch", "check_availability", "p1", "p1", "van"),
    ev("PickupBranch", "ReservationBranch", "not_available"),
    ev("ReservationBranch", "Customer", "no_offer"),
))


@pytest.fixture(scope="session")
def car():
    return parse_file(CAR_RENTAL)


@pytest.fixture(scope="session")
def eets(car):
    """Resolved expressions of the car-rental document, by name."""
    return {name: resolve(car, name) for name in car.eets}


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
