import pytest
from hypothesis import HealthCheck, settings

from zar.arch import default_architecture, narrow_architecture
from zar.circuit import Circuit, cz

settings.register_profile("ci", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")

# Interaction graph of the worked example, in circuit order.
WORKED_EDGES = [(7, 5), (7, 6), (7, 2), (7, 4), (1, 5), (1, 2), (3, 5), (3, 2)]
CYCLE4_EDGES = [(1, 2), (2, 3), (3, 4), (4, 1)]


def cz_circuit(edges, num_qubits=None):
    n = num_qubits if num_qubits is not None else max(max(e) for e in edges) + 1
    return Circuit(n, [cz(i, a, b) for i, (a, b) in enumerate(edges)])


@pytest.fixture
def arch():
    return default_architecture()


@pytest.fixture
def narrow():
    return narrow_architecture()


@pytest.fixture
def worked_circuit():
    return cz_circuit(WORKED_EDGES)


@pytest.fixture
def cycle4_circuit():
    return cz_circuit(CYCLE4_EDGES)


ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
