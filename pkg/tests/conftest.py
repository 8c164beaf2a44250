import pytest

from topoplan import parse_rotation_system

K3 = "PLANAREMB 1\n3 3\n2 1 3\n2 2 1\n2 3 2\n1 2\n2 3\n1 3\nroot 1 1\n"
P2 = "PLANAREMB 1\n2 1\n1 1\n1 1\n1 2\nroot 1 1\n"
# one node carrying a single self-loop
LOOP = "PLANAREMB 1\n1 1\n2 1 1\n1 1\nroot 1 1\n"
# two nodes joined by three parallel edges
MULTI = "PLANAREMB 1\n2 3\n3 1 2 3\n3 3 2 1\n1 2\n1 2\n1 2\nroot 1 1\n"
# triangle 1-2-3 with a pendant node 4 hanging off node 3 (edge 4 is a bridge)
BRIDGE = "PLANAREMB 1\n4 4\n2 1 3\n2 2 1\n3 3 4 2\n1 4\n1 2\n2 3\n1 3\n3 4\nroot 1 1\n"

# Eight nodes, fourteen edges, eight faces, including a self-loop at node 1.
# Edges: 1:(1,1) 2:(1,2) 3:(2,3) 4:(3,4) 5:(4,5) 6:(5,8) 7:(8,1) 8:(1,6)
#        9:(6,7) 10:(7,8) 11:(2,6) 12:(3,6) 13:(3,7) 14:(4,7)
SAMPLE8 = """PLANAREMB 1
8 14
5 2 8 7 1 1
3 3 11 2
4 4 13 12 3
3 5 14 4
2 6 5
4 9 8 11 12
4 10 9 13 14
3 6 7 10
1 1
1 2
2 3
3 4
4 5
5 8
8 1
1 6
6 7
7 8
2 6
3 6
3 7
4 7
root 1 1
"""

FIXTURES = {"K3": K3, "P2": P2, "loop": LOOP, "multi": MULTI, "bridge": BRIDGE, "sample8": SAMPLE8}


@pytest.fixture(params=sorted(FIXTURES))
def fixture_rs(request):
    return request.param, parse_rotation_system(FIXTURES[request.param])


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE = {}


def record_criterion(number: int, title: str, ok: bool, detail: str):
    ACCEPTANCE[number] = f"criterion {number} ({title}): {'PASS' if ok else 'FAIL'} | {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
