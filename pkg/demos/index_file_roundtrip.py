"""
Saving, reloading and checking an index
=======================================

The index file holds only the payload bitvectors and tables; rank/select
directories are rebuilt on load. Every query family is then checked against
a plain pointer-based implementation.
"""

import pathlib
import tempfile

from topoplan import IndexFormatError, TopoIndex, run_battery
from topoplan.generate import grid, with_extras

rs = with_extras(grid(12, 15), loops=4, parallels=6, seed=2)
index = TopoIndex.build(rs)

for name, bits in index.space_report().items():
    print(f"{name:24s} {bits}")

tmp = pathlib.Path(tempfile.mkdtemp()) / "grid.idx"
index.save(tmp)
print("\nwrote", tmp, tmp.stat().st_size, "bytes")

again = TopoIndex.load(tmp)
report = run_battery(again, rs, budget=20000)
print("\n".join(report.lines()))

# flip one bit inside the file; loading must refuse it
raw = bytearray(tmp.read_bytes())
raw[-3] ^= 0x10
tmp.write_bytes(bytes(raw))
try:
    TopoIndex.load(tmp)
except IndexFormatError as err:
    print("\ncorrupted file rejected:", err)
