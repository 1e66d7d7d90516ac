"""Write a Werner-like scan to CSV and read it back.

The CSV holds one row per grid point: the parameters followed by the verdict
fields, with floats at 12 significant digits.
"""

import sys
import tempfile
from pathlib import Path

from qbroadcast import ClonerSpec, scan
from qbroadcast.reporting import scan_from_csv, scan_to_csv

spec = ClonerSpec.si("local")
report = scan("werner", spec, 32)
text = scan_to_csv(report)

path = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.gettempdir()) / "werner_local.csv"
path.write_text(text)
print(f"wrote {len(report)} rows to {path}")
print(text.splitlines()[0])
print("summary:", report.summary())
print("round trip equal:", scan_from_csv(path.read_text(), spec).same_as(report))
