"""Write the CSV figure data of all four worked examples.

Run:  python demos/figure_data.py [out_dir]      (default: ./figure-data)
"""

import sys
from pathlib import Path

from fracgpe.config import PRESETS, load_preset
from fracgpe.figures import write_figures

out = Path(sys.argv[1] if len(sys.argv) > 1 else "figure-data")
for ex in PRESETS:
    paths = write_figures(load_preset(ex), out / f"example{ex}")
    print(f"example {ex}: " + ", ".join(p.name for p in paths))
