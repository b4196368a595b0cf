# -*- coding: utf-8 -*-
"""
Plot-script generator.

Experiments write a small standalone matplotlib script next to their CSV.
The package itself never imports a plotting library; running the script is
left to whoever has one installed.
"""

from pathlib import Path
from typing import Optional, Tuple

HISTOGRAM_TEMPLATE = '''# -*- coding: utf-8 -*-
"""
{title}

Histogram of final normalized energies from {csv_name}.
Dashed lines denote the predicted region of local minima.
"""

import csv
from pathlib import Path

import matplotlib.pyplot as plt

here = Path(__file__).parent
with open(here / "{csv_name}", newline="", encoding="utf-8") as f:
    energies = [
        float(row["final_normalized_energy"])
        for row in csv.DictReader(f)
        if not row["halt_reason"].startswith("error")
    ]

fig, ax = plt.subplots(figsize=(6, 4))
ax.hist(energies, bins={bins}, range=(0.0, {x_max}), color="tab:blue", alpha=0.8)
for edge in {band_edges!r}:
    ax.axvline(edge, color="black", linestyle="--", linewidth=1)
ax.set_xlabel("normalized energy")
ax.set_ylabel("count")
ax.set_title("{title}")
fig.tight_layout()
fig.savefig(here / "{png_name}", dpi=150)
'''


def render_histogram_script(
    csv_name: str,
    title: str,
    band: Optional[Tuple[float, float]],
    png_name: str = "histogram.png",
    bins: int = 20,
) -> str:
    """
    Source of a matplotlib script drawing the energy histogram.

    Args:
        csv_name: Results CSV, relative to the script.
        title: Figure title.
        band: Predicted band drawn as dashed lines; None draws none.
        png_name: Output image name.
        bins: Histogram bins.
    """
    band_edges = [] if band is None else [round(band[0], 6), round(band[1], 6)]
    x_max = max([1.2] + [edge + 0.1 for edge in band_edges])
    return HISTOGRAM_TEMPLATE.format(
        title=title,
        csv_name=csv_name,
        png_name=png_name,
        bins=bins,
        x_max=round(x_max, 3),
        band_edges=band_edges,
    )


def write_histogram_script(path: Path, csv_name: str, title: str, band: Optional[Tuple[float, float]]) -> Path:
    """Write the histogram script to ``path``."""
    path.write_text(render_histogram_script(csv_name, title, band), encoding="utf-8")
    return path
