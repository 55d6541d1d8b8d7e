#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
SVG line charts
One chart per series or profile group; output bytes depend only on the data
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Union

import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

logger = logging.getLogger(__name__)

SVG_RC = {
    'svg.hashsalt': 'celldiff',
    'svg.fonttype': 'none',
    'path.simplify': False,
}


@dataclass
class LinePlot:
    """Lines sharing one x axis; each entry of lines is label -> (x, y)"""

    name: str
    xlabel: str
    ylabel: str
    lines: Dict[str, tuple] = field(default_factory=dict)
    logy: bool = False


@dataclass
class PlotBundle:
    title: str
    plots: List[LinePlot] = field(default_factory=list)


def render_svg(plot: LinePlot, title: str, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context(SVG_RC):
        fig, ax = plt.subplots(figsize=(8, 6))
        try:
            drawn = 0
            for label, (x, y) in plot.lines.items():
                x = np.asarray(x, dtype=float)
                y = np.asarray(y, dtype=float)
                if x.size == 0:
                    continue
                ax.plot(x, y, label=label, linewidth=1.0)
                drawn += 1
            if plot.logy and drawn:
                ax.set_yscale('log')
            ax.set_title(title)
            ax.set_xlabel(plot.xlabel)
            ax.set_ylabel(plot.ylabel)
            if drawn > 1:
                ax.legend()
            fig.savefig(path, format='svg', metadata={'Date': None})
        finally:
            plt.close(fig)
    return path


def emit_plots(bundle: PlotBundle, out_dir: Union[str, Path]) -> List[Path]:
    """Write <name>.svg for every plot of the bundle"""
    paths = []
    for plot in bundle.plots:
        title = f"{bundle.title}: {plot.name}"
        paths.append(render_svg(plot, title, Path(out_dir) / f"{plot.name}.svg"))
    logger.info(f"Wrote {len(paths)} plots to {out_dir}")
    return paths
