"""Dynamic parameterized algorithms on unit disk graphs under point insertions and deletions."""

from .core import CoreCluster, CoreDelta
from .grid import GridIndex, cell_distance, cell_of, neighbor_cells
from .harness import DynamicUDG, RunReport, diff_run, run_trace
from .kpath import KPathIndex, heavy_threshold
from .lcforest import BACKEND, LinkCutError, LinkCutForest
from .shell import ShellState
from .solvers import CYCLE, PATH, Multigraph
from .trace import format_trace, generate_trace, parse_trace, verify_witness
from .vc import VCKernel

__all__ = [
    "BACKEND",
    "CYCLE",
    "CoreCluster",
    "CoreDelta",
    "DynamicUDG",
    "GridIndex",
    "KPathIndex",
    "LinkCutError",
    "LinkCutForest",
    "Multigraph",
    "PATH",
    "RunReport",
    "ShellState",
    "VCKernel",
    "cell_distance",
    "cell_of",
    "diff_run",
    "format_trace",
    "generate_trace",
    "heavy_threshold",
    "neighbor_cells",
    "parse_trace",
    "run_trace",
    "verify_witness",
]
