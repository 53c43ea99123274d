"""Exact-plus-numeric toolkit for a divergent q-series expansion at q -> 1.

Modules:
  field       exact arithmetic in Q(i, 5**(1/4)) and its subfields
  sequences   Eulerian/Bernoulli tables, negative-order polylogs, delta values
  series      truncated formal series in t = sqrt(s) with v-polynomial coefficients
  expansion   exact expansion coefficients b_j / c_j of the normalized remainder
  qseries     arbitrary-precision evaluation and numeric verification
  divergence  growth diagnostics quantifying why the expansion diverges
  suites      named verification suites shared by the CLI and the test suite
  cli         batch command-line interface
"""

from .field import FieldElem, SubfieldTag
from .expansion import ExpansionResult, compute_expansion, render_expansion

__all__ = [
    "FieldElem",
    "SubfieldTag",
    "ExpansionResult",
    "compute_expansion",
    "render_expansion",
]

__version__ = "0.1.0"
