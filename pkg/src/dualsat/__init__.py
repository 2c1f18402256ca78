"""System-level simulator for co-located dual multibeam satellites.

Compares conventional frequency splitting, cooperative joint processing,
coordinated precoding with interference-aware user allocation, and cognitive
beam-hopping under one link budget and total power constraint.
"""

from .architectures import (ARCHITECTURES, ArchitectureResult,
                            eval_cognitive, eval_conventional,
                            eval_cooperative, eval_coordinated)
from .beamhopping import (SlotPattern, primary_pattern,
                          secondary_pattern, secondary_power_control)
from .channel import DualChannel, build_channel, gain_matrix, peak_gain_dbi
from .errors import (ConfigError, ConvergenceError, NumericalError,
                     PatternError, RankDeficientError)
from .geometry import (BeamLayout, UserTerminal, build_beam_layout,
                       build_overlay_layout, coverage_gap_km, drop_users)
from .linkbudget import (LinkBudget, budget_audit, db_to_linear,
                         free_space_loss_db, linear_to_db, noise_power_dbw,
                         noise_power_w)
from .antenna import antenna_gain, pattern_gain
from .metrics import (fraction_below, jain_index, power_efficiency,
                      rate_cdf, spectral_efficiency)
from .precoding import (allocate_powers, sum_capacity_bound, water_fill,
                        zf_directions)
from .scenario import Scenario, load_scenario
from .scheduling import Allocation, siua_allocate, sus_select
from .harness import (SweepResults, SweepRow, emit_csv, emit_summary,
                      find_crossing, run_sweep)

__version__ = "0.1.0"
