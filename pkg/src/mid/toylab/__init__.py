"""Exact bounded complexities on a small fixed prefix machine."""
from .checks import (DensityReport, DominanceReport, admissible_offset, density_all, density_check,
                     dominance_check, emax_table, hamming_distance, literal_length, toy_universe)
from .machine import (COPY_PROGRAM, DIVERGE, INVALID, MACHINE_ID, BudgetError, enumerate_programs,
                      enumerate_templates, run)
from .oracle import (DEFAULT_L, DEFAULT_S, OracleSource, OracleTable, SoiResidual, apriori_probability,
                     bounded_complexity, bounded_emax, coding_check, oracle, pair_bits, soi_residual)
