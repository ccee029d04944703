"""Transcendental Kapteyn sums: integral forms, coefficient tables, asymptotics."""
from .asymptotic import AsymptoticRangeWarning, AsymResult, asym_eval, asym_ids, reference_value
from .integrals import (
    aux_integral,
    cot_integral,
    csc2_integral,
    log_integral,
    regularized_jprime_sum,
)
from .integrands import IntegrandParams
from .tables import (
    TABLES,
    CoeffTable,
    eval_coeff_table,
    eval_table_oracle,
    extract_taylor_coeff,
    get_table,
    table_ids,
    truncation_bound,
    verify_table,
)

__all__ = [
    "AsymResult",
    "AsymptoticRangeWarning",
    "CoeffTable",
    "IntegrandParams",
    "TABLES",
    "asym_eval",
    "asym_ids",
    "aux_integral",
    "cot_integral",
    "csc2_integral",
    "eval_coeff_table",
    "eval_table_oracle",
    "extract_taylor_coeff",
    "get_table",
    "log_integral",
    "reference_value",
    "regularized_jprime_sum",
    "table_ids",
    "truncation_bound",
    "verify_table",
]
