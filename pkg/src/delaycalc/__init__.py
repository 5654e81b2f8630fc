"""Exact-arithmetic calculus of delay models for binary signals."""
from .conditions import (
    BdcParams,
    BridcParams,
    CheckReport,
    MinMaxParams,
    RidcParams,
    Witness,
    cc_bdc,
    cc_bridc,
    cc_witness,
    check_bdc,
    check_bridc,
    check_dridc_form,
    check_fdc,
    check_ridc,
    check_sc,
    fdc_apply,
    nzc,
    solve_dridc,
)
from .elements import (
    DRIDE,
    Fixed,
    FullBDE,
    FullBRIDE,
    FullRIDE,
    Wire,
    chain_apply,
    compose_params,
    membership,
    ride_composition_counterexample,
    sample,
)
from .errors import DelayCalcError
from .sigcore import IntervalSet, Signal, StepFunction, make_signal, support, translate
from .textio import format_signal, parse_signal, parse_signals
from .windows import WindowSpec, dilate, erode, erode_via_derivative

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
