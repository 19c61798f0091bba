from .primes import Backend, PowerSum, PrimeTable, count_twin_primes, odd_primes_up_to, power_sum
from .primes import sieve_primes
from .symmetric import AsymptoticContext, IdentityReport, SymmetricSeries, check_identities
from .symmetric import esp_direct, esp_recursive, esp_via_newton, leading_order_f
from .model import CorrectionFactor, HLConstant, HLMode, Prediction, correction_exact
from .model import correction_series, hl_constant, li2_integral, predict_hl, predict_this_work
from .config import ModelConfig, OutputFormat
from .experiment import TableRow, run_table, sieving_limit_sweep, truncation_sweep
from ._version import __version__
