"""Rate-2 fast-decodable space-time block codes for n_t x 2 MIMO systems."""

from .fields import FIELD_IDS, FieldContext, KElem, LElem, make_field
from .algebra import (AlgElem, BimoduleElem, block_codeword_exact, block_inverse,
                      det_in_l_delta, nonnorm_sweep, right_inverse)
from .codes import (CODE_IDS, CodeDescriptor, Constellation, build_code,
                    descriptor_json, encode, generator_matrix, make_constellation,
                    perfect_codeword, rate, sr_decompose_check)
from .analysis import (MinDetResult, QuantizationReport, cubic_shaping_check,
                       det_quantization_check, group_separability,
                       min_det_exhaustive, min_det_sampled, min_det_targeted)
from .decoder import DecodeResult, ml_exhaustive, ml_fast, ml_metric
from .channel import (SimulationReport, report_to_csv, sample_channel,
                      simulate_cer)

__version__ = "0.1.0"
