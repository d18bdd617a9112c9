"""Bargmann and polyanalytic Bargmann transforms, Fock-space convolution
operators and numerical checks of their identities."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .grids import (ComplexGrid, PhaseSpaceFunction, RealGrid, SampledSignal,  # noqa: F401
                    integrate_complex, integrate_real)
from .special import (HermiteOrder, antideriv_A, gaussian_integral, hermite_eval,  # noqa: F401
                      laguerre_eval)
from .transforms import (WeightedFockFunction, WindowSpec, bargmann, bargmann_adjoint,  # noqa: F401
                         poly_bargmann, poly_bargmann_adjoint, stft, stft_adjoint)
from .symbols import (PhiSymbol, PsiSymbol, Symbol, parse_symbol, symbol_phi,  # noqa: F401
                      symbol_phi_from_multiplier, symbol_psi)
from .operators import (FockOperator, apply_S, apply_S_translation_form,  # noqa: F401
                        convolve_symbol, fock_shift, tf_shift)
from .diagnostics import (berezin_diagonal, envelope_profile, fock_norm, gabor_matrix,  # noqa: F401
                          modulation_norm, operator_norm_lower_bound)
