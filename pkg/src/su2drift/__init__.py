"""Correlated SU(2) rotation-diffusion channel on qubit registers.

Modules
-------
halfint     half-integer spin labels
wigner      Clebsch-Gordan, 6j, and recoupling coefficients
su2         group elements, Haar and heat-kernel sampling, irrep matrices
coupling    angular-momentum coupling schemes, twirl, convention shifts
channel     the diffusion channel, its Choi matrix, and a Monte Carlo oracle
three_qubit closed-form three-qubit analysis, fidelities, capacities
numerics    entropies, derivative-free optimization, quadrature
serialize   JSON import/export for density matrices
verify      named self-check suite
"""

from .halfint import HalfInteger, twice
from .wigner import clebsch_gordan, recoupling_u, wigner_6j
from .su2 import (
    SU2Element,
    UnsupportedRegimeError,
    character,
    haar_sample,
    heat_kernel_density,
    heat_kernel_sample,
    wigner_d,
)
from .coupling import (
    CouplingPath,
    TwirledState,
    coupled_basis_states,
    embed,
    enumerate_paths,
    multiplicity,
    twirl,
)
from .channel import (
    ChannelSpec,
    MonteCarloResult,
    channel_apply,
    choi_matrix,
    monte_carlo_channel,
    r_coefficient,
)
from .three_qubit import (
    average_fidelity,
    coherent_info_threshold,
    coherent_information,
    fidelity,
    holevo_chi,
    maximize_coherent_info,
    maximize_holevo,
    qutrit_channel,
)
from .numerics import (
    OptimizerConfig,
    bisect_zero,
    nelder_mead_maximize,
    sphere_quadrature,
    von_neumann_entropy,
)
from .serialize import load_density, save_density

__version__ = "0.1.0"
