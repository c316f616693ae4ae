"""Diagonalization of real quadratic forms in ladder operators.

Bogoliubov normal forms and exact spectra for fermionic and bosonic
quadratic Hamiltonians, a brute-force Fock-space oracle, and Morse-type
counting of local zero modes at vector-field singular points.
"""

from .errors import (
    BogodiagError,
    ContinuousSpectrum,
    DefectiveMatrix,
    DegeneratePoint,
    NonCanonicalTransform,
    NonDiscreteMode,
    NonRealSpectrum,
    ResourceLimitError,
    ValidationError,
)
from .forms import (
    BogoliubovTransform,
    QuadraticForm,
    StandardForm,
    Statistics,
    Violation,
    apply_transform,
    compose,
    form_from_dict,
    from_standard,
    is_canonical,
    is_positive,
    random_canonical,
    to_standard,
    transform_from_dict,
    validate,
)
from .fock import (
    BosonFockRep,
    FermionFockRep,
    TruncationResult,
    bogoliubov_mode_operators,
    build_boson_rep,
    build_fermion_rep,
    build_hamiltonian,
    build_standard_hamiltonian,
    exact_spectrum,
    lowest_eigenvalues,
    parity_sectors,
    sector_spectra,
    truncation_stable_spectrum,
)
from .spectral import (
    LEVEL_COEFF,
    BosonMode,
    BosonModeData,
    FermionModeData,
    ModeClass,
    Parity,
    SpectrumEntry,
    SpectrumResult,
    boson_mode_levels,
    boson_spectrum,
    diagonalize_boson,
    diagonalize_fermion,
    fermion_invariants,
    fermion_spectrum,
    smallest_sums,
)
from .morse import (
    TWO_FORM_COEFF,
    MorseReport,
    PointReport,
    SingularPoint,
    VectorFieldFixture,
    cross_term_identity,
    fixture_from_dict,
    local_witten_spectrum,
    morse_report,
    point_sign,
    poincare_hopf_check,
    wedge_contraction_identity,
    zero_mode_parity,
)

__version__ = "0.1.0"
