"""Exact computational workbench for coalgebras and comodules over Z/n.

Represents finite free coalgebras and comodules by structure constants,
computes dual convolution algebras, comodule endomorphism rings and
subcomodule lattices exactly, and decides cleanness and continuity
properties with explicit, re-verifiable witnesses.
"""

from .clean import (
    AnnihilatorReport,
    CleanReport,
    CleanWitness,
    annihilator_condition,
    clean_element,
    clean_ring,
    decomposition_equivalence,
    idempotents,
    units,
)
from .coalgebra import (
    Coalgebra,
    DualAlgebra,
    direct_sum,
    dual_algebra,
    make_grouplike,
    make_matrix_coalgebra,
    make_trivial,
    validate_coalgebra,
)
from .comodule import (
    Comodule,
    EndRing,
    MorphismSpace,
    cstar_action,
    cstar_end,
    end_ring,
    free_comodule,
    hom_space,
    validate_comodule,
)
from .continuity import (
    ContinuityReport,
    alpha_star_check,
    clean_pair_poset,
    closed_complement,
    closures,
    continuity_classify,
    essential_transitivity_check,
    idempotent_extension_check,
    is_essential,
    lattice_info,
)
from .instancefile import (
    InstanceFile,
    load_instance,
    parse_instance,
    serialize_instance,
)
from .linalg import (
    CapExceeded,
    HowellForm,
    RMatrix,
    RingSpec,
    howell,
    intersect_rowspans,
    is_unit_matrix,
    kernel,
    solve,
)
from .shiftspace import (
    FinSuppSequence,
    check_shift_identities,
    forward_shift,
    shift_idempotent_part,
    shift_unit_part,
)
from .subcomodule import (
    Subcomodule,
    comodule_iso,
    generated_subcomodule,
    quotient_comodule,
    sub_intersect,
    sub_sum,
    subcomodule_lattice,
)

__version__ = "0.1.0"
