"""sboxforge: analysis and construction of bijective S-boxes over GF(2^n).

Layers:

* :mod:`sboxforge.gf2n` — field arithmetic with log/antilog tables
* :mod:`sboxforge.boolfn` — truth tables, ANF, degree, affinity, counting
* :mod:`sboxforge.metrics` — DDT, Walsh spectrum, DU/NL, fibre structure
* :mod:`sboxforge.powermap` — cyclotomic cosets and the power-map survey
* :mod:`sboxforge.construct` — binomial lift, bijection repair, search
* :mod:`sboxforge.cli` — the `sboxforge` command
"""

__version__ = "0.1.0"

from .boolfn import (
    AnfForm,
    TruthTable,
    VectorialFunction,
    algebraic_degree,
    anf,
    class_sizes,
    component,
    is_affine,
    is_balanced,
    nonaffine_permutation_bounds,
    weight,
)
from .construct import (
    BinomialParams,
    RepairOutcome,
    SearchResult,
    binomial_table,
    check_binomial_invariance,
    coefficient_search,
    repair,
)
from .gf2n import AES_POLY, FieldSpec, default_poly, gf_mul, gf_pow, is_irreducible, make_field
from .metrics import (
    DDTable,
    FibreProfile,
    WalshTable,
    ddt,
    differential_uniformity,
    fibre_profile,
    is_bijective,
    nl_upper_bounds,
    nonlinearity,
    walsh,
)
from .powermap import (
    ExponentClass,
    all_cosets,
    cyclotomic_coset,
    gold_exponents,
    kasami_exponents,
    power_table,
    survey,
)

__all__ = [
    "__version__",
    "AES_POLY",
    "AnfForm",
    "BinomialParams",
    "DDTable",
    "ExponentClass",
    "FibreProfile",
    "FieldSpec",
    "RepairOutcome",
    "SearchResult",
    "TruthTable",
    "VectorialFunction",
    "WalshTable",
    "algebraic_degree",
    "all_cosets",
    "anf",
    "binomial_table",
    "check_binomial_invariance",
    "class_sizes",
    "coefficient_search",
    "component",
    "cyclotomic_coset",
    "ddt",
    "default_poly",
    "differential_uniformity",
    "fibre_profile",
    "gf_mul",
    "gf_pow",
    "gold_exponents",
    "is_affine",
    "is_balanced",
    "is_bijective",
    "is_irreducible",
    "kasami_exponents",
    "make_field",
    "nl_upper_bounds",
    "nonaffine_permutation_bounds",
    "nonlinearity",
    "power_table",
    "repair",
    "survey",
    "walsh",
    "weight",
]
