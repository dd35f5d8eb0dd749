"""Köthe sequence spaces, Toeplitz operators between them, and window
certificates for continuity, compactness, and family tameness.

The package decides, with finite evidence, quantifier conditions of the
shape codomain_weight(n, k) <= C * domain_weight(n, m): a certificate
search over raw weights (`criteria`), cross-validated by a numerical
column-norm oracle (`oracle`).  All weight-scale arithmetic happens in log
domain (`logdomain`); verdicts are trichotomous window statements
(`verdicts`), never asymptotic proofs.
"""

from .errors import (
    ConfigurationError,
    InvariantError,
    KoetheError,
    NotWellDefinedError,
    UnsupportedCombinationError,
    WindowError,
)
from .logdomain import LOG_ZERO, LogValue, linear_or_none, log_add, log_sum
from .verdicts import (
    BoundCertificate,
    CompositeCertificate,
    FailureWitness,
    Outcome,
    PointwiseCertificate,
    TameCertificate,
    UniformCertificate,
    Verdict,
    Window,
)
from .spaces import (
    ExponentSequence,
    SeriesClass,
    SeriesVerdict,
    SpaceDescriptor,
    SubadditivityReport,
    classify_series,
    gp_probe,
    nuclearity_verdict,
    seminorm_sum,
    seminorm_sup,
    stability_constant,
    subadditivity_constant,
    weight,
)
from .operators import (
    NormKind,
    Symbol,
    SymbolSpec,
    ToeplitzOperator,
    Variant,
    apply_dense,
    apply_fast,
    column,
    column_norm,
    column_norm_profile,
    decompose,
    membership_in_dual,
    membership_in_space,
)
from .criteria import (
    COMPACTNESS,
    CONTINUITY,
    FamilySpec,
    NStart,
    OperatorReport,
    OperatorTemplate,
    QuantifierCondition,
    Shape,
    SMap,
    TamenessReport,
    certify,
    compactness_verdict,
    continuity_verdict,
    replay_certificate,
    tame_condition_certify,
    tameness_check,
    weight_domination,
)
from .oracle import (
    Agreement,
    CrossReport,
    RatioCurve,
    cross_validate,
    dense_truncation,
    oracle_compactness,
    oracle_continuity,
    ratio_curve,
)

__version__ = "0.1.0"

__all__ = [
    "Agreement",
    "BoundCertificate",
    "COMPACTNESS",
    "CONTINUITY",
    "CompositeCertificate",
    "ConfigurationError",
    "CrossReport",
    "ExponentSequence",
    "FailureWitness",
    "FamilySpec",
    "InvariantError",
    "KoetheError",
    "LOG_ZERO",
    "LogValue",
    "NormKind",
    "NotWellDefinedError",
    "NStart",
    "OperatorReport",
    "OperatorTemplate",
    "Outcome",
    "PointwiseCertificate",
    "QuantifierCondition",
    "RatioCurve",
    "SeriesClass",
    "SeriesVerdict",
    "Shape",
    "SMap",
    "SpaceDescriptor",
    "SubadditivityReport",
    "Symbol",
    "SymbolSpec",
    "TameCertificate",
    "TamenessReport",
    "ToeplitzOperator",
    "UniformCertificate",
    "UnsupportedCombinationError",
    "Variant",
    "Verdict",
    "Window",
    "WindowError",
    "apply_dense",
    "apply_fast",
    "certify",
    "classify_series",
    "column",
    "column_norm",
    "column_norm_profile",
    "compactness_verdict",
    "continuity_verdict",
    "cross_validate",
    "decompose",
    "dense_truncation",
    "gp_probe",
    "linear_or_none",
    "log_add",
    "log_sum",
    "membership_in_dual",
    "membership_in_space",
    "nuclearity_verdict",
    "oracle_compactness",
    "oracle_continuity",
    "ratio_curve",
    "replay_certificate",
    "seminorm_sum",
    "seminorm_sup",
    "stability_constant",
    "subadditivity_constant",
    "tame_condition_certify",
    "tameness_check",
    "weight",
    "weight_domination",
]
