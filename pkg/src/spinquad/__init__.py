"""Exact configuration-space obstacles of rotational motion as spin-quadrics on S^3."""
from .errors import (
    AtPole,
    DegenerateEigenvector,
    EmptyCase,
    EmptyMesh,
    ImproperPredicate,
    InvalidReducedPredicate,
    NegativeRadicand,
    NoEigenplane,
    OutOfDomain,
    SceneSyntaxError,
    ZeroSpinor,
    ZeroVector,
)
from .param import (
    CaseMetadata,
    ChartParams,
    ChartPoint,
    ParamCase,
    SampleSet,
    case_metadata,
    classify_case,
    classify_reduced,
    eval_spinor,
    eval_t,
    sample_chart,
)
from .predicate import (
    DerivedQuantities,
    GeneralPredicate,
    Kind,
    PredicateKind,
    ReducedPredicate,
    SpinMatrix,
    Spinor,
    assemble_matrix,
    classify_predicate,
    derived_quantities,
    evaluate_predicate_direct,
    evaluate_quadratic_form,
    make_reduced,
    normalize_vector,
    reduce,
)
from .rational import RationalVec3
from .scene import SceneDocument, Triangle, expand_triangle_pair, parse_scene, print_scene
from .spectrum import (
    EigenFrame,
    Eigenplane,
    Spectrum,
    characteristic_poly_check,
    eigenplanes_toroidal,
    eigenvalues,
    eigenvector_ellipsoidal,
    orthonormal_frame,
)
from .viz import (
    MeshBuffer,
    ProjectionSpec,
    emit_mesh,
    inverse_stereographic,
    stereographic_project,
    to_obj,
    weld_domain_holes,
)

__version__ = "0.1.0"
