"""Kinematics, workspace geometry and singularity analysis of the Orthoglide
three-axis translational parallel manipulator."""

from orthoglide.errors import (
    DegenerateJoint,
    FlatBoundary,
    NoAssembly,
    NoBoundary,
    NotAPosture,
    NotOnSphere,
    OrthoglideError,
    OutsideReach,
    SerialBoundary,
    SerialDegenerate,
)
from orthoglide.geometry import (
    MeshSpec,
    SurfaceGrid,
    VolumeReport,
    boundary_rho_x,
    characteristic_points,
    flat_singularity_mesh,
    jointspace_mesh,
    volume_closed_form,
    volume_monte_carlo,
    workspace_mesh,
)
from orthoglide.kinematics import (
    BRANCHES,
    PPP,
    Branch,
    FkQuadratic,
    FkSolution,
    IKResult,
    JointRegion,
    Region,
    assembly_mode,
    branch_indices,
    direct_kinematics,
    fk_quadratic,
    fk_solutions,
    ik_all_feasible,
    inverse_kinematics,
    jointspace_membership,
    region_membership,
)
from orthoglide.singularity import (
    LegAngles,
    SingularityClass,
    SingularityKind,
    boundary_postures,
    classify_configuration,
    det_inverse_jacobian,
    flat_residual,
    inverse_condition_number,
    inverse_jacobian,
    leg_angles,
)

__version__ = "0.1.0"
