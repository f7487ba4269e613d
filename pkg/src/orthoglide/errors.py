"""Exceptions raised by the kinematic, singularity and geometry routines."""


class OrthoglideError(ValueError):
    """Base class for every domain error in this package."""


class OutsideReach(OrthoglideError):
    """Target point lies outside the cylinder intersection; an IK radicand is negative."""


class DegenerateJoint(OrthoglideError):
    """A joint value is zero, so the direct-kinematics parametrisation is undefined."""


class NoAssembly(OrthoglideError):
    """Joint values admit no real direct-kinematics solution."""


class SerialBoundary(OrthoglideError):
    """A leg is orthogonal to its axis (p_i == rho_i); the branch index is undefined."""


class FlatBoundary(OrthoglideError):
    """The TCP lies in the plane of the joint centres; the assembly mode is undefined."""


class SerialDegenerate(OrthoglideError):
    """The inverse Jacobian has a vanishing denominator (serial singularity)."""


class NotAPosture(OrthoglideError):
    """The (p, rho) pair does not satisfy the loop-closure equations."""


class NotOnSphere(OrthoglideError):
    """Point is not on the sphere of radius L."""


class NoBoundary(OrthoglideError):
    """No positive joint value puts the given pair on the jointspace boundary."""
