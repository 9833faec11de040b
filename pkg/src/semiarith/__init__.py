"""Semi-arithmetic Fuchsian groups: number fields, hyperbolic polygons,
surface covers, congruence reductions and quaternion systole bounds."""

__version__ = "0.1.0"
