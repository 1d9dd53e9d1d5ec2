"""Computer-algebra oracle for the numerical geometry package.

Everything here derives tensors from first principles (symbolic
differentiation of the metric-function closure) and exports exact or
high-precision fixtures that the numerical package consumes through its
``--fixtures`` interface.  This directory is deliberately not part of the
installed package: the numerical library must never depend on it.
"""
