"""
Validation tests package

Quadrature rules against independent oracles and closed-form values.
"""
