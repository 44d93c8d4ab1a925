"""
Numerical kernel: Clifford algebra, jets, tetrads, forms and field equations
"""
