"""
cliffordcheck: numerical verification of the Clifford-bundle calculus of tetrad gravity
"""
__version__ = "1.0.0"
