"""
fptmc: parameterized model checking of first-order logic
"""

__version__ = "0.1.0"
